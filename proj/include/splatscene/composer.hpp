#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "splatscene/gaussian.hpp"
#include "splatscene/layout.hpp"
#include "splatscene/scene_spec.hpp"

namespace splat {

struct MotionKeyframe {
    double time = 0.0;  // seconds
    AffineTransform affine;
};

struct MotionTrajectory {
    std::vector<MotionKeyframe> keyframes;  // strictly increasing times, >= 1
    void validateTrajectory() const;
};

struct SceneObject {
    std::string asset;  // asset reference (path, relative to manifest)
    AffineTransform affine;
};

struct EnvironmentConfig {
    double spacing = 0.5;
};

struct ScenePackage {
    SceneDims scene;
    std::map<std::string, SceneObject> objects;
    EnvironmentConfig environment;
    std::map<std::string, MotionTrajectory> trajectories;
};

enum class EditKind { Relocate, Add, Remove };

struct EditCommand {
    EditKind kind;
    std::string instance;
    std::optional<AffineTransform> affine;  // relocate
    std::optional<std::string> asset;       // add
};

// Gaussians tiling the six inner faces of the indoor box (floor, ceiling, then
// the 4 walls; row-major per face).
GaussianCloud initIndoorEnvironment(const SceneDims& scene, double spacing);

// Fibonacci-sampled hemisphere of radius 3R plus a ground-disk grid at z=0.
GaussianCloud initOutdoorEnvironment(const SceneDims& scene, double spacing);

GaussianCloud initEnvironment(const SceneDims& scene, double spacing);

GaussianCloud composeScene(const Layout& layout,
                           const std::map<std::string, GaussianCloud>& assets,
                           const GaussianCloud& environment);

AffineTransform sampleTrajectory(const MotionTrajectory& traj, double t);

GaussianCloud composeSceneAtTime(const ScenePackage& pkg,
                                 const std::map<std::string, GaussianCloud>& assets,
                                 const GaussianCloud& environment, double t);

// Applies the edit and reports the resulting layout check; the edit is applied
// even when violations are reported.
std::pair<ScenePackage, LayoutReport> applyEdit(
    const ScenePackage& pkg, const EditCommand& cmd, const ConstraintGraph& graph,
    const std::map<std::string, Box3>& asset_boxes, const LayoutParams& params = {});

Layout packageLayout(const ScenePackage& pkg);

std::string serializePackage(const ScenePackage& pkg);
ScenePackage deserializePackage(const std::string& json);

}  // namespace splat
