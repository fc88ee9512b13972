#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "splatscene/layout.hpp"
#include "splatscene/scene_spec.hpp"

namespace splat {

struct CameraPose {
    Vec3 position;
    double yaw = 0.0;    // about +z; forward is +y at yaw 0
    double pitch = 0.0;  // [-pi/2, pi/2], positive looks up
    double fov = 60.0 * M_PI / 180.0;

    Vec3 forward() const;
    Vec3 right() const;
    Vec3 up() const;
};

struct CameraParams {
    double stage1_radius_fraction = 0.25;  // rho_1
    double eye_min = 1.2, eye_max = 1.8;   // indoor eye height range (m)
    double eye_outdoor = 1.6;
    double fov = 60.0 * M_PI / 180.0;
    double inflation = 0.2;  // camera-object collision margin (m)
};

struct PosePlan {
    std::vector<CameraPose> stage1, stage2, stage3;
    SceneDims scene;
};

// Horizontal scene radius used by the samplers: min(W, L)/2 indoor, R outdoor.
double sceneRadius(const SceneDims& scene);

std::vector<CameraPose> sampleStage1(const SceneDims& scene, int count,
                                     std::uint64_t seed,
                                     const CameraParams& params = {});

std::vector<CameraPose> sampleStage2Indoor(const SceneDims& scene, const Layout& layout,
                                           int per_region, std::uint64_t seed,
                                           const CameraParams& params = {});

std::vector<CameraPose> sampleStage2Outdoor(const SceneDims& scene, int circles,
                                            int batches, std::uint64_t seed,
                                            const CameraParams& params = {});

std::vector<CameraPose> assembleStage3(const std::vector<CameraPose>& stage1,
                                       const std::vector<CameraPose>& stage2);

std::vector<CameraPose> rejectCollidingPoses(const std::vector<CameraPose>& poses,
                                             const Layout& layout,
                                             const std::map<std::string, Box3>& assets,
                                             double inflation);

std::vector<CameraPose> evaluationTrajectory(const SceneDims& scene, double step,
                                             int azimuths,
                                             const CameraParams& params = {});

std::string serializePoses(const std::vector<CameraPose>& poses, int stage);
std::vector<CameraPose> parsePoses(const std::string& jsonl);

}  // namespace splat
