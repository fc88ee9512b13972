#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "splatscene/gaussian.hpp"
#include "splatscene/scene_spec.hpp"

namespace splat {

struct LayoutParams {
    double grid = 0.25;              // candidate grid pitch (m)
    double clearance = 0.05;         // footprint inflation for collision (m)
    double band_fraction = 0.15;     // indoor wall band, fraction of min(W, L)
    double center_fraction = 0.4;    // indoor central rectangle, fraction per axis
    double outdoor_center = 0.2;     // outdoor CENTER: r <= f * R
    double outdoor_side = 0.8;       // outdoor SIDE:   r >= f * R
    double next_margin = 0.5;        // NEXT slack beyond summed half-diagonals (m)
    double opposite_yaw_tol = 15.0 * M_PI / 180.0;
    std::int64_t search_budget = 200000;  // backtracking node expansions
};

struct Layout {
    std::map<std::string, AffineTransform> placements;
    SceneDims scene;
    std::uint64_t seed = 0;
    // relation edges the solver deferred (placed by fallback, constraint dropped)
    std::vector<Edge> deferred;
};

struct CandidateSet {
    std::string instance;
    std::vector<std::array<double, 2>> positions;  // floor plane
};

enum class ViolationKind { Collision, RelationBroken, Anchor, Bounds };

struct Violation {
    ViolationKind kind;
    std::vector<std::string> instances;
    std::string detail;
};

struct LayoutReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    bool okIgnoringRelations() const;
};

// min over axes of real_size / model_extent
double scalingFactor(const Vec3& real_size, const Box3& model_box);

AnchorRegion classifyRegion(double x, double y, const SceneDims& scene,
                            const LayoutParams& params = {});

CandidateSet candidatePositions(const std::string& instance, AnchorRegion region,
                                const SceneDims& scene, double grid,
                                const LayoutParams& params = {});

std::string selectAnchorObject(const ConstraintGraph& graph);

// true iff the clearance-inflated boxes overlap strictly in x and y
bool aabbOverlap(const Box3& a, const Box3& b, double clearance);

// Yaw whose +y forward axis points along (dx, dy).
double yawFacing(double dx, double dy);

// Relation predicate shared by solver and verifier. Positions/yaws are world
// frame; footprints are the objects' world-space boxes.
bool relationSatisfied(Relation rel, const Vec3& subject_pos, double subject_yaw,
                       const Box3& subject_box, const Vec3& object_pos,
                       double object_yaw, const Box3& object_box,
                       const LayoutParams& params = {});

// World-space footprint box of an instance: real size rotated by yaw, centered
// on the placement, resting per the placement's z.
Box3 worldFootprint(const Box3& model_box, const AffineTransform& placement);

double yawOf(const AffineTransform& a);

Layout solveLayout(const ConstraintGraph& graph,
                   const std::map<std::string, Box3>& assets, double grid,
                   std::uint64_t seed, const LayoutParams& params = {});

LayoutReport verifyLayout(const Layout& layout, const ConstraintGraph& graph,
                          const std::map<std::string, Box3>& assets,
                          const LayoutParams& params = {});

std::string serializeLayout(const Layout& layout);
Layout deserializeLayout(const std::string& json);

}  // namespace splat
