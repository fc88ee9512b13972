#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "splatscene/camera.hpp"
#include "splatscene/gaussian.hpp"

namespace splat {

struct ScoreVector {
    std::vector<double> scores;  // aligned with cloud order
    int poses_used = 0;
    int height = 0, width = 0;
};

struct PixelAssignment {
    std::size_t gaussian;
    double depth;  // along the camera forward axis, clamped >= 1e-4
};

// Center projection: each Gaussian whose mean lands inside the image with
// positive depth goes to exactly the pixel containing its projection.
std::map<std::pair<int, int>, std::vector<PixelAssignment>> assignToRays(
    const GaussianCloud& cloud, const CameraPose& pose, int height, int width);

// Score(i) = sum over rays containing i of V(i) / (depth^2 * maxV(ray))
ScoreVector contributionScores(const GaussianCloud& cloud,
                               const std::vector<CameraPose>& poses, int height,
                               int width, int threads = 1);

// Direct triple loop over poses x pixels x Gaussians; oracle for the above.
ScoreVector bruteForceScores(const GaussianCloud& cloud,
                             const std::vector<CameraPose>& poses, int height,
                             int width);

// Removes the ceil(eta * N) lowest-scoring Gaussians; survivor order preserved;
// on score ties the lower index survives. If `threshold` is set, removes all
// Gaussians scoring below it instead.
GaussianCloud filterCloud(const GaussianCloud& cloud, const ScoreVector& scores,
                          double eta, std::optional<double> threshold = std::nullopt);

std::string serializeScoresCsv(const ScoreVector& scores);

}  // namespace splat
