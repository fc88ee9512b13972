#include "splatscene/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

namespace splat {
namespace {

constexpr double kMinDepth = 1e-4;

struct Projected {
    bool inside = false;
    int px = 0, py = 0;
    double depth = 0;
};

Projected project(const Gaussian& g, const CameraPose& pose, int height, int width) {
    Projected out;
    Vec3 d = g.mean - pose.position;
    Vec3 f = pose.forward(), r = pose.right(), u = pose.up();
    double zc = d.dot(f);
    if (zc <= 0) return out;
    double xc = d.dot(r);
    double yc = d.dot(u);
    double focal = (double(width) / 2.0) / std::tan(pose.fov / 2.0);
    double uu = double(width) / 2.0 + focal * xc / zc;
    double vv = double(height) / 2.0 - focal * yc / zc;
    int px = int(std::floor(uu));
    int py = int(std::floor(vv));
    if (px < 0 || px >= width || py < 0 || py >= height) return out;
    out.inside = true;
    out.px = px;
    out.py = py;
    out.depth = std::max(zc, kMinDepth);
    return out;
}

}  // namespace

std::map<std::pair<int, int>, std::vector<PixelAssignment>> assignToRays(
    const GaussianCloud& cloud, const CameraPose& pose, int height, int width) {
    if (height <= 0 || width <= 0) throw DomainError("resolution must be positive");
    std::map<std::pair<int, int>, std::vector<PixelAssignment>> rays;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        Projected p = project(cloud.gaussians[i], pose, height, width);
        if (p.inside) rays[{p.px, p.py}].push_back({i, p.depth});
    }
    return rays;
}

ScoreVector contributionScores(const GaussianCloud& cloud,
                               const std::vector<CameraPose>& poses, int height,
                               int width, int threads) {
    if (poses.empty()) throw DomainError("need at least one pose");
    if (height <= 0 || width <= 0) throw DomainError("resolution must be positive");

    std::vector<double> vol(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) vol[i] = volume(cloud.gaussians[i]);

    auto scorePose = [&](const CameraPose& pose, std::vector<double>& acc) {
        auto rays = assignToRays(cloud, pose, height, width);
        for (const auto& [pixel, list] : rays) {
            double max_v = 0.0;
            for (const auto& a : list) max_v = std::max(max_v, vol[a.gaussian]);
            if (max_v <= 0.0) continue;
            for (const auto& a : list) {
                acc[a.gaussian] += vol[a.gaussian] / (a.depth * a.depth * max_v);
            }
        }
    };

    std::vector<double> total(cloud.size(), 0.0);
    threads = std::max(1, threads);
    if (threads == 1 || poses.size() == 1) {
        for (const auto& pose : poses) scorePose(pose, total);
    } else {
        // per-pose partial vectors, summed in pose order so the reduction is
        // independent of thread scheduling
        std::vector<std::vector<double>> partial(poses.size());
        std::vector<std::thread> pool;
        std::size_t stride = std::size_t(threads);
        for (std::size_t t = 0; t < stride; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t j = t; j < poses.size(); j += stride) {
                    partial[j].assign(cloud.size(), 0.0);
                    scorePose(poses[j], partial[j]);
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& part : partial) {
            for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
        }
    }

    ScoreVector out;
    out.scores = std::move(total);
    out.poses_used = int(poses.size());
    out.height = height;
    out.width = width;
    return out;
}

ScoreVector bruteForceScores(const GaussianCloud& cloud,
                             const std::vector<CameraPose>& poses, int height,
                             int width) {
    if (poses.empty()) throw DomainError("need at least one pose");
    ScoreVector out;
    out.scores.assign(cloud.size(), 0.0);
    out.poses_used = int(poses.size());
    out.height = height;
    out.width = width;
    for (const auto& pose : poses) {
        for (int py = 0; py < height; ++py) {
            for (int px = 0; px < width; ++px) {
                double max_v = 0.0;
                for (std::size_t i = 0; i < cloud.size(); ++i) {
                    Projected p = project(cloud.gaussians[i], pose, height, width);
                    if (p.inside && p.px == px && p.py == py) {
                        max_v = std::max(max_v, volume(cloud.gaussians[i]));
                    }
                }
                if (max_v <= 0.0) continue;
                for (std::size_t i = 0; i < cloud.size(); ++i) {
                    Projected p = project(cloud.gaussians[i], pose, height, width);
                    if (p.inside && p.px == px && p.py == py) {
                        out.scores[i] += volume(cloud.gaussians[i]) /
                                         (p.depth * p.depth * max_v);
                    }
                }
            }
        }
    }
    return out;
}

GaussianCloud filterCloud(const GaussianCloud& cloud, const ScoreVector& scores,
                          double eta, std::optional<double> threshold) {
    if (scores.scores.size() != cloud.size()) {
        throw DomainError("score vector is misaligned with the cloud");
    }
    std::vector<bool> drop(cloud.size(), false);
    if (threshold) {
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            drop[i] = scores.scores[i] < *threshold;
        }
    } else {
        if (!(eta >= 0.0 && eta < 1.0)) throw DomainError("eta must be in [0, 1)");
        std::size_t k = std::size_t(std::ceil(eta * double(cloud.size())));
        std::vector<std::size_t> idx(cloud.size());
        std::iota(idx.begin(), idx.end(), 0);
        // removal order: ascending score; on ties the higher index goes first
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (scores.scores[a] != scores.scores[b]) {
                return scores.scores[a] < scores.scores[b];
            }
            return a > b;
        });
        for (std::size_t i = 0; i < k; ++i) drop[idx[i]] = true;
    }
    GaussianCloud out;
    out.label = cloud.label;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (!drop[i]) out.gaussians.push_back(cloud.gaussians[i]);
    }
    return out;
}

std::string serializeScoresCsv(const ScoreVector& scores) {
    std::ostringstream out;
    out << "index,score\n";
    out.precision(17);
    for (std::size_t i = 0; i < scores.scores.size(); ++i) {
        out << i << "," << scores.scores[i] << "\n";
    }
    return out.str();
}

}  // namespace splat
