#include "splatscene/camera.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

namespace splat {
namespace {

using json = nlohmann::json;

// Thin wrapper giving platform-stable uniform doubles.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) {
        double u = double(eng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace

Vec3 CameraPose::forward() const {
    double cp = std::cos(pitch);
    return {-std::sin(yaw) * cp, std::cos(yaw) * cp, std::sin(pitch)};
}

Vec3 CameraPose::right() const { return {std::cos(yaw), std::sin(yaw), 0.0}; }

Vec3 CameraPose::up() const { return right().cross(forward()); }

double sceneRadius(const SceneDims& scene) {
    return scene.kind == SceneKind::Indoor ? std::min(scene.width, scene.length) / 2
                                           : scene.radius;
}

std::vector<CameraPose> sampleStage1(const SceneDims& scene, int count,
                                     std::uint64_t seed, const CameraParams& params) {
    scene.validateDims();
    if (count <= 0) throw DomainError("stage-1 pose count must be > 0");
    Rng rng(seed);
    double rmax = params.stage1_radius_fraction * sceneRadius(scene);
    std::vector<CameraPose> poses;
    poses.reserve(count);
    for (int i = 0; i < count; ++i) {
        double r = rmax * std::sqrt(rng.uniform(0, 1));
        double theta = rng.uniform(0, 2 * M_PI);
        double z = scene.kind == SceneKind::Indoor
                       ? rng.uniform(params.eye_min, params.eye_max)
                       : params.eye_outdoor;
        CameraPose p;
        p.position = {r * std::cos(theta), r * std::sin(theta), z};
        p.yaw = rng.uniform(0, 2 * M_PI);
        p.pitch = rng.uniform(-15.0 * M_PI / 180.0, 30.0 * M_PI / 180.0);
        p.fov = params.fov;
        poses.push_back(p);
    }
    return poses;
}

std::vector<CameraPose> sampleStage2Indoor(const SceneDims& scene, const Layout& layout,
                                           int per_region, std::uint64_t seed,
                                           const CameraParams& params) {
    if (scene.kind != SceneKind::Indoor) {
        throw DomainError("indoor stage-2 sampling requires an indoor scene");
    }
    if (layout.placements.empty()) throw DomainError("layout is empty");
    if (per_region <= 0) throw DomainError("per_region must be > 0");

    std::vector<std::pair<std::string, Vec3>> sites;  // sorted by map order
    for (const auto& [id, a] : layout.placements) sites.emplace_back(id, a.t);
    // tie-tolerant membership: stacked objects share a 2D site, and both of
    // their cells must stay samplable
    auto inCell = [&](double x, double y, std::size_t region) {
        double own = std::hypot(x - sites[region].second.x, y - sites[region].second.y);
        for (std::size_t i = 0; i < sites.size(); ++i) {
            double d = std::hypot(x - sites[i].second.x, y - sites[i].second.y);
            if (own > d + 1e-9) return false;
        }
        return true;
    };

    Rng rng(seed);
    double hw = scene.width / 2, hl = scene.length / 2;
    std::vector<CameraPose> poses;
    for (std::size_t region = 0; region < sites.size(); ++region) {
        for (int k = 0; k < per_region; ++k) {
            double x = 0, y = 0;
            bool ok = false;
            for (int attempt = 0; attempt < 100000; ++attempt) {
                x = rng.uniform(-hw, hw);
                y = rng.uniform(-hl, hl);
                if (inCell(x, y, region)) {
                    ok = true;
                    break;
                }
            }
            if (!ok) {
                throw DomainError("could not sample inside Voronoi region of '" +
                                  sites[region].first + "'");
            }
            CameraPose p;
            p.position = {x, y, rng.uniform(params.eye_min, params.eye_max)};
            p.yaw = yawFacing(sites[region].second.x - x, sites[region].second.y - y);
            p.pitch = rng.uniform(-60.0 * M_PI / 180.0, -20.0 * M_PI / 180.0);
            p.fov = params.fov;
            poses.push_back(p);
        }
    }
    return poses;
}

std::vector<CameraPose> sampleStage2Outdoor(const SceneDims& scene, int circles,
                                            int batches, std::uint64_t seed,
                                            const CameraParams& params) {
    if (scene.kind != SceneKind::Outdoor) {
        throw DomainError("outdoor stage-2 sampling requires an outdoor scene");
    }
    if (circles < 1) throw DomainError("need at least one circle");
    if (batches < 1) throw DomainError("need at least one batch");
    Rng rng(seed);
    double r_max = scene.radius;
    std::vector<CameraPose> poses;
    for (int b = 0; b < batches; ++b) {
        double theta = rng.uniform(0, 2 * M_PI);       // shared position azimuth
        double view_yaw = rng.uniform(0, 2 * M_PI);    // shared view azimuth
        for (int k = 1; k <= circles; ++k) {
            double r = r_max * double(k) / double(circles);
            CameraPose p;
            p.position = {r * std::cos(theta), r * std::sin(theta), params.eye_outdoor};
            p.yaw = view_yaw;
            p.pitch = -30.0 * M_PI / 180.0;
            p.fov = params.fov;
            poses.push_back(p);
        }
    }
    return poses;
}

std::vector<CameraPose> assembleStage3(const std::vector<CameraPose>& stage1,
                                       const std::vector<CameraPose>& stage2) {
    std::vector<CameraPose> out = stage1;
    out.insert(out.end(), stage2.begin(), stage2.end());
    return out;
}

std::vector<CameraPose> rejectCollidingPoses(const std::vector<CameraPose>& poses,
                                             const Layout& layout,
                                             const std::map<std::string, Box3>& assets,
                                             double inflation) {
    std::vector<Box3> boxes;
    for (const auto& [id, a] : layout.placements) {
        auto it = assets.find(id);
        if (it == assets.end()) continue;
        boxes.push_back(worldFootprint(it->second, a).inflated(inflation));
    }
    std::vector<CameraPose> out;
    out.reserve(poses.size());
    for (const auto& p : poses) {
        bool hit = false;
        for (const auto& b : boxes) {
            if (b.contains(p.position)) {
                hit = true;
                break;
            }
        }
        if (!hit) out.push_back(p);
    }
    return out;
}

std::vector<CameraPose> evaluationTrajectory(const SceneDims& scene, double step,
                                             int azimuths, const CameraParams& params) {
    if (!(step > 0)) throw DomainError("step must be > 0");
    if (azimuths < 1) throw DomainError("need at least one azimuth");
    double r_scene = sceneRadius(scene);
    std::vector<CameraPose> poses;
    // straight diametral passes through the center
    for (int a = 0; a < azimuths; ++a) {
        double phi = M_PI * double(a) / double(azimuths);
        double dx = std::cos(phi), dy = std::sin(phi);
        double yaw = yawFacing(dx, dy);
        for (double d = -r_scene; d <= r_scene + 1e-12; d += step) {
            CameraPose p;
            p.position = {d * dx, d * dy, params.eye_outdoor};
            p.yaw = yaw;
            p.pitch = 0.0;
            p.fov = params.fov;
            poses.push_back(p);
        }
    }
    // circular sweep, radius two-thirds of the scene diameter
    double rc = (2.0 / 3.0) * (2.0 * r_scene);
    std::size_t n = std::size_t(std::floor(2.0 * M_PI * rc / step));
    n = std::max<std::size_t>(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        double theta = 2.0 * M_PI * double(i) / double(n);
        double x = rc * std::cos(theta), y = rc * std::sin(theta);
        CameraPose p;
        p.position = {x, y, params.eye_outdoor};
        p.yaw = yawFacing(-x, -y);
        p.pitch = 0.0;
        p.fov = params.fov;
        poses.push_back(p);
    }
    return poses;
}

std::string serializePoses(const std::vector<CameraPose>& poses, int stage) {
    std::ostringstream out;
    for (const auto& p : poses) {
        json j = {{"stage", stage},
                  {"position", {p.position.x, p.position.y, p.position.z}},
                  {"yaw", p.yaw},
                  {"pitch", p.pitch},
                  {"fov", p.fov}};
        out << j.dump() << "\n";
    }
    return out.str();
}

std::vector<CameraPose> parsePoses(const std::string& jsonl) {
    std::vector<CameraPose> poses;
    std::istringstream in(jsonl);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        CameraPose p;
        auto pos = j.at("position");
        p.position = {pos[0].get<double>(), pos[1].get<double>(), pos[2].get<double>()};
        p.yaw = j.at("yaw").get<double>();
        p.pitch = j.at("pitch").get<double>();
        p.fov = j.at("fov").get<double>();
        poses.push_back(p);
    }
    return poses;
}

}  // namespace splat
