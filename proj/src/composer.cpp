#include "splatscene/composer.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace splat {
namespace {

using json = nlohmann::json;

Gaussian surfaceGaussian(const Vec3& pos, double spacing) {
    Gaussian g;
    g.mean = pos;
    g.rotation = Quat::identity();
    double s = spacing / 2;
    g.scale = {s, s, s};
    g.opacity = 0.8;
    g.sh_dc = {0, 0, 0};  // decodes to neutral gray
    return g;
}

// Evenly spaced samples covering [lo, hi] including both endpoints.
std::vector<double> linspaceCover(double lo, double hi, double spacing) {
    int n = std::max(2, int(std::lround((hi - lo) / spacing)) + 1);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * double(i) / double(n - 1);
    }
    return out;
}

ConstraintGraph filterGraph(const ConstraintGraph& graph, const ScenePackage& pkg) {
    ConstraintGraph g;
    g.scene = graph.scene;
    g.objects = graph.objects;
    for (const auto& id : graph.nodes) {
        if (pkg.objects.count(id)) {
            g.nodes.push_back(id);
            g.anchors[id] = graph.anchors.at(id);
        }
    }
    for (const Edge& e : graph.edges) {
        if (pkg.objects.count(e.subject) && pkg.objects.count(e.object)) {
            g.edges.push_back(e);
        }
    }
    return g;
}

}  // namespace

void MotionTrajectory::validateTrajectory() const {
    if (keyframes.empty()) throw DomainError("trajectory needs at least one keyframe");
    for (std::size_t i = 1; i < keyframes.size(); ++i) {
        if (!(keyframes[i].time > keyframes[i - 1].time)) {
            throw DomainError("trajectory keyframe times must be strictly increasing");
        }
    }
}

GaussianCloud initIndoorEnvironment(const SceneDims& scene, double spacing) {
    if (scene.kind != SceneKind::Indoor) {
        throw DomainError("indoor environment requires an indoor scene");
    }
    if (!(spacing > 0)) throw DomainError("spacing must be > 0");
    double hw = scene.width / 2, hl = scene.length / 2, h = scene.height;
    auto xs = linspaceCover(-hw, hw, spacing);
    auto ys = linspaceCover(-hl, hl, spacing);
    auto zs = linspaceCover(0, h, spacing);

    GaussianCloud cloud;
    cloud.label = "environment";
    // floor, ceiling: full grids
    for (double z : {0.0, h}) {
        for (double y : ys) {
            for (double x : xs) {
                cloud.gaussians.push_back(surfaceGaussian({x, y, z}, spacing));
            }
        }
    }
    // walls own interior z rows; x-walls additionally skip the y endpoints
    std::vector<double> zin(zs.begin() + 1, zs.end() - 1);
    std::vector<double> yin(ys.begin() + 1, ys.end() - 1);
    for (double y : {-hl, hl}) {
        for (double z : zin) {
            for (double x : xs) {
                cloud.gaussians.push_back(surfaceGaussian({x, y, z}, spacing));
            }
        }
    }
    for (double x : {-hw, hw}) {
        for (double z : zin) {
            for (double y : yin) {
                cloud.gaussians.push_back(surfaceGaussian({x, y, z}, spacing));
            }
        }
    }
    return cloud;
}

GaussianCloud initOutdoorEnvironment(const SceneDims& scene, double spacing) {
    if (scene.kind != SceneKind::Outdoor) {
        throw DomainError("outdoor environment requires an outdoor scene");
    }
    if (!(spacing > 0)) throw DomainError("spacing must be > 0");
    double r3 = 3.0 * scene.radius;

    GaussianCloud cloud;
    cloud.label = "environment";
    // hemisphere, Fibonacci surface sampling, count ~ area / spacing^2
    std::size_t n = std::size_t(std::ceil(2.0 * M_PI * r3 * r3 / (spacing * spacing)));
    n = std::max<std::size_t>(n, 1);
    double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
        double z = (double(i) + 0.5) / double(n);
        double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        double theta = golden * double(i);
        cloud.gaussians.push_back(surfaceGaussian(
            {r3 * rho * std::cos(theta), r3 * rho * std::sin(theta), r3 * z}, spacing));
    }
    // ground disk grid at z = 0
    long m = long(std::floor(r3 / spacing));
    for (long j = -m; j <= m; ++j) {
        for (long i = -m; i <= m; ++i) {
            double x = double(i) * spacing, y = double(j) * spacing;
            if (std::hypot(x, y) <= r3) {
                cloud.gaussians.push_back(surfaceGaussian({x, y, 0}, spacing));
            }
        }
    }
    return cloud;
}

GaussianCloud initEnvironment(const SceneDims& scene, double spacing) {
    return scene.kind == SceneKind::Indoor ? initIndoorEnvironment(scene, spacing)
                                           : initOutdoorEnvironment(scene, spacing);
}

GaussianCloud composeScene(const Layout& layout,
                           const std::map<std::string, GaussianCloud>& assets,
                           const GaussianCloud& environment) {
    std::vector<GaussianCloud> parts;
    parts.push_back(environment);
    for (const auto& [id, affine] : layout.placements) {
        auto it = assets.find(id);
        if (it == assets.end()) throw DomainError("missing asset for instance '" + id + "'");
        parts.push_back(applyAffine(it->second, affine));
    }
    return mergeClouds(parts);
}

AffineTransform sampleTrajectory(const MotionTrajectory& traj, double t) {
    traj.validateTrajectory();
    const auto& kfs = traj.keyframes;
    if (t <= kfs.front().time) return kfs.front().affine;
    if (t >= kfs.back().time) return kfs.back().affine;
    std::size_t hi = 1;
    while (kfs[hi].time < t) ++hi;
    const auto& a = kfs[hi - 1];
    const auto& b = kfs[hi];
    double u = (t - a.time) / (b.time - a.time);
    AffineTransform out;
    out.s = a.affine.s + u * (b.affine.s - a.affine.s);
    out.t = a.affine.t + (b.affine.t - a.affine.t) * u;
    out.r = slerp(a.affine.r, b.affine.r, u);
    return out;
}

GaussianCloud composeSceneAtTime(const ScenePackage& pkg,
                                 const std::map<std::string, GaussianCloud>& assets,
                                 const GaussianCloud& environment, double t) {
    std::vector<GaussianCloud> parts;
    parts.push_back(environment);
    for (const auto& [id, obj] : pkg.objects) {
        auto it = assets.find(id);
        if (it == assets.end()) throw DomainError("missing asset for instance '" + id + "'");
        auto tj = pkg.trajectories.find(id);
        AffineTransform a =
            tj == pkg.trajectories.end() ? obj.affine : sampleTrajectory(tj->second, t);
        parts.push_back(applyAffine(it->second, a));
    }
    return mergeClouds(parts);
}

Layout packageLayout(const ScenePackage& pkg) {
    Layout layout;
    layout.scene = pkg.scene;
    for (const auto& [id, obj] : pkg.objects) layout.placements[id] = obj.affine;
    return layout;
}

std::pair<ScenePackage, LayoutReport> applyEdit(
    const ScenePackage& pkg, const EditCommand& cmd, const ConstraintGraph& graph,
    const std::map<std::string, Box3>& asset_boxes, const LayoutParams& params) {
    ScenePackage out = pkg;
    switch (cmd.kind) {
        case EditKind::Relocate: {
            auto it = out.objects.find(cmd.instance);
            if (it == out.objects.end()) {
                throw DomainError("relocate: unknown instance '" + cmd.instance + "'");
            }
            if (!cmd.affine) throw DomainError("relocate: missing target affine");
            it->second.affine = *cmd.affine;
            break;
        }
        case EditKind::Remove: {
            if (!out.objects.erase(cmd.instance)) {
                throw DomainError("remove: unknown instance '" + cmd.instance + "'");
            }
            out.trajectories.erase(cmd.instance);
            break;
        }
        case EditKind::Add: {
            if (out.objects.count(cmd.instance)) {
                throw DomainError("add: instance '" + cmd.instance + "' already present");
            }
            if (!cmd.asset) throw DomainError("add: missing asset reference");
            auto bit = asset_boxes.find(cmd.instance);
            if (bit == asset_boxes.end()) {
                throw DomainError("add: no asset box for '" + cmd.instance + "'");
            }
            AnchorRegion region = AnchorRegion::Others;
            auto ait = graph.anchors.find(cmd.instance);
            if (ait != graph.anchors.end()) region = ait->second;
            double s = 1.0;
            if (graph.hasNode(cmd.instance)) {
                s = scalingFactor(graph.specFor(cmd.instance).size, bit->second);
            }
            std::map<std::string, Box3> placed;
            for (const auto& [id, obj] : out.objects) {
                auto b = asset_boxes.find(id);
                if (b != asset_boxes.end()) {
                    placed[id] = worldFootprint(b->second, obj.affine);
                }
            }
            auto cands = candidatePositions(cmd.instance, region, pkg.scene,
                                            params.grid, params);
            bool found = false;
            AffineTransform best;
            double best_d = 0;
            for (const auto& p : cands.positions) {
                double yaw = 0.0;
                if (region == AnchorRegion::Side || region == AnchorRegion::Corner) {
                    yaw = wrapAngle(yawFacing(-p[0], -p[1]));
                }
                AffineTransform a;
                a.s = s;
                a.r = Quat::fromYaw(yaw);
                a.t = {p[0], p[1], 0};
                Box3 fp = worldFootprint(bit->second, a);
                a.t.z = -fp.min.z;
                fp.max.z -= fp.min.z;
                fp.min.z = 0;
                bool free = true;
                for (const auto& [id, box] : placed) {
                    if (aabbOverlap(fp, box, params.clearance)) {
                        free = false;
                        break;
                    }
                }
                if (!free) continue;
                double d = std::hypot(p[0], p[1]);
                if (!found || d < best_d) {
                    best = a;
                    best_d = d;
                    found = true;
                }
            }
            if (!found) {
                throw DomainError("add: no collision-free candidate for '" +
                                  cmd.instance + "'");
            }
            out.objects[cmd.instance] = SceneObject{*cmd.asset, best};
            break;
        }
    }
    LayoutReport report =
        verifyLayout(packageLayout(out), filterGraph(graph, out), asset_boxes, params);
    return {out, report};
}

std::string serializePackage(const ScenePackage& pkg) {
    json j;
    j["scene"] = json::parse(serializeSceneDims(pkg.scene));
    json objs = json::array();
    for (const auto& [id, obj] : pkg.objects) {
        const auto& a = obj.affine;
        objs.push_back({{"id", id},
                        {"asset", obj.asset},
                        {"s", a.s},
                        {"t", {a.t.x, a.t.y, a.t.z}},
                        {"quat", {a.r.w, a.r.x, a.r.y, a.r.z}}});
    }
    j["objects"] = objs;
    j["environment"] = {{"kind", pkg.scene.kind == SceneKind::Indoor ? "indoor" : "outdoor"},
                        {"spacing", pkg.environment.spacing}};
    json trajs = json::array();
    for (const auto& [id, traj] : pkg.trajectories) {
        json kfs = json::array();
        for (const auto& kf : traj.keyframes) {
            kfs.push_back({{"time", kf.time},
                           {"s", kf.affine.s},
                           {"t", {kf.affine.t.x, kf.affine.t.y, kf.affine.t.z}},
                           {"quat",
                            {kf.affine.r.w, kf.affine.r.x, kf.affine.r.y, kf.affine.r.z}}});
        }
        trajs.push_back({{"id", id}, {"keyframes", kfs}});
    }
    j["trajectories"] = trajs;
    return j.dump(2);
}

namespace {

AffineTransform affineFromJson(const json& p) {
    AffineTransform a;
    a.s = p.at("s").get<double>();
    auto t = p.at("t");
    a.t = {t[0].get<double>(), t[1].get<double>(), t[2].get<double>()};
    if (p.contains("quat")) {
        auto q = p.at("quat");
        a.r = Quat{q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                   q[3].get<double>()};
        double n = std::sqrt(a.r.w * a.r.w + a.r.x * a.r.x + a.r.y * a.r.y +
                             a.r.z * a.r.z);
        if (!(n > 0)) throw FormatError("zero-norm quaternion in placement");
        // renormalize only when meaningfully off-unit so that serialized unit
        // quaternions round trip bit-exactly
        if (std::abs(n - 1.0) > 1e-9) a.r = a.r.normalized();
    } else if (p.contains("yaw")) {
        a.r = Quat::fromYaw(p.at("yaw").get<double>());
    }
    return a;
}

}  // namespace

ScenePackage deserializePackage(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
    }
    ScenePackage pkg;
    pkg.scene = parseSceneDims(j.at("scene").dump());
    for (const auto& o : j.at("objects")) {
        pkg.objects[o.at("id").get<std::string>()] =
            SceneObject{o.at("asset").get<std::string>(), affineFromJson(o)};
    }
    if (j.contains("environment")) {
        pkg.environment.spacing = j.at("environment").at("spacing").get<double>();
    }
    if (j.contains("trajectories")) {
        for (const auto& t : j.at("trajectories")) {
            MotionTrajectory traj;
            for (const auto& kf : t.at("keyframes")) {
                traj.keyframes.push_back(
                    {kf.at("time").get<double>(), affineFromJson(kf)});
            }
            traj.validateTrajectory();
            pkg.trajectories[t.at("id").get<std::string>()] = traj;
        }
    }
    return pkg;
}

}  // namespace splat
