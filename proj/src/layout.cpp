#include "splatscene/layout.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include <json.hpp>

namespace splat {
namespace {

using json = nlohmann::json;

double dist2d(double ax, double ay, double bx, double by) {
    return std::hypot(ax - bx, ay - by);
}

double halfDiag2d(const Box3& b) {
    return 0.5 * std::hypot(b.max.x - b.min.x, b.max.y - b.min.y);
}

bool overlap2d(const Box3& a, const Box3& b, double clearance) {
    return a.min.x - clearance < b.max.x && b.min.x - clearance < a.max.x &&
           a.min.y - clearance < b.max.y && b.min.y - clearance < a.max.y;
}

std::array<double, 2> rotate2d(double x, double y, double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
}

}  // namespace

bool LayoutReport::okIgnoringRelations() const {
    for (const auto& v : violations) {
        if (v.kind != ViolationKind::RelationBroken) return false;
    }
    return true;
}

double scalingFactor(const Vec3& real_size, const Box3& model_box) {
    Vec3 ext = model_box.extent();
    double s = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        if (!(ext[i] > 0)) throw DomainError("model box has zero extent on an axis");
        s = std::min(s, real_size[i] / ext[i]);
    }
    return s;
}

AnchorRegion classifyRegion(double x, double y, const SceneDims& scene,
                            const LayoutParams& params) {
    if (scene.kind == SceneKind::Indoor) {
        double hw = scene.width / 2, hl = scene.length / 2;
        double band = params.band_fraction * std::min(scene.width, scene.length);
        int walls = 0;
        if (hw - std::abs(x) <= band) ++walls;
        if (hl - std::abs(y) <= band) ++walls;
        if (walls >= 2) return AnchorRegion::Corner;
        if (walls == 1) return AnchorRegion::Side;
        double cf = params.center_fraction / 2;  // half extent fraction
        if (std::abs(x) <= cf * scene.width && std::abs(y) <= cf * scene.length) {
            return AnchorRegion::Center;
        }
        return AnchorRegion::Others;
    }
    double r = std::hypot(x, y);
    if (r <= params.outdoor_center * scene.radius) return AnchorRegion::Center;
    if (r >= params.outdoor_side * scene.radius) return AnchorRegion::Side;
    return AnchorRegion::Others;
}

CandidateSet candidatePositions(const std::string& instance, AnchorRegion region,
                                const SceneDims& scene, double grid,
                                const LayoutParams& params) {
    if (!(grid > 0)) throw DomainError("grid pitch must be > 0");
    if (region == AnchorRegion::Corner && scene.kind == SceneKind::Outdoor) {
        throw DomainError("CORNER region is undefined for outdoor scenes");
    }
    CandidateSet set;
    set.instance = instance;
    double hx, hy;
    if (scene.kind == SceneKind::Indoor) {
        hx = scene.width / 2;
        hy = scene.length / 2;
    } else {
        hx = hy = scene.radius;
    }
    long nx = long(std::floor(hx / grid));
    long ny = long(std::floor(hy / grid));
    for (long j = -ny; j <= ny; ++j) {
        for (long i = -nx; i <= nx; ++i) {
            double x = double(i) * grid, y = double(j) * grid;
            if (scene.kind == SceneKind::Outdoor && std::hypot(x, y) > scene.radius) {
                continue;
            }
            if (classifyRegion(x, y, scene, params) == region) {
                set.positions.push_back({x, y});
            }
        }
    }
    return set;
}

std::string selectAnchorObject(const ConstraintGraph& graph) {
    if (graph.nodes.empty()) throw DomainError("constraint graph has no nodes");
    std::string best;
    int best_deg = -1;
    bool best_center = false;
    for (const auto& id : graph.nodes) {
        int deg = graphDegree(graph, id);
        bool center = graph.anchors.at(id) == AnchorRegion::Center;
        bool better = deg > best_deg ||
                      (deg == best_deg && center && !best_center) ||
                      (deg == best_deg && center == best_center && id < best);
        if (best_deg < 0 || better) {
            best = id;
            best_deg = deg;
            best_center = center;
        }
    }
    return best;
}

bool aabbOverlap(const Box3& a, const Box3& b, double clearance) {
    return overlap2d(a, b, clearance);
}

double yawFacing(double dx, double dy) {
    if (dx == 0 && dy == 0) return 0.0;
    // forward(yaw) = (-sin yaw, cos yaw)
    return std::atan2(-dx, dy);
}

double yawOf(const AffineTransform& a) {
    // placements rotate about +z only
    return wrapAngle(2.0 * std::atan2(a.r.z, a.r.w));
}

Box3 worldFootprint(const Box3& model_box, const AffineTransform& a) {
    Vec3 lo{std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi = -lo;
    for (int i = 0; i < 8; ++i) {
        Vec3 c{(i & 1) ? model_box.max.x : model_box.min.x,
               (i & 2) ? model_box.max.y : model_box.min.y,
               (i & 4) ? model_box.max.z : model_box.min.z};
        Vec3 w = a.r.rotate(c * a.s) + a.t;
        lo = lo.cwiseMin(w);
        hi = hi.cwiseMax(w);
    }
    return {lo, hi};
}

bool relationSatisfied(Relation rel, const Vec3& subject_pos, double subject_yaw,
                       const Box3& subject_box, const Vec3& object_pos,
                       double object_yaw, const Box3& object_box,
                       const LayoutParams& params) {
    double ox = subject_pos.x - object_pos.x;
    double oy = subject_pos.y - object_pos.y;
    auto [lx, ly] = rotate2d(ox, oy, -object_yaw);
    switch (rel) {
        case Relation::Left:
            return lx < 0 && std::abs(lx) >= 2.0 * std::abs(ly);
        case Relation::Right:
            return lx > 0 && std::abs(lx) >= 2.0 * std::abs(ly);
        case Relation::Front:
            return ly > 0 && ly >= 2.0 * std::abs(lx);
        case Relation::Behind:
            return ly < 0 && -ly >= 2.0 * std::abs(lx);
        case Relation::Next:
            return dist2d(subject_pos.x, subject_pos.y, object_pos.x, object_pos.y) <=
                   halfDiag2d(subject_box) + halfDiag2d(object_box) + params.next_margin;
        case Relation::Opposite: {
            double fx = -std::sin(object_yaw), fy = std::cos(object_yaw);
            double ds = subject_pos.x * fx + subject_pos.y * fy;
            double dr = object_pos.x * fx + object_pos.y * fy;
            double dyaw = std::abs(angleDiff(subject_yaw, object_yaw));
            return ds * dr < 0 && (M_PI - dyaw) <= params.opposite_yaw_tol;
        }
        case Relation::Over:
            return overlap2d(subject_box, object_box, 0.0) &&
                   std::abs(subject_box.min.z - object_box.max.z) <= 1e-6;
        case Relation::Under:
            return overlap2d(subject_box, object_box, 0.0) &&
                   std::abs(object_box.min.z - subject_box.max.z) <= 1e-6;
    }
    return false;
}

namespace {

struct Node {
    std::string id;
    AnchorRegion region;
    double s = 1.0;
    Box3 model_box;
    CandidateSet candidates;
    // BFS parent edge, if any: relation + other endpoint + direction
    bool has_parent = false;
    Edge parent_edge;
    std::vector<Edge> placed_edges;  // filled during search setup
};

struct SolveCtx {
    const ConstraintGraph& graph;
    const LayoutParams& params;
    std::vector<Node> order;
    std::map<std::string, std::size_t> index;
    std::vector<bool> placed;
    std::vector<AffineTransform> affine;
    std::vector<Box3> footprint;
    std::int64_t budget;
};

bool inBounds(const Box3& fp, const SceneDims& scene) {
    if (scene.kind == SceneKind::Indoor) {
        double hw = scene.width / 2, hl = scene.length / 2;
        return fp.min.x >= -hw - 1e-9 && fp.max.x <= hw + 1e-9 &&
               fp.min.y >= -hl - 1e-9 && fp.max.y <= hl + 1e-9 &&
               fp.min.z >= -1e-9 && fp.max.z <= scene.height + 1e-9;
    }
    double r = scene.radius + 1e-9;
    for (int i = 0; i < 4; ++i) {
        double cx = (i & 1) ? fp.max.x : fp.min.x;
        double cy = (i & 2) ? fp.max.y : fp.min.y;
        if (std::hypot(cx, cy) > r) return false;
    }
    return fp.min.z >= -1e-9;
}

bool edgesOverUnderExempt(const ConstraintGraph& graph, const std::string& a,
                          const std::string& b) {
    for (const Edge& e : graph.edges) {
        if (e.relation != Relation::Over && e.relation != Relation::Under) continue;
        if ((e.subject == a && e.object == b) || (e.subject == b && e.object == a)) {
            return true;
        }
    }
    return false;
}

// Yaw the solver assigns for node `n` at position (x, y).
double chooseYaw(const SolveCtx& ctx, const Node& n, double x, double y) {
    if (n.has_parent) {
        const Edge& e = n.parent_edge;
        bool is_subject = e.subject == n.id;
        const std::string& other = is_subject ? e.object : e.subject;
        double other_yaw = yawOf(ctx.affine[ctx.index.at(other)]);
        const AffineTransform& oa = ctx.affine[ctx.index.at(other)];
        switch (e.relation) {
            case Relation::Left:
            case Relation::Right:
            case Relation::Front:
            case Relation::Behind: {
                if (is_subject) return other_yaw;
                // placing the reference: orient it so the placed subject falls in
                // the required half-plane
                double face = yawFacing(oa.t.x - x, oa.t.y - y);
                switch (e.relation) {
                    case Relation::Front: return wrapAngle(face);
                    case Relation::Behind: return wrapAngle(face + M_PI);
                    case Relation::Left: return wrapAngle(face - M_PI_2);
                    default: return wrapAngle(face + M_PI_2);
                }
            }
            case Relation::Opposite:
                return wrapAngle(other_yaw + M_PI);
            default:
                break;  // NEXT / OVER / UNDER: fall through to anchor rule
        }
    }
    if (n.region == AnchorRegion::Side || n.region == AnchorRegion::Corner) {
        return wrapAngle(yawFacing(-x, -y));
    }
    return 0.0;
}

// Preferred yaw first, then the cardinal directions; a corner object facing
// the room center diagonally may poke through the walls when an axis-aligned
// orientation would fit.
std::vector<double> yawOptions(const SolveCtx& ctx, const Node& n, double x, double y) {
    std::vector<double> yaws{chooseYaw(ctx, n, x, y)};
    for (double c : {0.0, M_PI_2, M_PI, 3 * M_PI_2}) {
        double w = wrapAngle(c);
        bool dup = false;
        for (double have : yaws) dup = dup || std::abs(angleDiff(w, have)) < 1e-9;
        if (!dup) yaws.push_back(w);
    }
    return yaws;
}

AffineTransform makePlacement(const Node& n, double x, double y, double yaw) {
    AffineTransform a;
    a.s = n.s;
    a.r = Quat::fromYaw(yaw);
    a.t = {x, y, 0};
    Box3 fp = worldFootprint(n.model_box, a);
    a.t.z = -fp.min.z;  // rest on the floor; OVER stacking is fixed up later
    return a;
}

bool placementFeasible(const SolveCtx& ctx, std::size_t ni, const AffineTransform& a,
                       const Box3& fp) {
    const Node& n = ctx.order[ni];
    if (!inBounds(fp, ctx.graph.scene)) return false;
    for (std::size_t j = 0; j < ctx.order.size(); ++j) {
        if (!ctx.placed[j] || j == ni) continue;
        bool exempt = edgesOverUnderExempt(ctx.graph, n.id, ctx.order[j].id);
        if (!exempt && overlap2d(fp, ctx.footprint[j], ctx.params.clearance)) {
            return false;
        }
    }
    double yaw = yawOf(a);
    for (const Edge& e : n.placed_edges) {
        bool is_subject = e.subject == n.id;
        const std::string& other = is_subject ? e.object : e.subject;
        std::size_t oi = ctx.index.at(other);
        if (!ctx.placed[oi]) continue;
        const AffineTransform& oa = ctx.affine[oi];
        double oyaw = yawOf(oa);
        Relation rel = e.relation;
        // z stacking is assigned after the search; check OVER/UNDER in 2D here
        if (rel == Relation::Over || rel == Relation::Under) {
            if (!overlap2d(fp, ctx.footprint[oi], 0.0)) return false;
            continue;
        }
        bool ok = is_subject
                      ? relationSatisfied(rel, a.t, yaw, fp, oa.t, oyaw,
                                          ctx.footprint[oi], ctx.params)
                      : relationSatisfied(rel, oa.t, oyaw, ctx.footprint[oi], a.t, yaw,
                                          fp, ctx.params);
        if (!ok) return false;
    }
    return true;
}

// Candidate preference order for node ni; pairs of (key, candidate index).
std::vector<std::size_t> orderedCandidates(const SolveCtx& ctx, std::size_t ni) {
    const Node& n = ctx.order[ni];
    double rx = 0, ry = 0;
    bool relational = false;
    if (n.has_parent) {
        const std::string& other =
            n.parent_edge.subject == n.id ? n.parent_edge.object : n.parent_edge.subject;
        std::size_t oi = ctx.index.at(other);
        if (ctx.placed[oi]) {
            rx = ctx.affine[oi].t.x;
            ry = ctx.affine[oi].t.y;
            relational = true;
        }
    }
    if (!relational) {
        double sx = 0, sy = 0;
        for (const auto& p : n.candidates.positions) {
            sx += p[0];
            sy += p[1];
        }
        if (!n.candidates.positions.empty()) {
            rx = sx / double(n.candidates.positions.size());
            ry = sy / double(n.candidates.positions.size());
        }
    }
    std::vector<std::size_t> idx(n.candidates.positions.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& pa = n.candidates.positions[a];
        const auto& pb = n.candidates.positions[b];
        double da = dist2d(pa[0], pa[1], rx, ry);
        double db = dist2d(pb[0], pb[1], rx, ry);
        if (da != db) return da < db;
        if (pa[0] != pb[0]) return pa[0] < pb[0];
        return pa[1] < pb[1];
    });
    return idx;
}

bool dfs(SolveCtx& ctx, std::size_t depth) {
    if (depth == ctx.order.size()) return true;
    Node& n = ctx.order[depth];
    std::size_t ni = depth;  // order index == placement order
    for (std::size_t ci : orderedCandidates(ctx, ni)) {
        auto [x, y] = n.candidates.positions[ci];
        for (double yaw : yawOptions(ctx, n, x, y)) {
            if (--ctx.budget < 0) return false;
            AffineTransform a = makePlacement(n, x, y, yaw);
            Box3 fp = worldFootprint(n.model_box, a);
            if (!placementFeasible(ctx, ni, a, fp)) continue;
            ctx.affine[ni] = a;
            ctx.footprint[ni] = fp;
            ctx.placed[ni] = true;
            if (dfs(ctx, depth + 1)) return true;
            ctx.placed[ni] = false;
        }
    }
    return false;
}

void applyOverStacking(SolveCtx& ctx) {
    // raise OVER subjects onto their references; a few passes settle chains
    for (std::size_t pass = 0; pass < ctx.order.size() + 1; ++pass) {
        bool changed = false;
        for (const Edge& e : ctx.graph.edges) {
            Relation rel = e.relation;
            std::string subj = e.subject, obj = e.object;
            if (rel == Relation::Under) {
                std::swap(subj, obj);
                rel = Relation::Over;
            }
            if (rel != Relation::Over) continue;
            auto si = ctx.index.find(subj), oi = ctx.index.find(obj);
            if (si == ctx.index.end() || oi == ctx.index.end()) continue;
            if (!ctx.placed[si->second] || !ctx.placed[oi->second]) continue;
            if (!overlap2d(ctx.footprint[si->second], ctx.footprint[oi->second], 0.0)) {
                continue;
            }
            double target = ctx.footprint[oi->second].max.z;
            double cur = ctx.footprint[si->second].min.z;
            if (std::abs(cur - target) > 1e-12) {
                double dz = target - cur;
                ctx.affine[si->second].t.z += dz;
                ctx.footprint[si->second].min.z += dz;
                ctx.footprint[si->second].max.z += dz;
                changed = true;
            }
        }
        if (!changed) break;
    }
}

}  // namespace

Layout solveLayout(const ConstraintGraph& graph,
                   const std::map<std::string, Box3>& assets, double grid,
                   std::uint64_t seed, const LayoutParams& params) {
    if (!(grid > 0)) throw DomainError("grid pitch must be > 0");
    graph.scene.validateDims();
    for (const auto& id : graph.nodes) {
        if (!assets.count(id)) throw DomainError("no asset box for instance '" + id + "'");
    }

    // BFS order from the anchor object; neighbors by descending degree then id.
    std::map<std::string, int> degree;
    for (const auto& id : graph.nodes) degree[id] = graphDegree(graph, id);
    auto neighborRank = [&](const std::string& a, const std::string& b) {
        if (degree[a] != degree[b]) return degree[a] > degree[b];
        return a < b;
    };

    std::vector<std::string> order_ids;
    std::map<std::string, Edge> parent;
    std::set<std::string> visited;
    std::string anchor = selectAnchorObject(graph);
    std::deque<std::string> queue{anchor};
    visited.insert(anchor);
    while (!queue.empty()) {
        std::string cur = queue.front();
        queue.pop_front();
        order_ids.push_back(cur);
        std::vector<std::pair<std::string, Edge>> nbrs;
        for (const Edge& e : graph.edges) {
            std::string other;
            if (e.subject == cur) other = e.object;
            else if (e.object == cur) other = e.subject;
            else continue;
            if (visited.count(other)) continue;
            bool seen = false;
            for (auto& [id, _] : nbrs) {
                if (id == other) { seen = true; break; }
            }
            if (!seen) nbrs.emplace_back(other, e);
        }
        std::sort(nbrs.begin(), nbrs.end(),
                  [&](const auto& a, const auto& b) { return neighborRank(a.first, b.first); });
        for (auto& [id, e] : nbrs) {
            visited.insert(id);
            parent[id] = e;
            queue.push_back(id);
        }
    }
    std::vector<std::string> rest;
    for (const auto& id : graph.nodes) {
        if (!visited.count(id)) rest.push_back(id);
    }
    std::sort(rest.begin(), rest.end(), neighborRank);
    order_ids.insert(order_ids.end(), rest.begin(), rest.end());

    SolveCtx ctx{graph, params, {}, {}, {}, {}, {}, params.search_budget};
    for (const auto& id : order_ids) {
        Node n;
        n.id = id;
        n.region = graph.anchors.at(id);
        n.model_box = assets.at(id);
        n.s = scalingFactor(graph.specFor(id).size, n.model_box);
        n.candidates = candidatePositions(id, n.region, graph.scene, grid, params);
        auto pit = parent.find(id);
        if (pit != parent.end()) {
            n.has_parent = true;
            n.parent_edge = pit->second;
        }
        ctx.index[id] = ctx.order.size();
        ctx.order.push_back(std::move(n));
    }
    for (auto& n : ctx.order) {
        std::size_t ni = ctx.index[n.id];
        for (const Edge& e : graph.edges) {
            if (e.subject != n.id && e.object != n.id) continue;
            const std::string& other = e.subject == n.id ? e.object : e.subject;
            if (ctx.index.at(other) < ni) n.placed_edges.push_back(e);
        }
    }
    ctx.placed.assign(ctx.order.size(), false);
    ctx.affine.assign(ctx.order.size(), AffineTransform{});
    ctx.footprint.assign(ctx.order.size(), Box3{});

    Layout layout;
    layout.scene = graph.scene;
    layout.seed = seed;

    bool solved = dfs(ctx, 0);
    if (!solved) {
        // Greedy pass with per-node relation deferral.
        ctx.placed.assign(ctx.order.size(), false);
        for (std::size_t d = 0; d < ctx.order.size(); ++d) {
            Node& n = ctx.order[d];
            bool ok = false;
            for (std::size_t ci : orderedCandidates(ctx, d)) {
                auto [x, y] = n.candidates.positions[ci];
                for (double yaw : yawOptions(ctx, n, x, y)) {
                    AffineTransform a = makePlacement(n, x, y, yaw);
                    Box3 fp = worldFootprint(n.model_box, a);
                    if (!placementFeasible(ctx, d, a, fp)) continue;
                    ctx.affine[d] = a;
                    ctx.footprint[d] = fp;
                    ctx.placed[d] = true;
                    ok = true;
                    break;
                }
                if (ok) break;
            }
            if (ok) continue;
            // fallback: drop this node's relation constraints, keep anchor +
            // collision + bounds; orient toward the scene center
            auto saved = n.placed_edges;
            n.placed_edges.clear();
            for (const auto& p : n.candidates.positions) {
                std::vector<double> yaws{wrapAngle(yawFacing(-p[0], -p[1])), 0.0,
                                         M_PI_2, M_PI, wrapAngle(3 * M_PI_2)};
                for (double yaw : yaws) {
                    AffineTransform a = makePlacement(n, p[0], p[1], yaw);
                    Box3 fp = worldFootprint(n.model_box, a);
                    if (!placementFeasible(ctx, d, a, fp)) continue;
                    double dc = dist2d(p[0], p[1], 0, 0);
                    if (!ok || dc < dist2d(ctx.affine[d].t.x, ctx.affine[d].t.y, 0, 0)) {
                        ctx.affine[d] = a;
                        ctx.footprint[d] = fp;
                    }
                    ok = true;
                    break;
                }
            }
            n.placed_edges = saved;
            if (!ok) {
                throw DomainError("layout infeasible: no free candidate for '" + n.id + "'");
            }
            ctx.placed[d] = true;
            for (const Edge& e : graph.edges) {
                if (e.subject == n.id || e.object == n.id) layout.deferred.push_back(e);
            }
        }
    }

    applyOverStacking(ctx);
    for (std::size_t i = 0; i < ctx.order.size(); ++i) {
        layout.placements[ctx.order[i].id] = ctx.affine[i];
    }
    return layout;
}

LayoutReport verifyLayout(const Layout& layout, const ConstraintGraph& graph,
                          const std::map<std::string, Box3>& assets,
                          const LayoutParams& params) {
    LayoutReport report;
    std::map<std::string, Box3> fp;
    for (const auto& id : graph.nodes) {
        auto it = layout.placements.find(id);
        if (it == layout.placements.end()) {
            report.violations.push_back(
                {ViolationKind::Bounds, {id}, "instance missing from layout"});
            continue;
        }
        fp[id] = worldFootprint(assets.at(id), it->second);
    }
    for (const auto& [id, box] : fp) {
        if (!inBounds(box, layout.scene)) {
            report.violations.push_back(
                {ViolationKind::Bounds, {id}, "footprint exceeds scene bounds"});
        }
        const auto& a = layout.placements.at(id);
        AnchorRegion want = graph.anchors.at(id);
        AnchorRegion got = classifyRegion(a.t.x, a.t.y, layout.scene, params);
        if (got != want) {
            report.violations.push_back({ViolationKind::Anchor,
                                         {id},
                                         std::string("placed in ") + toString(got) +
                                             ", anchored to " + toString(want)});
        }
    }
    for (auto i = fp.begin(); i != fp.end(); ++i) {
        for (auto j = std::next(i); j != fp.end(); ++j) {
            if (edgesOverUnderExempt(graph, i->first, j->first)) continue;
            if (overlap2d(i->second, j->second, params.clearance)) {
                report.violations.push_back({ViolationKind::Collision,
                                             {i->first, j->first},
                                             "inflated footprints overlap"});
            }
        }
    }
    for (const Edge& e : graph.edges) {
        if (!fp.count(e.subject) || !fp.count(e.object)) continue;
        const auto& sa = layout.placements.at(e.subject);
        const auto& oa = layout.placements.at(e.object);
        if (!relationSatisfied(e.relation, sa.t, yawOf(sa), fp.at(e.subject), oa.t,
                               yawOf(oa), fp.at(e.object), params)) {
            report.violations.push_back({ViolationKind::RelationBroken,
                                         {e.subject, e.object},
                                         std::string(toString(e.relation)) +
                                             " constraint not satisfied"});
        }
    }
    return report;
}

std::string serializeLayout(const Layout& layout) {
    json j;
    j["scene"] = json::parse(serializeSceneDims(layout.scene));
    j["seed"] = layout.seed;
    json placements = json::object();
    for (const auto& [id, a] : layout.placements) {
        placements[id] = {{"s", a.s},
                          {"t", {a.t.x, a.t.y, a.t.z}},
                          {"yaw_radians", yawOf(a)}};
    }
    j["placements"] = placements;
    json deferred = json::array();
    for (const Edge& e : layout.deferred) {
        deferred.push_back({{"subject", e.subject},
                            {"object", e.object},
                            {"relation", toString(e.relation)}});
    }
    j["deferred"] = deferred;
    return j.dump(2);
}

Layout deserializeLayout(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw FormatError(std::string("layout is not valid JSON: ") + e.what());
    }
    Layout layout;
    layout.scene = parseSceneDims(j.at("scene").dump());
    layout.seed = j.at("seed").get<std::uint64_t>();
    for (auto& [id, p] : j.at("placements").items()) {
        AffineTransform a;
        a.s = p.at("s").get<double>();
        auto t = p.at("t");
        a.t = {t[0].get<double>(), t[1].get<double>(), t[2].get<double>()};
        a.r = Quat::fromYaw(p.at("yaw_radians").get<double>());
        layout.placements[id] = a;
    }
    if (j.contains("deferred")) {
        for (const auto& e : j.at("deferred")) {
            layout.deferred.push_back(
                {e.at("subject").get<std::string>(), e.at("object").get<std::string>(),
                 relationFromString(e.at("relation").get<std::string>())});
        }
    }
    return layout;
}

}  // namespace splat
