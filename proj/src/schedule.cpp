#include "splatscene/schedule.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

namespace splat {
namespace {

using json = nlohmann::json;

double uniformDouble(std::mt19937_64& eng) {
    return double(eng() >> 11) * 0x1.0p-53;  // [0, 1)
}

std::vector<int> substepGrid(int lo, int hi, int delta_t) {
    std::vector<int> ts{lo};
    if (delta_t > 0) {
        for (int t = lo + delta_t; t < hi; t += delta_t) ts.push_back(t);
    }
    ts.push_back(hi);
    return ts;
}

}  // namespace

double ScheduleTable::alphaBar(int t) const {
    if (t < 0 || t > T) throw DomainError("timestep out of schedule range");
    return alpha_bar[std::size_t(t)];
}

LatentState LatentState::zeros(std::vector<std::size_t> shape) {
    LatentState x;
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    x.values.assign(n, 0.0);
    x.shape = std::move(shape);
    return x;
}

void requireSameShape(const LatentState& a, const LatentState& b) {
    if (a.shape != b.shape || a.values.size() != b.values.size()) {
        throw DomainError("latent shape mismatch");
    }
}

ScheduleTable buildSchedule(ScheduleKind kind, int T, double beta_start,
                            double beta_end) {
    if (T < 1) throw DomainError("schedule length must be >= 1");
    if (!(beta_start > 0 && beta_start <= beta_end && beta_end < 1)) {
        throw DomainError("betas must satisfy 0 < start <= end < 1");
    }
    ScheduleTable sched;
    sched.T = T;
    sched.alpha_bar.resize(std::size_t(T) + 1);
    sched.alpha_bar[0] = 1.0;
    double prod = 1.0;
    for (int t = 1; t <= T; ++t) {
        double frac = T == 1 ? 0.0 : double(t - 1) / double(T - 1);
        double beta;
        if (kind == ScheduleKind::Linear) {
            beta = beta_start + (beta_end - beta_start) * frac;
        } else {
            double sq = std::sqrt(beta_start) + (std::sqrt(beta_end) - std::sqrt(beta_start)) * frac;
            beta = sq * sq;
        }
        prod *= 1.0 - beta;
        sched.alpha_bar[std::size_t(t)] = prod;
    }
    return sched;
}

ScheduleTable defaultSchedule() {
    return buildSchedule(ScheduleKind::ScaledLinear, 1000, 0.00085, 0.012);
}

LatentState addNoise(const LatentState& x0, const LatentState& eps, int t,
                     const ScheduleTable& sched) {
    requireSameShape(x0, eps);
    if (t < 1 || t > sched.T) throw DomainError("timestep out of range");
    double ab = sched.alphaBar(t);
    double a = std::sqrt(ab), b = std::sqrt(1.0 - ab);
    LatentState out = x0;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = a * x0.values[i] + b * eps.values[i];
    }
    return out;
}

LatentState pseudoGroundTruth(const LatentState& xt, const LatentState& eps_hat, int t,
                              const ScheduleTable& sched) {
    requireSameShape(xt, eps_hat);
    double ab = sched.alphaBar(t);
    double a = std::sqrt(ab), b = std::sqrt(1.0 - ab);
    LatentState out = xt;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = (xt.values[i] - b * eps_hat.values[i]) / a;
    }
    return out;
}

int timeWindow(int iter, int iter_max, int T) {
    if (iter < 0 || iter > iter_max) throw DomainError("iter out of [0, iter_max]");
    double w = (1.0 - double(iter) / double(iter_max)) * double(T);
    return std::max(1, int(std::lround(w)));
}

std::vector<int> sampleTimesteps(int t_end, int m, std::uint64_t seed) {
    if (m < 1) throw DomainError("interval count must be >= 1");
    if (t_end < m) throw DomainError("T_end must be >= interval count");
    std::mt19937_64 eng(seed);
    std::vector<int> ts;
    ts.reserve(std::size_t(m));
    for (int i = 1; i <= m; ++i) {
        double lower = double(t_end) * double(i - 1) / double(m);
        double upper = double(t_end) * double(i) / double(m);
        int lo = int(std::floor(lower)) + 1;
        int hi = int(std::floor(upper));
        double draw = upper - (upper - lower) * uniformDouble(eng);  // in (lower, upper]
        int t = int(std::lround(draw));
        t = std::clamp(t, std::max(1, lo), hi);
        ts.push_back(t);
    }
    return ts;
}

double dreamtimeWeight(int t, double mu, double sigma, const ScheduleTable& sched) {
    if (!(sigma > 0)) throw DomainError("sigma must be > 0");
    if (t < 1 || t > sched.T) throw DomainError("timestep out of range");
    auto unnormalized = [&](int s) {
        double ab = sched.alphaBar(s);
        double g = std::exp(-(double(s) - mu) * (double(s) - mu) / (2.0 * sigma * sigma));
        return std::sqrt((1.0 - ab) / ab) * g;
    };
    double z = 0.0;
    for (int s = 1; s <= sched.T; ++s) z += unnormalized(s);
    return unnormalized(t) / z;
}

LatentState ddimInvertStep(const LatentState& x, int t_from, int t_to,
                           const NoisePredictor& pred, const PromptId& prompt,
                           const ScheduleTable& sched, int delta_t) {
    if (!(t_to > t_from)) throw DomainError("inversion requires t_to > t_from");
    auto grid = substepGrid(t_from, t_to, delta_t);
    LatentState cur = x;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        int a = grid[k], b = grid[k + 1];
        LatentState eps = pred(cur, a, prompt);
        requireSameShape(cur, eps);
        double aa = std::sqrt(sched.alphaBar(a)), sa = std::sqrt(1.0 - sched.alphaBar(a));
        double ab = std::sqrt(sched.alphaBar(b)), sb = std::sqrt(1.0 - sched.alphaBar(b));
        for (std::size_t i = 0; i < cur.values.size(); ++i) {
            double x0 = (cur.values[i] - sa * eps.values[i]) / aa;
            cur.values[i] = ab * x0 + sb * eps.values[i];
        }
    }
    return cur;
}

LatentState ddimDenoiseStep(const LatentState& x, int t_from, int t_to,
                            const NoisePredictor& pred, const PromptId& prompt,
                            const ScheduleTable& sched, int delta_t) {
    if (!(t_from > t_to)) throw DomainError("denoising requires t_from > t_to");
    auto grid = substepGrid(t_to, t_from, delta_t);  // same grid as inversion
    LatentState cur = x;
    for (std::size_t k = grid.size() - 1; k > 0; --k) {
        int a = grid[k], b = grid[k - 1];  // a > b
        // predictor evaluated at the lower timestep: the exact mirror of the
        // inversion update for latent-independent predictions
        LatentState eps = pred(cur, b, prompt);
        requireSameShape(cur, eps);
        double aa = std::sqrt(sched.alphaBar(a)), sa = std::sqrt(1.0 - sched.alphaBar(a));
        double ab = std::sqrt(sched.alphaBar(b)), sb = std::sqrt(1.0 - sched.alphaBar(b));
        for (std::size_t i = 0; i < cur.values.size(); ++i) {
            double x0 = (cur.values[i] - sa * eps.values[i]) / aa;
            cur.values[i] = ab * x0 + sb * eps.values[i];
        }
    }
    return cur;
}

MtsTrajectory buildMtsTrajectory(const LatentState& x0, const std::vector<int>& timesteps,
                                 const NoisePredictor& pred, const PromptId& invert_prompt,
                                 const ScheduleTable& sched, int delta_t) {
    if (timesteps.empty()) throw DomainError("need at least one timestep");
    for (std::size_t i = 0; i < timesteps.size(); ++i) {
        if (timesteps[i] < 1 || timesteps[i] > sched.T) {
            throw DomainError("timestep out of range");
        }
        if (i > 0 && timesteps[i] <= timesteps[i - 1]) {
            throw DomainError("timesteps must be strictly ascending");
        }
    }
    MtsTrajectory traj;
    traj.timesteps = timesteps;
    LatentState cur = ddimInvertStep(x0, 0, timesteps.front(), pred, invert_prompt,
                                     sched, delta_t);
    traj.latents.push_back(cur);
    for (std::size_t i = 1; i < timesteps.size(); ++i) {
        cur = ddimInvertStep(cur, timesteps[i - 1], timesteps[i], pred, invert_prompt,
                             sched, delta_t);
        traj.latents.push_back(cur);
    }
    return traj;
}

LatentState guidanceDirection(const LatentState& eps_a, const LatentState& eps_b,
                              double w) {
    requireSameShape(eps_a, eps_b);
    LatentState out = eps_a;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = w * (eps_a.values[i] - eps_b.values[i]);
    }
    return out;
}

LatentState mtsDirection(const MtsTrajectory& traj, const NoisePredictor& pred,
                         const PromptId& prompt_pos, const PromptId& prompt_neg,
                         const std::vector<double>& weights) {
    if (traj.timesteps.size() != traj.latents.size()) {
        throw DomainError("trajectory latents misaligned with timesteps");
    }
    if (weights.size() != traj.timesteps.size()) {
        throw DomainError("weights misaligned with trajectory steps");
    }
    LatentState acc;
    for (std::size_t i = 0; i < traj.timesteps.size(); ++i) {
        LatentState pos = pred(traj.latents[i], traj.timesteps[i], prompt_pos);
        LatentState neg = pred(traj.latents[i], traj.timesteps[i], prompt_neg);
        LatentState term = guidanceDirection(pos, neg, weights[i]);
        if (i == 0) {
            acc = term;
        } else {
            requireSameShape(acc, term);
            for (std::size_t k = 0; k < acc.values.size(); ++k) {
                acc.values[k] += term.values[k];
            }
        }
    }
    return acc;
}

double reconstructionLoss(const std::vector<LatentState>& rendered,
                          const std::vector<LatentState>& targets) {
    if (rendered.size() != targets.size()) {
        throw DomainError("rendered/target list length mismatch");
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < rendered.size(); ++i) {
        requireSameShape(rendered[i], targets[i]);
        double sq = 0.0;
        for (std::size_t k = 0; k < rendered[i].values.size(); ++k) {
            double d = rendered[i].values[k] - targets[i].values[k];
            sq += d * d;
        }
        loss += std::sqrt(sq);
    }
    return loss;
}

std::string serializeSchedule(const ScheduleTable& sched) {
    json j = {{"T", sched.T}, {"alpha_bar", sched.alpha_bar}};
    return j.dump();
}

std::string serializeTrajectory(const MtsTrajectory& traj) {
    json j;
    j["timesteps"] = traj.timesteps;
    json latents = json::array();
    for (const auto& l : traj.latents) latents.push_back(l.values);
    j["latents"] = latents;
    return j.dump();
}

}  // namespace splat
