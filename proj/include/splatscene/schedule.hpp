#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "splatscene/gaussian.hpp"

namespace splat {

enum class ScheduleKind { Linear, ScaledLinear };

struct ScheduleTable {
    int T = 1000;
    std::vector<double> alpha_bar;  // indexed 0..T, alpha_bar[0] == 1

    double alphaBar(int t) const;
};

struct LatentState {
    std::vector<double> values;
    std::vector<std::size_t> shape;

    static LatentState zeros(std::vector<std::size_t> shape);
    std::size_t size() const { return values.size(); }
};

void requireSameShape(const LatentState& a, const LatentState& b);

struct PromptId {
    std::string token;
    bool operator==(const PromptId&) const = default;

    static PromptId empty() { return {""}; }
    bool isEmpty() const { return token.empty(); }
};

// eps-prediction contract: deterministic, shape preserving
using NoisePredictor =
    std::function<LatentState(const LatentState& latent, int t, const PromptId& prompt)>;

struct MtsTrajectory {
    std::vector<int> timesteps;       // ascending, in (0, T]
    std::vector<LatentState> latents; // aligned with timesteps
};

ScheduleTable buildSchedule(ScheduleKind kind, int T, double beta_start,
                            double beta_end);
ScheduleTable defaultSchedule();  // scaled-linear, T=1000, beta 0.00085..0.012

// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) eps
LatentState addNoise(const LatentState& x0, const LatentState& eps, int t,
                     const ScheduleTable& sched);

// x0_hat = (x_t - sqrt(1 - abar_t) eps_hat) / sqrt(abar_t)
LatentState pseudoGroundTruth(const LatentState& xt, const LatentState& eps_hat, int t,
                              const ScheduleTable& sched);

// round((1 - iter/iter_max) * T), floored at 1
int timeWindow(int iter, int iter_max, int T = 1000);

// One draw per interval ((i-1)/m, i/m] of (0, T_end]; strictly ascending.
std::vector<int> sampleTimesteps(int t_end, int m, std::uint64_t seed);

double dreamtimeWeight(int t, double mu, double sigma, const ScheduleTable& sched);

// Single inversion update t_from -> t_to (t_to > t_from). The predictor is
// evaluated at the lower timestep of the step in both directions, so the
// denoise step is the exact inverse whenever the prediction does not depend on
// the latent. delta_t > 0 chains internal substeps of that size.
LatentState ddimInvertStep(const LatentState& x, int t_from, int t_to,
                           const NoisePredictor& pred, const PromptId& prompt,
                           const ScheduleTable& sched, int delta_t = 0);

LatentState ddimDenoiseStep(const LatentState& x, int t_from, int t_to,
                            const NoisePredictor& pred, const PromptId& prompt,
                            const ScheduleTable& sched, int delta_t = 0);

MtsTrajectory buildMtsTrajectory(const LatentState& x0, const std::vector<int>& timesteps,
                                 const NoisePredictor& pred, const PromptId& invert_prompt,
                                 const ScheduleTable& sched, int delta_t = 0);

// w * (eps_a - eps_b); the single-timestep guidance direction
LatentState guidanceDirection(const LatentState& eps_a, const LatentState& eps_b,
                              double w);

// sum_i w_i * (pred(x_i, t_i, pos) - pred(x_i, t_i, neg))
LatentState mtsDirection(const MtsTrajectory& traj, const NoisePredictor& pred,
                         const PromptId& prompt_pos, const PromptId& prompt_neg,
                         const std::vector<double>& weights);

// sum_i || rendered_i - targets_i ||_2
double reconstructionLoss(const std::vector<LatentState>& rendered,
                          const std::vector<LatentState>& targets);

std::string serializeSchedule(const ScheduleTable& sched);
std::string serializeTrajectory(const MtsTrajectory& traj);

}  // namespace splat
