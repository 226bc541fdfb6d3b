#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "salad/scenario.hpp"
#include "salad/simkit.hpp"

namespace salad {

struct Bounds {
    double lo = 0.0;
    double hi = 1.0;
};

struct NelderMeadOptions {
    int max_iters = 25;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double init_step_frac = 0.05;  // initial simplex offset per axis, fraction of box width
};

struct NelderMeadResult {
    std::vector<double> best_x;
    double best_value = 0.0;
    // Best-seen objective after each iteration (monotone non-decreasing).
    std::vector<double> best_history;
};

/// Maximizes over a box via reflection/expansion/contraction/shrink with the
/// classic coefficients; candidate vertices are clamped to the bounds and the
/// best vertex ever evaluated is returned. max_iters = 0 returns x0.
NelderMeadResult nelder_mead_maximize(const std::function<double(std::span<const double>)>& f,
                                      std::span<const double> x0, std::span<const Bounds> bounds,
                                      const NelderMeadOptions& opts = {});

/// Free parameters are SaladConfig fields addressed by name; objectives mix
/// normalized throughput against squared sliding-BLER deviation from the
/// target, each normalized by its magnitude at the starting configuration.
struct TuningProblem {
    std::vector<std::string> param_names;
    std::vector<Bounds> bounds;
    double w_tp = 1.0;
    double w_bler = 1.0;
    std::vector<Scenario> scenarios;
    std::vector<std::uint64_t> seeds;  // common random numbers across evaluations
    NelderMeadOptions nm;

    void validate() const;
};

/// Applies named parameter values onto a config (integer fields rounded).
SaladConfig apply_params(const SaladConfig& base, std::span<const std::string> names,
                         std::span<const double> values);

/// Mean over scenarios and seeds of
///   w_tp * normalized_tp / tp_norm  -  w_bler * mean((sliding_bler - tau)^2) / bler_norm.
/// Deterministic given the seed set.
double tuning_objective(const TuningProblem& problem, std::span<const double> values,
                        double tp_norm, double bler_norm);

struct TuneResult {
    std::vector<std::string> param_names;
    std::vector<double> best_values;
    double best_objective = 0.0;
    double initial_objective = 0.0;
    std::vector<double> best_history;
};

/// Runs the 25-step (by default) campaign from the scenario's own salad
/// config as the starting point.
TuneResult tune_salad(const TuningProblem& problem);

}  // namespace salad
