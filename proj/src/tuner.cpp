#include "salad/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace salad {

namespace {

std::vector<double> clamp_to_bounds(std::vector<double> x, std::span<const Bounds> bounds) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(x[i], bounds[i].lo, bounds[i].hi);
    }
    return x;
}

}  // namespace

NelderMeadResult nelder_mead_maximize(const std::function<double(std::span<const double>)>& f,
                                      std::span<const double> x0, std::span<const Bounds> bounds,
                                      const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    if (n == 0 || bounds.size() != n) {
        throw ConfigError("Nelder-Mead needs matching non-empty x0 and bounds");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(bounds[i].lo < bounds[i].hi) || !std::isfinite(bounds[i].lo) ||
            !std::isfinite(bounds[i].hi)) {
            throw ConfigError("Nelder-Mead bounds must be finite, non-empty intervals");
        }
    }

    struct Vertex {
        std::vector<double> x;
        double value;
    };

    NelderMeadResult result;
    result.best_x = clamp_to_bounds({x0.begin(), x0.end()}, bounds);
    result.best_value = f(result.best_x);

    auto track = [&](const std::vector<double>& x, double v) {
        if (v > result.best_value) {
            result.best_value = v;
            result.best_x = x;
        }
    };

    if (opts.max_iters <= 0) {
        return result;
    }

    std::vector<Vertex> simplex;
    simplex.push_back({result.best_x, result.best_value});
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x = result.best_x;
        const double width = bounds[i].hi - bounds[i].lo;
        double step = opts.init_step_frac * width;
        if (x[i] + step > bounds[i].hi) step = -step;
        x[i] += step;
        x = clamp_to_bounds(std::move(x), bounds);
        const double v = f(x);
        track(x, v);
        simplex.push_back({std::move(x), v});
    }

    auto by_value_desc = [](const Vertex& a, const Vertex& b) { return a.value > b.value; };

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        std::stable_sort(simplex.begin(), simplex.end(), by_value_desc);
        Vertex& worst = simplex.back();

        std::vector<double> centroid(n, 0.0);
        for (std::size_t v = 0; v + 1 < simplex.size(); ++v) {
            for (std::size_t i = 0; i < n; ++i) {
                centroid[i] += simplex[v].x[i];
            }
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto along = [&](double coeff) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = centroid[i] + coeff * (centroid[i] - worst.x[i]);
            }
            return clamp_to_bounds(std::move(x), bounds);
        };

        const std::vector<double> reflected = along(opts.reflection);
        const double v_reflected = f(reflected);
        track(reflected, v_reflected);

        if (v_reflected > simplex.front().value) {
            const std::vector<double> expanded = along(opts.expansion);
            const double v_expanded = f(expanded);
            track(expanded, v_expanded);
            worst = v_expanded > v_reflected ? Vertex{expanded, v_expanded}
                                             : Vertex{reflected, v_reflected};
        } else if (v_reflected > simplex[simplex.size() - 2].value) {
            worst = Vertex{reflected, v_reflected};
        } else {
            const std::vector<double> contracted = along(-opts.contraction);
            const double v_contracted = f(contracted);
            track(contracted, v_contracted);
            if (v_contracted > worst.value) {
                worst = Vertex{contracted, v_contracted};
            } else {
                // Shrink toward the best vertex.
                for (std::size_t v = 1; v < simplex.size(); ++v) {
                    for (std::size_t i = 0; i < n; ++i) {
                        simplex[v].x[i] = simplex[0].x[i] +
                                          opts.shrink * (simplex[v].x[i] - simplex[0].x[i]);
                    }
                    simplex[v].x = clamp_to_bounds(std::move(simplex[v].x), bounds);
                    simplex[v].value = f(simplex[v].x);
                    track(simplex[v].x, simplex[v].value);
                }
            }
        }
        result.best_history.push_back(result.best_value);
    }
    return result;
}

void TuningProblem::validate() const {
    if (param_names.empty() || param_names.size() != bounds.size()) {
        throw ConfigError("tuning problem needs matching parameter names and bounds");
    }
    if (w_tp < 0.0 || w_bler < 0.0 || (w_tp == 0.0 && w_bler == 0.0)) {
        throw ConfigError("tuning weights must be non-negative and not both zero");
    }
    if (scenarios.empty()) {
        throw ConfigError("tuning problem needs at least one scenario");
    }
    if (seeds.empty()) {
        throw ConfigError("tuning problem needs at least one seed");
    }
    for (const auto& name : param_names) {
        apply_params(SaladConfig{}, {&name, 1}, std::vector<double>{1.0});  // name check
    }
}

SaladConfig apply_params(const SaladConfig& base, std::span<const std::string> names,
                         std::span<const double> values) {
    if (names.size() != values.size()) {
        throw ConfigError("parameter names and values must match");
    }
    SaladConfig cfg = base;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string& name = names[i];
        const double v = values[i];
        if (name == "epsilon") {
            cfg.epsilon = v;
        } else if (name == "rho") {
            cfg.rho = v;
        } else if (name == "window") {
            cfg.window = std::max(1, static_cast<int>(std::lround(v)));
        } else if (name == "p_probe") {
            cfg.p_probe = v;
        } else if (name == "tau_probe") {
            cfg.tau_probe = v;
        } else if (name == "k_E") {
            cfg.k_E = v;
        } else if (name == "tau") {
            cfg.tau = v;
        } else if (name == "N_eps") {
            cfg.N_eps = std::max(1, static_cast<int>(std::lround(v)));
        } else {
            throw ConfigError("unknown tuning parameter '" + name + "'");
        }
    }
    return cfg;
}

namespace {

struct RawObjective {
    double tp = 0.0;
    double bler_dev = 0.0;  // mean squared sliding-BLER deviation from tau
};

RawObjective evaluate_raw(const TuningProblem& problem, std::span<const double> values) {
    RawObjective raw;
    long count = 0;
    for (const auto& base_scenario : problem.scenarios) {
        for (std::uint64_t seed : problem.seeds) {
            Scenario sc = base_scenario;
            sc.adapter = AdapterKind::salad;
            sc.salad_cfg = apply_params(base_scenario.salad_cfg, problem.param_names, values);
            sc.olla.target = sc.salad_cfg.tau;
            sc.seed = seed;
            const RunResult run = run_scenario(sc);
            raw.tp += run.metrics.normalized_tp;
            double dev = 0.0;
            for (const auto& [slot, v] : run.metrics.sliding_bler) {
                const double d = v - sc.salad_cfg.tau;
                dev += d * d;
            }
            if (!run.metrics.sliding_bler.empty()) {
                dev /= static_cast<double>(run.metrics.sliding_bler.size());
            }
            raw.bler_dev += dev;
            ++count;
        }
    }
    if (count > 0) {
        raw.tp /= static_cast<double>(count);
        raw.bler_dev /= static_cast<double>(count);
    }
    return raw;
}

}  // namespace

double tuning_objective(const TuningProblem& problem, std::span<const double> values,
                        double tp_norm, double bler_norm) {
    const RawObjective raw = evaluate_raw(problem, values);
    return problem.w_tp * raw.tp / tp_norm - problem.w_bler * raw.bler_dev / bler_norm;
}

TuneResult tune_salad(const TuningProblem& problem) {
    problem.validate();

    // Starting point: each scenario's configured salad parameters (the first
    // scenario's values seed the vector).
    const SaladConfig& start = problem.scenarios.front().salad_cfg;
    std::vector<double> x0;
    for (const auto& name : problem.param_names) {
        if (name == "epsilon") x0.push_back(start.epsilon);
        else if (name == "rho") x0.push_back(start.rho);
        else if (name == "window") x0.push_back(static_cast<double>(start.window));
        else if (name == "p_probe") x0.push_back(start.p_probe);
        else if (name == "tau_probe") x0.push_back(start.tau_probe);
        else if (name == "k_E") x0.push_back(start.k_E);
        else if (name == "tau") x0.push_back(start.tau);
        else if (name == "N_eps") x0.push_back(static_cast<double>(start.N_eps));
        else throw ConfigError("unknown tuning parameter '" + name + "'");
    }

    // Normalize both objective terms by their magnitude at the start.
    const RawObjective at_start = evaluate_raw(problem, x0);
    const double tp_norm = std::abs(at_start.tp) > 1e-12 ? std::abs(at_start.tp) : 1.0;
    const double bler_norm =
        std::abs(at_start.bler_dev) > 1e-12 ? std::abs(at_start.bler_dev) : 1.0;

    auto objective = [&](std::span<const double> values) {
        return tuning_objective(problem, values, tp_norm, bler_norm);
    };

    const NelderMeadResult nm = nelder_mead_maximize(objective, x0, problem.bounds, problem.nm);

    TuneResult result;
    result.param_names = problem.param_names;
    result.best_values = nm.best_x;
    result.best_objective = nm.best_value;
    result.initial_objective =
        problem.w_tp * at_start.tp / tp_norm - problem.w_bler * at_start.bler_dev / bler_norm;
    result.best_history = nm.best_history;
    return result;
}

}  // namespace salad
