#include "salad/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <semaphore>
#include <set>
#include <sstream>

#include <json.hpp>

#include "salad/teacher.hpp"
#include "salad/trace_io.hpp"
#include "salad/tuner.hpp"

namespace salad::cli {

namespace {

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory: " + dir.string());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write file: " + path.string());
    }
    out << text;
}

Scenario load_scenario(const RunRequest& request) {
    std::vector<std::string> overrides = request.overrides;
    if (request.seed >= 0) {
        overrides.push_back("adapter.seed=" + std::to_string(request.seed));
    }
    if (!request.adapter.empty()) {
        overrides.push_back("adapter.algo=" + request.adapter);
    }
    return Scenario::from_file(request.scenario, overrides);
}

void write_plot_files(const std::filesystem::path& dir, const RunResult& run) {
    std::string mcs = "slot,mcs\n";
    std::string sinr = "slot,true_sinr_db,est_sinr_db\n";
    for (const auto& row : run.trace) {
        if (row.mcs) {
            mcs += std::to_string(row.slot) + "," + std::to_string(*row.mcs) + "\n";
        }
        sinr += std::to_string(row.slot) + "," + format_g9(row.true_sinr_db) + "," +
                format_g9(row.est_sinr_db) + "\n";
    }
    std::string bler = "slot,sliding_bler\n";
    for (const auto& [slot, v] : run.metrics.sliding_bler) {
        bler += std::to_string(slot) + "," + format_g9(v) + "\n";
    }
    write_text(dir / "plot_mcs_vs_slot.csv", mcs);
    write_text(dir / "plot_sinr_vs_slot.csv", sinr);
    write_text(dir / "plot_sliding_bler_vs_slot.csv", bler);
}

void write_run_outputs(const std::filesystem::path& dir, const RunResult& run) {
    ensure_dir(dir);
    write_trace_csv(dir / "trace.csv", run.trace);
    write_metrics_json(dir / "metrics.json", run.metrics);
    write_plot_files(dir, run);
    if (!run.distill_events.empty()) {
        std::string log = "slot,ok,selected_epsilon,selected_knots,message\n";
        for (const auto& e : run.distill_events) {
            log += std::to_string(e.slot) + "," + (e.ok ? "1" : "0") + "," +
                   format_g9(e.selected_epsilon) + "," + std::to_string(e.selected_knots) + "," +
                   e.message + "\n";
        }
        write_text(dir / "distill_log.csv", log);
    }
}

int guard(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

int cmd_run(const RunRequest& request) {
    return guard([&] {
        const Scenario scenario = load_scenario(request);
        const RunResult run = run_scenario(scenario);
        write_run_outputs(request.out_dir, run);
        std::cout << "wrote " << (request.out_dir / "trace.csv").string() << " ("
                  << run.trace.size() << " slots, long-term BLER "
                  << format_g9(run.metrics.long_term_bler) << ")\n";
        return kExitOk;
    });
}

int cmd_sweep(const SweepRequest& request) {
    return guard([&] {
        ConfigSections manifest = parse_config_file(request.manifest);
        apply_overrides(manifest, request.overrides);
        auto sweep_it = manifest.find("sweep");
        if (sweep_it == manifest.end()) {
            throw ConfigError("sweep manifest needs a [sweep] section");
        }
        auto& sweep = sweep_it->second;
        const auto need = [&](const char* key) {
            auto it = sweep.find(key);
            if (it == sweep.end()) {
                throw ConfigError(std::string("sweep manifest needs '") + key + "'");
            }
            return it->second;
        };
        const std::filesystem::path scenario_path =
            request.manifest.parent_path() / need("scenario");

        std::vector<std::string> adapters;
        {
            std::istringstream ss(need("adapters"));
            std::string item;
            while (std::getline(ss, item, ',')) {
                item.erase(std::remove_if(item.begin(), item.end(),
                                          [](unsigned char c) { return std::isspace(c); }),
                           item.end());
                if (!item.empty()) adapters.push_back(item);
            }
        }
        std::vector<long> seeds;
        {
            std::istringstream ss(need("seeds"));
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (item.find_first_not_of(" \t") == std::string::npos) continue;
                seeds.push_back(std::stol(item));
            }
        }
        if (adapters.empty() || seeds.empty()) {
            throw ConfigError("sweep manifest needs at least one adapter and one seed");
        }
        for (const auto& [key, value] : sweep) {
            if (key != "scenario" && key != "adapters" && key != "seeds") {
                throw ConfigError("unknown key '" + key + "' in section [sweep]");
            }
        }

        ensure_dir(request.out_dir);

        struct RunSpec {
            std::string adapter;
            long seed;
        };
        std::vector<RunSpec> specs;
        for (const auto& a : adapters) {
            for (long s : seeds) {
                specs.push_back({a, s});
            }
        }

        struct RunOutcome {
            bool ok = false;
            std::string error;
            Metrics metrics;
        };
        std::vector<RunOutcome> outcomes(specs.size());

        const int jobs = std::max(1, request.jobs);
        std::counting_semaphore<> slots(jobs);
        std::vector<std::future<void>> futures;
        for (std::size_t i = 0; i < specs.size(); ++i) {
            slots.acquire();
            futures.push_back(std::async(std::launch::async, [&, i] {
                const RunSpec& spec = specs[i];
                try {
                    RunRequest rr;
                    rr.scenario = scenario_path;
                    rr.seed = spec.seed;
                    rr.adapter = spec.adapter;
                    const Scenario scenario = load_scenario(rr);
                    const RunResult run = run_scenario(scenario);
                    write_run_outputs(request.out_dir /
                                          (spec.adapter + "_seed" + std::to_string(spec.seed)),
                                      run);
                    outcomes[i].ok = true;
                    outcomes[i].metrics = run.metrics;
                } catch (const std::exception& e) {
                    outcomes[i].error = e.what();
                }
                slots.release();
            }));
        }
        for (auto& f : futures) f.get();

        // Aggregate medians per adapter over completed runs.
        std::string agg =
            "adapter,runs,median_normalized_tp,median_long_term_bler,median_mean_se,"
            "median_adaptation_time_slots\n";
        bool any_failed = false;
        for (const auto& a : adapters) {
            std::vector<double> tp, bler, se, at;
            long runs = 0;
            for (std::size_t i = 0; i < specs.size(); ++i) {
                if (specs[i].adapter != a) continue;
                if (!outcomes[i].ok) {
                    any_failed = true;
                    std::cerr << "run failed (" << specs[i].adapter << ", seed " << specs[i].seed
                              << "): " << outcomes[i].error << "\n";
                    continue;
                }
                ++runs;
                tp.push_back(outcomes[i].metrics.normalized_tp);
                bler.push_back(outcomes[i].metrics.long_term_bler);
                se.push_back(outcomes[i].metrics.mean_se);
                if (outcomes[i].metrics.adaptation_time_slots) {
                    at.push_back(static_cast<double>(*outcomes[i].metrics.adaptation_time_slots));
                }
            }
            agg += a + "," + std::to_string(runs) + "," + format_g9(median(tp)) + "," +
                   format_g9(median(bler)) + "," + format_g9(median(se)) + ",";
            if (!at.empty()) {
                agg += format_g9(median(at));
            }
            agg += "\n";
        }
        write_text(request.out_dir / "aggregate.csv", agg);
        std::cout << "wrote " << (request.out_dir / "aggregate.csv").string() << " ("
                  << specs.size() << " runs)\n";
        return any_failed ? kExitRuntime : kExitOk;
    });
}

int cmd_tune(const TuneRequest& request) {
    return guard([&] {
        ConfigSections sections = parse_config_file(request.problem);
        auto tune_it = sections.find("tune");
        if (tune_it == sections.end()) {
            throw ConfigError("tuning problem needs a [tune] section");
        }
        auto& tune = tune_it->second;

        TuningProblem problem;
        const auto get = [&](const char* key) -> std::optional<std::string> {
            auto it = tune.find(key);
            if (it == tune.end()) return std::nullopt;
            return it->second;
        };
        const auto scenario_key = get("scenario");
        if (!scenario_key) {
            throw ConfigError("tuning problem needs 'scenario'");
        }
        const std::filesystem::path scenario_path = request.problem.parent_path() / *scenario_key;
        problem.scenarios.push_back(Scenario::from_file(scenario_path));
        if (const auto seeds = get("seeds")) {
            std::istringstream ss(*seeds);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (item.find_first_not_of(" \t") == std::string::npos) continue;
                problem.seeds.push_back(static_cast<std::uint64_t>(std::stol(item)));
            }
        } else {
            problem.seeds = {problem.scenarios.front().seed};
        }
        if (const auto v = get("w_tp")) problem.w_tp = std::stod(*v);
        if (const auto v = get("w_bler")) problem.w_bler = std::stod(*v);
        if (const auto v = get("max_iters")) problem.nm.max_iters = std::stoi(*v);
        for (const auto& [key, value] : tune) {
            static const std::set<std::string> known = {"scenario", "seeds", "w_tp", "w_bler",
                                                        "max_iters"};
            if (!known.count(key)) {
                throw ConfigError("unknown key '" + key + "' in section [tune]");
            }
        }

        auto bounds_it = sections.find("bounds");
        if (bounds_it == sections.end() || bounds_it->second.empty()) {
            throw ConfigError("tuning problem needs a non-empty [bounds] section");
        }
        for (const auto& [name, range] : bounds_it->second) {
            std::istringstream ss(range);
            std::string lo, hi;
            if (!std::getline(ss, lo, ',') || !std::getline(ss, hi)) {
                throw ConfigError("bound for '" + name + "' must look like 'lo, hi'");
            }
            problem.param_names.push_back(name);
            problem.bounds.push_back({std::stod(lo), std::stod(hi)});
        }
        for (const auto& [name, keys] : sections) {
            if (name != "tune" && name != "bounds") {
                throw ConfigError("unknown section [" + name + "] in tuning problem");
            }
        }

        const TuneResult result = tune_salad(problem);

        ensure_dir(request.out_dir);
        std::string params = "# tuned salad parameters; paste into a scenario [adapter] section\n";
        for (std::size_t i = 0; i < result.param_names.size(); ++i) {
            params += result.param_names[i] + " = " + format_g9(result.best_values[i]) + "\n";
        }
        write_text(request.out_dir / "best_params.cfg", params);

        std::string log = "iteration,best_objective\n";
        for (std::size_t i = 0; i < result.best_history.size(); ++i) {
            log += std::to_string(i + 1) + "," + format_g9(result.best_history[i]) + "\n";
        }
        write_text(request.out_dir / "iterations.csv", log);

        std::cout << "objective " << format_g9(result.initial_objective) << " -> "
                  << format_g9(result.best_objective) << "; wrote "
                  << (request.out_dir / "best_params.cfg").string() << "\n";
        return kExitOk;
    });
}

int cmd_distill(const DistillRequest& request) {
    return guard([&] {
        const std::vector<SlotTrace> trace = read_trace_csv(request.trace);
        std::optional<BlerTable> loaded;
        const BlerTable* table = &BlerTable::bundled_default();
        if (request.bler_table != "builtin") {
            loaded = BlerTable::load(request.bler_table);
            table = &*loaded;
        }

        HistoryBatch batch;
        long last_slot = trace.empty() ? 0 : trace.back().slot;
        for (const auto& row : trace) {
            if (!row.mcs || !row.nack) continue;
            if (request.window_slots > 0 && row.slot < last_slot - request.window_slots) continue;
            const auto& entry = table->resolve(*row.mcs, row.tbs.value_or(2000));
            batch.samples.push_back({row.slot, *row.nack, entry.center_db, entry.scale_db});
        }
        if (batch.size() < 4) {
            throw ConfigError("trace holds too few acknowledged transmissions to distill");
        }

        const DistillOptions opts = DistillOptions::defaults();
        TeacherFitOptions fit_opts;
        fit_opts.theta_init = trace.back().est_sinr_db;
        const int k = select_knots_cv(batch, opts.knot_candidates, request.beta, fit_opts);
        const SplineModel teacher = fit_teacher(batch, k, request.beta, fit_opts);
        const double eps = distill_learning_rate(batch, teacher, opts.epsilon_grid,
                                                 table->bler_clip(), table->scale_clip());

        nlohmann::ordered_json j;
        j["samples"] = batch.size();
        j["selected_knots"] = k;
        j["selected_epsilon"] = eps;
        j["beta"] = request.beta;
        ensure_dir(request.out_dir);
        write_text(request.out_dir / "distill.json", j.dump(2) + "\n");
        std::cout << "selected epsilon " << format_g9(eps) << " with " << k << " knots over "
                  << batch.size() << " samples\n";
        return kExitOk;
    });
}

int cmd_fit_bler(const FitBlerRequest& request) {
    return guard([&] {
        std::ifstream in(request.samples);
        if (!in) {
            throw IoError("cannot open samples file: " + request.samples.string());
        }
        std::map<std::pair<int, int>, std::vector<std::pair<double, double>>> groups;
        std::string line;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::string t = line;
            t.erase(0, t.find_first_not_of(" \t\r"));
            if (t.empty() || t[0] == '#') continue;
            if (line_no == 1 && t.rfind("mcs", 0) == 0) continue;
            std::replace(t.begin(), t.end(), ',', ' ');
            std::istringstream ss(t);
            int mcs = 0, cbs = 0;
            double snr = 0.0, bler = 0.0;
            if (!(ss >> mcs >> cbs >> snr >> bler)) {
                throw ConfigError("malformed sample row at " + request.samples.string() + ":" +
                                  std::to_string(line_no));
            }
            groups[{mcs, cbs}].emplace_back(snr, bler);
        }
        if (groups.empty()) {
            throw ConfigError("samples file holds no data rows");
        }

        std::vector<SigmoidBlerEntry> entries;
        std::vector<std::string> unfittable;
        for (const auto& [key, points] : groups) {
            const auto& [mcs, cbs] = key;
            try {
                const SigmoidFit fit = fit_sigmoid(points);
                entries.push_back({mcs, cbs, fit.center_db, fit.scale_db, false});
                std::cout << "mcs " << mcs << " cbs " << cbs << ": center "
                          << format_g9(fit.center_db) << " scale " << format_g9(fit.scale_db)
                          << " mse " << format_g9(fit.mse) << "\n";
            } catch (const FitError& e) {
                unfittable.push_back("mcs " + std::to_string(mcs) + " cbs " +
                                     std::to_string(cbs) + ": " + e.what());
            }
        }
        if (!entries.empty()) {
            const BlerTable table(entries);
            table.save(request.out_table);
            std::cout << "wrote " << request.out_table.string() << " (" << entries.size()
                      << " entries)\n";
        }
        if (!unfittable.empty()) {
            for (const auto& msg : unfittable) {
                std::cerr << "unfittable: " << msg << "\n";
            }
            return kExitRuntime;
        }
        return kExitOk;
    });
}

}  // namespace salad::cli
