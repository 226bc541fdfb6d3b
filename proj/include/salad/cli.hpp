#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace salad::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct RunRequest {
    std::filesystem::path scenario;
    std::filesystem::path out_dir;
    std::vector<std::string> overrides;  // section.key=value
    long seed = -1;                      // -1 keeps the scenario's seed
    std::string adapter;                 // empty keeps the scenario's adapter
};

/// Writes trace.csv, metrics.json, and the per-figure plot CSVs into out_dir.
int cmd_run(const RunRequest& request);

struct SweepRequest {
    std::filesystem::path manifest;
    std::filesystem::path out_dir;
    std::vector<std::string> overrides;
    int jobs = 1;
};

/// One run per adapter x seed from the manifest; per-run outputs plus an
/// aggregate.csv of median metrics per adapter.
int cmd_sweep(const SweepRequest& request);

struct TuneRequest {
    std::filesystem::path problem;
    std::filesystem::path out_dir;
};

/// Emits best_params.cfg (scenario [adapter] key format) and iterations.csv.
int cmd_tune(const TuneRequest& request);

struct DistillRequest {
    std::filesystem::path trace;
    std::filesystem::path out_dir;
    std::string bler_table = "builtin";
    double beta = 0.0;
    long window_slots = -1;  // -1 = whole trace
};

/// Offline distillation on a recorded trace: fits the teacher with
/// cross-validated knots and reports the selected learning rate.
int cmd_distill(const DistillRequest& request);

struct FitBlerRequest {
    std::filesystem::path samples;  // csv rows: mcs,cbs,snr_db,bler
    std::filesystem::path out_table;
};

/// Fits sigmoid parameters per (mcs, cbs) group and writes a table file;
/// unfittable groups are listed and fail the command.
int cmd_fit_bler(const FitBlerRequest& request);

}  // namespace salad::cli
