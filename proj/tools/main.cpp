#include <CLI11.hpp>

#include "salad/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"SALAD / OLLA link adaptation simulator"};
    app.require_subcommand(1);

    salad::cli::RunRequest run_req;
    auto* run = app.add_subcommand("run", "Simulate one scenario and write trace, metrics, and "
                                          "plot-data files");
    run->add_option("--scenario", run_req.scenario, "Scenario file")->required();
    run->add_option("--out", run_req.out_dir, "Output directory")->required();
    run->add_option("--seed", run_req.seed, "Override the scenario seed");
    run->add_option("--adapter", run_req.adapter, "Override the adapter (olla, salad, oracle)");
    run->add_option("--override", run_req.overrides,
                    "Scenario override as section.key=value (repeatable)");

    salad::cli::SweepRequest sweep_req;
    auto* sweep = app.add_subcommand("sweep", "Run an adapters x seeds comparison from a manifest");
    sweep->add_option("--manifest", sweep_req.manifest, "Sweep manifest file")->required();
    sweep->add_option("--out", sweep_req.out_dir, "Output directory")->required();
    sweep->add_option("--jobs", sweep_req.jobs, "Parallel runs")->check(CLI::PositiveNumber);
    sweep->add_option("--override", sweep_req.overrides,
                      "Manifest override as section.key=value (repeatable)");

    salad::cli::TuneRequest tune_req;
    auto* tune = app.add_subcommand("tune", "Nelder-Mead parameter search over simulated runs");
    tune->add_option("--problem", tune_req.problem, "Tuning problem file")->required();
    tune->add_option("--out", tune_req.out_dir, "Output directory")->required();

    salad::cli::DistillRequest distill_req;
    auto* distill = app.add_subcommand("distill", "Offline learning-rate distillation from a "
                                                  "recorded trace");
    distill->add_option("--trace", distill_req.trace, "Trace CSV from a previous run")->required();
    distill->add_option("--out", distill_req.out_dir, "Output directory")->required();
    distill->add_option("--table", distill_req.bler_table, "BLER table ('builtin' or a file)");
    distill->add_option("--beta", distill_req.beta, "Teacher total-variation coefficient");
    distill->add_option("--window-slots", distill_req.window_slots,
                        "Only use the trailing window of the trace");

    salad::cli::FitBlerRequest fit_req;
    auto* fit = app.add_subcommand("fit-bler", "Fit sigmoid BLER parameters from samples");
    fit->add_option("--samples", fit_req.samples, "CSV of mcs,cbs,snr_db,bler rows")->required();
    fit->add_option("--out", fit_req.out_table, "Output table file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? salad::cli::kExitOk : salad::cli::kExitUsage;
    }

    if (run->parsed()) return salad::cli::cmd_run(run_req);
    if (sweep->parsed()) return salad::cli::cmd_sweep(sweep_req);
    if (tune->parsed()) return salad::cli::cmd_tune(tune_req);
    if (distill->parsed()) return salad::cli::cmd_distill(distill_req);
    if (fit->parsed()) return salad::cli::cmd_fit_bler(fit_req);
    return salad::cli::kExitUsage;
}
