#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "salad/illa.hpp"
#include "salad/olla.hpp"
#include "salad/rng.hpp"
#include "salad/salad.hpp"
#include "salad/simkit.hpp"
#include "salad/teacher.hpp"
#include "salad/trace_io.hpp"
#include "salad/tuner.hpp"

namespace py = pybind11;
using namespace salad;

namespace {

py::dict metrics_to_dict(const Metrics& m) {
    py::dict d;
    d["slots"] = m.slots;
    d["transmissions"] = m.transmissions;
    d["nacks"] = m.nacks;
    d["feedbacks_delivered"] = m.feedbacks_delivered;
    d["long_term_bler"] = m.long_term_bler;
    d["normalized_tp"] = m.normalized_tp;
    d["mean_se"] = m.mean_se;
    d["sliding_window"] = m.sliding_window;
    d["sliding_bler"] = m.sliding_bler;
    if (m.adaptation_time_slots) {
        d["adaptation_time_slots"] = *m.adaptation_time_slots;
    } else {
        d["adaptation_time_slots"] = py::none();
    }
    return d;
}

py::dict trace_row_to_dict(const SlotTrace& row) {
    py::dict d;
    d["slot"] = row.slot;
    d["true_sinr_db"] = row.true_sinr_db;
    d["est_sinr_db"] = row.est_sinr_db;
    d["mcs"] = row.mcs ? py::cast(*row.mcs) : py::none();
    d["tbs"] = row.tbs ? py::cast(*row.tbs) : py::none();
    d["nack"] = row.nack ? py::cast(*row.nack) : py::none();
    d["instant_target"] = row.instant_target ? py::cast(*row.instant_target) : py::none();
    d["bias_ratio"] = row.bias_ratio ? py::cast(*row.bias_ratio) : py::none();
    d["probe_flag"] = row.probe_flag ? py::cast(*row.probe_flag) : py::none();
    d["integral_error"] = row.integral_error ? py::cast(*row.integral_error) : py::none();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Link adaptation simulator: sigmoid BLER model, OLLA baseline, SALAD adapter, "
              "slot-based channel simulation, and a Nelder-Mead tuner";

    py::register_exception<LookupError>(m, "TableLookupError");
    py::register_exception<FitError>(m, "FitError");
    py::register_exception<ConfigError>(m, "ScenarioConfigError");

    py::class_<McsTable>(m, "McsTable")
        .def_static("default_table", &McsTable::default_table, py::return_value_policy::reference)
        .def("se", &McsTable::se, py::arg("mcs"))
        .def("contains", &McsTable::contains, py::arg("mcs"))
        .def_property_readonly("lowest", &McsTable::lowest)
        .def_property_readonly("highest", &McsTable::highest)
        .def_property_readonly("min_se", &McsTable::min_se)
        .def("__len__", &McsTable::size);

    py::class_<SigmoidBlerEntry>(m, "SigmoidBlerEntry")
        .def(py::init<>())
        .def_readwrite("mcs", &SigmoidBlerEntry::mcs)
        .def_readwrite("cbs_bits", &SigmoidBlerEntry::cbs_bits)
        .def_readwrite("center_db", &SigmoidBlerEntry::center_db)
        .def_readwrite("scale_db", &SigmoidBlerEntry::scale_db)
        .def_readwrite("synthetic", &SigmoidBlerEntry::synthetic);

    py::class_<BlerTable>(m, "BlerTable")
        .def_static("bundled_default", &BlerTable::bundled_default,
                    py::return_value_policy::reference)
        .def_static("load", &BlerTable::load, py::arg("path"))
        .def("save", &BlerTable::save, py::arg("path"))
        .def("bler", &BlerTable::bler, py::arg("mcs"), py::arg("gamma_db"), py::arg("tbs_bits"))
        .def("bler_clipped", &BlerTable::bler_clipped, py::arg("mcs"), py::arg("gamma_db"),
             py::arg("tbs_bits"))
        .def("clip_bler_scale", &BlerTable::clip_bler_scale, py::arg("bler"), py::arg("scale_db"))
        .def("se", &BlerTable::se, py::arg("mcs"))
        .def("entries", &BlerTable::entries)
        .def("mcs_table", &BlerTable::mcs_table, py::return_value_policy::reference_internal);

    m.def(
        "fit_sigmoid",
        [](const std::vector<std::pair<double, double>>& points) {
            const SigmoidFit fit = fit_sigmoid(points);
            return py::make_tuple(fit.center_db, fit.scale_db, fit.mse);
        },
        py::arg("snr_bler_points"),
        "Least-squares sigmoid fit; returns (center_db, scale_db, mse)");

    py::class_<IllaDecision>(m, "IllaDecision")
        .def_readonly("mcs", &IllaDecision::mcs)
        .def_readonly("predicted_bler", &IllaDecision::predicted_bler)
        .def_readonly("feasible", &IllaDecision::feasible)
        .def("__repr__", [](const IllaDecision& d) {
            return "IllaDecision(mcs=" + std::to_string(d.mcs) +
                   ", predicted_bler=" + std::to_string(d.predicted_bler) +
                   ", feasible=" + (d.feasible ? std::string("True") : std::string("False")) + ")";
        });

    m.def("select_mcs_illa", &select_mcs_illa, py::arg("table"), py::arg("gamma_est_db"),
          py::arg("target"), py::arg("tbs_bits"));
    m.def("select_mcs_maxse", &select_mcs_maxse, py::arg("table"), py::arg("gamma_est_db"),
          py::arg("target"), py::arg("tbs_bits"));

    py::class_<OllaConfig>(m, "OllaConfig")
        .def(py::init<>())
        .def(py::init([](double target, double delta_nack) {
                 OllaConfig cfg{target, delta_nack};
                 cfg.validate();
                 return cfg;
             }),
             py::arg("target") = 0.1, py::arg("delta_nack") = 1.0)
        .def_readwrite("target", &OllaConfig::target)
        .def_readwrite("delta_nack", &OllaConfig::delta_nack)
        .def_property_readonly("delta_ack", &OllaConfig::delta_ack);

    py::class_<OllaState>(m, "OllaState")
        .def(py::init<>())
        .def_readwrite("offset_db", &OllaState::offset_db)
        .def_readwrite("reported_sinr_db", &OllaState::reported_sinr_db);

    m.def("olla_on_feedback", &olla_on_feedback, py::arg("state"), py::arg("config"),
          py::arg("nack"));
    m.def("olla_sa_update", &olla_sa_update, py::arg("state"), py::arg("config"), py::arg("nack"));
    m.def("olla_estimate", &olla_estimate, py::arg("state"));
    m.def("sa_increment", &sa_increment, py::arg("delta_nack"), py::arg("target"),
          py::arg("nack"));

    py::class_<SaladConfig>(m, "SaladConfig")
        .def(py::init<>())
        .def_readwrite("epsilon", &SaladConfig::epsilon)
        .def_readwrite("rho", &SaladConfig::rho)
        .def_readwrite("window", &SaladConfig::window)
        .def_readwrite("p_probe", &SaladConfig::p_probe)
        .def_readwrite("tau_probe", &SaladConfig::tau_probe)
        .def_readwrite("k_E", &SaladConfig::k_E)
        .def_readwrite("tau", &SaladConfig::tau)
        .def_readwrite("N_eps", &SaladConfig::N_eps)
        .def_readwrite("adjust_only_when_not_probing",
                       &SaladConfig::adjust_only_when_not_probing)
        .def("validate", &SaladConfig::validate);

    py::class_<HarqFeedback>(m, "HarqFeedback")
        .def(py::init([](long slot, int mcs, int tbs_bits, bool nack) {
                 return HarqFeedback{slot, mcs, tbs_bits, nack};
             }),
             py::arg("slot"), py::arg("mcs"), py::arg("tbs_bits"), py::arg("nack"))
        .def_readwrite("slot", &HarqFeedback::slot)
        .def_readwrite("mcs", &HarqFeedback::mcs)
        .def_readwrite("tbs_bits", &HarqFeedback::tbs_bits)
        .def_readwrite("nack", &HarqFeedback::nack);

    py::class_<SaladAdapter>(m, "SaladAdapter")
        .def(py::init([](const BlerTable& table, const SaladConfig& cfg, std::uint64_t seed) {
                 return new SaladAdapter(table, cfg, make_rng(seed, RngStream::probe));
             }),
             py::arg("table"), py::arg("config") = SaladConfig{}, py::arg("seed") = 1,
             py::keep_alive<1, 2>())
        .def("on_feedback", &SaladAdapter::on_feedback, py::arg("feedback"))
        .def("on_report", &SaladAdapter::on_report, py::arg("reported_sinr_db"))
        .def(
            "step",
            [](SaladAdapter& adapter, long slot, bool scheduled, int tbs_bits,
               const std::vector<HarqFeedback>& feedbacks) {
                SlotContext ctx;
                ctx.slot = slot;
                ctx.scheduled = scheduled;
                ctx.tbs_bits = tbs_bits;
                ctx.feedbacks = feedbacks;
                const SaladStepResult r = adapter.step(ctx);
                py::dict d;
                d["mcs"] = r.decision ? py::cast(r.decision->mcs) : py::none();
                d["feasible"] = r.decision ? py::cast(r.decision->feasible) : py::none();
                d["predicted_bler"] =
                    r.decision ? py::cast(r.decision->predicted_bler) : py::none();
                d["bias_ratio"] = r.bias_ratio ? py::cast(*r.bias_ratio) : py::none();
                d["probed"] = r.probed;
                d["instant_target"] = r.instant_target ? py::cast(*r.instant_target) : py::none();
                return d;
            },
            py::arg("slot"), py::arg("scheduled"), py::arg("tbs_bits") = 2000,
            py::arg("feedbacks") = std::vector<HarqFeedback>{})
        .def_property_readonly("estimate_db", &SaladAdapter::estimate_db)
        .def_property_readonly("epsilon",
                               [](const SaladAdapter& a) { return a.state().epsilon; })
        .def_property_readonly("integral_error",
                               [](const SaladAdapter& a) { return a.state().integral_error; });

    py::class_<Scenario>(m, "Scenario")
        .def_static("from_file", &Scenario::from_file, py::arg("path"),
                    py::arg("overrides") = std::vector<std::string>{})
        .def_static("from_string", &Scenario::from_string, py::arg("text"),
                    py::arg("overrides") = std::vector<std::string>{})
        .def_readwrite("n_slots", &Scenario::n_slots)
        .def_readwrite("seed", &Scenario::seed)
        .def_readwrite("harq_delay", &Scenario::harq_delay);

    m.def(
        "run_scenario",
        [](const Scenario& scenario) {
            const RunResult run = run_scenario(scenario);
            py::dict d;
            py::list trace;
            for (const auto& row : run.trace) {
                trace.append(trace_row_to_dict(row));
            }
            d["trace"] = trace;
            d["metrics"] = metrics_to_dict(run.metrics);
            py::list distills;
            for (const auto& e : run.distill_events) {
                py::dict ev;
                ev["slot"] = e.slot;
                ev["ok"] = e.ok;
                ev["selected_epsilon"] = e.selected_epsilon;
                ev["selected_knots"] = e.selected_knots;
                distills.append(ev);
            }
            d["distill_events"] = distills;
            return d;
        },
        py::arg("scenario"), "Runs one deterministic scenario and returns trace plus metrics");

    m.def(
        "nelder_mead_maximize",
        [](const py::function& f, const std::vector<double>& x0,
           const std::vector<std::pair<double, double>>& bounds, int max_iters) {
            std::vector<Bounds> box;
            box.reserve(bounds.size());
            for (const auto& [lo, hi] : bounds) box.push_back({lo, hi});
            NelderMeadOptions opts;
            opts.max_iters = max_iters;
            const NelderMeadResult r = nelder_mead_maximize(
                [&f](std::span<const double> x) {
                    return f(std::vector<double>(x.begin(), x.end())).cast<double>();
                },
                x0, box, opts);
            return py::make_tuple(r.best_x, r.best_value);
        },
        py::arg("f"), py::arg("x0"), py::arg("bounds"), py::arg("max_iters") = 25);
}
