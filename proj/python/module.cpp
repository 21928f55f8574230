// pybind11 bindings: config-driven entry points take JSON strings so the
// Python wrapper can hand dicts through json.dumps without a converter dep.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mimosec/runner.hpp"
#include "mimosec/thresholds.hpp"

namespace py = pybind11;
using namespace mimosec;
using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("config JSON parse error: ") + e.what());
    }
}

RunSetup setup_from(const std::string& config_json) {
    return parse_config(parse(config_json));
}

py::dict threshold_dict(const ThresholdReport& rep) {
    py::dict d;
    d["quantity"] = rep.quantity;
    d["value"] = rep.value;
    d["ceil"] = rep.ceil_value;
    d["epsilon"] = rep.epsilon;
    d["delta"] = rep.delta;
    d["round_trip_residual"] = rep.round_trip_residual;
    return d;
}

py::dict rate_dict(const RateReport& rep) {
    py::dict d;
    d["rate"] = rep.rate;
    d["signal_term"] = rep.signal_term;
    d["leakage_term"] = rep.leakage_term;
    d["dof_ratio"] = rep.dof_ratio;
    d["clamped"] = rep.clamped;
    d["negative_warning"] = rep.negative_warning;
    d["formula"] = rep.formula;
    return d;
}

}  // namespace

PYBIND11_MODULE(_mimosec, mod) {
    mod.doc() = "massive-MIMO downlink security lab: analytics, thresholds, Monte Carlo";
    mod.attr("__version__") = kToolVersion;

    py::register_exception<ParameterError>(mod, "ParameterError", PyExc_ValueError);
    py::register_exception<ViolatedInvariant>(mod, "ViolatedInvariant", PyExc_ValueError);
    py::register_exception<UnknownFigure>(mod, "UnknownFigure", PyExc_ValueError);

    mod.def("default_config", [] { return default_config().dump(); },
            "Built-in config defaults as a JSON string.");

    mod.def("validate_config",
            [](const std::string& config_json) {
                setup_from(config_json);
                return true;
            },
            py::arg("config_json"),
            "Raises on invalid configs; returns True otherwise.");

    mod.def("figure_csv",
            [](int id, const std::vector<std::string>& overrides, std::uint64_t seed,
               int workers) { return render_csv(run_figure(id, overrides, seed, workers)); },
            py::arg("id"), py::arg("overrides") = std::vector<std::string>{},
            py::arg("seed") = 1, py::arg("workers") = 1,
            "Analytic figure sweep (ids 2..6) rendered as CSV text.");

    mod.def("verify",
            [](const std::string& suite, std::uint64_t seed, int workers) {
                const auto rep = run_verify(suite, seed, workers);
                return py::make_tuple(rep.all_pass, render_report(rep));
            },
            py::arg("suite") = "all", py::arg("seed") = 1, py::arg("workers") = 1,
            "Runs a verification suite; returns (all_pass, report_text).");

    mod.def("simulate_csv",
            [](const std::string& config_json, long long blocks) {
                const json cfg = parse(config_json);
                return render_csv(run_simulate(parse_config(cfg), blocks, cfg));
            },
            py::arg("config_json"), py::arg("blocks"),
            "Per-block end-to-end simulation table as CSV text.");

    mod.def("thresholds_csv",
            [](const std::string& config_json) {
                const json cfg = parse(config_json);
                return render_csv(run_thresholds(parse_config(cfg), cfg));
            },
            py::arg("config_json"), "All antenna thresholds for a config, as CSV text.");

    mod.def("mc_csv",
            [](const std::string& config_json, const std::string& experiment,
               long long trials) {
                const json cfg = parse(config_json);
                return render_csv(run_mc(parse_config(cfg), experiment, trials, cfg));
            },
            py::arg("config_json"), py::arg("experiment"), py::arg("trials"),
            "Named Monte-Carlo experiment as CSV text.");

    // scalar analytics / thresholds on a config
    mod.def("s_epsilon",
            [](const std::string& config_json, double epsilon, double delta) {
                return threshold_dict(s_epsilon(setup_from(config_json).cfg, epsilon, delta));
            },
            py::arg("config_json"), py::arg("epsilon"), py::arg("delta"));
    mod.def("v_of_r",
            [](const std::string& config_json, const std::vector<double>& rates,
               double delta) {
                return threshold_dict(v_of_r(setup_from(config_json).cfg, rates, delta));
            },
            py::arg("config_json"), py::arg("rates"), py::arg("delta"));
    mod.def("g_epsilon",
            [](const std::string& config_json, double epsilon) {
                return threshold_dict(g_epsilon(setup_from(config_json).cfg, epsilon));
            },
            py::arg("config_json"), py::arg("epsilon"));
    mod.def("rate_no_training_jamming",
            [](const std::string& config_json, double m, int user) {
                return rate_dict(rate_no_training_jamming(setup_from(config_json).cfg, m, user));
            },
            py::arg("config_json"), py::arg("m"), py::arg("user") = 0);
    mod.def("defense_rate",
            [](const std::string& config_json, double m, int user) {
                return rate_dict(defense_rate(setup_from(config_json).cfg, m, user));
            },
            py::arg("config_json"), py::arg("m"), py::arg("user") = 0);
    mod.def("leakage_delta_conjugate",
            [](const std::string& config_json, double m, double delta, int user) {
                return leakage_delta_conjugate(setup_from(config_json).cfg, m, delta, user);
            },
            py::arg("config_json"), py::arg("m"), py::arg("delta"), py::arg("user") = 0);
    mod.def("decodable_rate_delta",
            [](const std::string& config_json, double m, double delta, int user) {
                return decodable_rate_delta(setup_from(config_json).cfg, m, delta, user);
            },
            py::arg("config_json"), py::arg("m"), py::arg("delta"), py::arg("user") = 0);

    mod.def("waterfilling",
            [](int m, double rho_f, double data_fraction, double tolerance) {
                const auto sol = solve_waterfilling(m, rho_f, data_fraction, tolerance);
                py::dict d;
                d["lambda"] = sol.lambda;
                d["residual"] = sol.residual;
                d["capacity"] = sol.capacity;
                d["m"] = sol.m;
                d["rho_f"] = sol.rho_f;
                return d;
            },
            py::arg("m"), py::arg("rho_f"), py::arg("data_fraction"),
            py::arg("tolerance") = 1e-8,
            "Water-filling power allocation over Q ~ Gamma(M, 1).");
}
