#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "hapsris/allocation.hpp"
#include "hapsris/config.hpp"
#include "hapsris/errors.hpp"
#include "hapsris/experiments.hpp"
#include "hapsris/gp_solver.hpp"
#include "hapsris/report.hpp"
#include "hapsris/scenario.hpp"
#include "hapsris/validation.hpp"

namespace py = pybind11;
using namespace hapsris;

namespace {

py::tuple to_tuple(const Vec3& v) { return py::make_tuple(v.x, v.y, v.z); }

Vec3 to_vec3(const std::vector<double>& v)
{
    if (v.size() != 3) throw ConfigError("cs_position", "expected three coordinates");
    return {v[0], v[1], v[2]};
}

std::vector<Method> methods_from(const std::vector<std::string>& names)
{
    std::vector<Method> out;
    for (const auto& n : names) out.push_back(method_from_string(n));
    return out;
}

Stage2Instance make_instance(std::vector<double> c, std::vector<double> power_cap, std::vector<double> unit_cap,
                             double unit_power, double power_budget, double unit_budget, double power_floor,
                             double unit_floor, double power_weight, double unit_weight)
{
    Stage2Instance in;
    in.qos_constant = std::move(c);
    in.power_cap = std::move(power_cap);
    in.unit_cap = std::move(unit_cap);
    in.unit_power = unit_power;
    in.power_budget = power_budget;
    in.unit_budget = unit_budget;
    in.power_floor = power_floor;
    in.unit_floor = unit_floor;
    in.power_weight = power_weight;
    in.unit_weight = unit_weight;
    in.validate();
    return in;
}

py::dict solution_dict(const Stage2Solution& s)
{
    py::dict d;
    d["p"] = s.p;
    d["n"] = s.n;
    d["objective"] = s.objective;
    d["status"] = std::string(to_string(s.status));
    d["kkt_residual"] = s.kkt_residual;
    d["duality_gap"] = s.duality_gap;
    d["newton_steps"] = s.newton_steps;
    d["certificate"] = s.certificate;
    return d;
}

#define STAGE2_ARGS                                                                                                  \
    py::arg("c"), py::arg("power_cap"), py::arg("unit_cap"), py::arg("unit_power") = 7.8e-3,                       \
        py::arg("power_budget"), py::arg("unit_budget"), py::arg("power_floor") = 1e-9, py::arg("unit_floor") = 1.0, \
        py::arg("power_weight") = 1.0, py::arg("unit_weight") = 1.0

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "HAPS-RIS beyond-cell resource allocation core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_ArithmeticError);

    m.attr("__version__") = library_version();

    py::class_<ScenarioConfig>(m, "Config")
        .def(py::init<>())
        .def_readwrite("area_side_m", &ScenarioConfig::area_side_m)
        .def_readwrite("num_ues", &ScenarioConfig::num_ues)
        .def_readwrite("max_bs", &ScenarioConfig::max_bs)
        .def_readwrite("min_ue_separation_m", &ScenarioConfig::min_ue_separation_m)
        .def_readwrite("bs_height_m", &ScenarioConfig::bs_height_m)
        .def_readwrite("ue_height_m", &ScenarioConfig::ue_height_m)
        .def_readwrite("haps_altitude_m", &ScenarioConfig::haps_altitude_m)
        .def_property(
            "cs_position", [](const ScenarioConfig& c) { return to_tuple(c.cs_position); },
            [](ScenarioConfig& c, const std::vector<double>& v) { c.cs_position = to_vec3(v); })
        .def_readwrite("carrier_hz", &ScenarioConfig::carrier_hz)
        .def_readwrite("bs_bandwidth_hz", &ScenarioConfig::bs_bandwidth_hz)
        .def_readwrite("ue_bandwidth_hz", &ScenarioConfig::ue_bandwidth_hz)
        .def_readwrite("rate_threshold_bps", &ScenarioConfig::rate_threshold_bps)
        .def_readwrite("noise_psd", &ScenarioConfig::noise_psd)
        .def_readwrite("shadowing_sigma_db", &ScenarioConfig::shadowing_sigma_db)
        .def_readwrite("bs_tx_power_w", &ScenarioConfig::bs_tx_power_w)
        .def_readwrite("bs_antenna_gain", &ScenarioConfig::bs_antenna_gain)
        .def_readwrite("ue_antenna_gain", &ScenarioConfig::ue_antenna_gain)
        .def_readwrite("cs_total_power_w", &ScenarioConfig::cs_total_power_w)
        .def_readwrite("cs_antenna_gain", &ScenarioConfig::cs_antenna_gain)
        .def_readwrite("per_ue_power_cap_w", &ScenarioConfig::per_ue_power_cap_w)
        .def_readwrite("ris_total_units", &ScenarioConfig::ris_total_units)
        .def_readwrite("per_ue_unit_cap", &ScenarioConfig::per_ue_unit_cap)
        .def_readwrite("ris_unit_power_w", &ScenarioConfig::ris_unit_power_w)
        .def_readwrite("phase_bits", &ScenarioConfig::phase_bits)
        .def_readwrite("reflection_loss", &ScenarioConfig::reflection_loss)
        .def_readwrite("power_floor_w", &ScenarioConfig::power_floor_w)
        .def_property(
            "objective_mask", [](const ScenarioConfig& c) { return std::string(to_string(c.objective_mask)); },
            [](ScenarioConfig& c, const std::string& v) { c.objective_mask = objective_mask_from_string(v); })
        .def_readwrite("rng_seed", &ScenarioConfig::rng_seed)
        .def("set", [](ScenarioConfig& c, const std::string& k, const std::string& v) { apply_setting(c, k, v); },
             py::arg("key"), py::arg("value"), "Apply one key = value setting (accepts dB/dBm aliases).")
        .def("validate", &ScenarioConfig::validate)
        .def("to_text", [](const ScenarioConfig& c) { return serialize_config(c); })
        .def("hash", [](const ScenarioConfig& c) { return config_hash(c); })
        .def("copy", [](const ScenarioConfig& c) { return c; })
        .def("__eq__", [](const ScenarioConfig& a, const ScenarioConfig& b) {
            return serialize_config(a) == serialize_config(b);
        })
        .def("__repr__", [](const ScenarioConfig& c) { return "<hapsris.Config " + config_hash(c) + ">"; });

    m.def("paper_defaults", &paper_defaults);
    m.def("load_config", &load_config, py::arg("path"));
    m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));
    m.def("config_keys", &config_keys);

    py::class_<Scenario>(m, "Scenario")
        .def_property_readonly("ue_positions",
                               [](const Scenario& s) {
                                   py::list l;
                                   for (const auto& p : s.ue_positions) l.append(to_tuple(p));
                                   return l;
                               })
        .def_property_readonly("bs_positions",
                               [](const Scenario& s) {
                                   py::list l;
                                   for (const auto& p : s.bs_positions) l.append(to_tuple(p));
                                   return l;
                               })
        .def_property_readonly("haps_position", [](const Scenario& s) { return to_tuple(s.haps_position); })
        .def_property_readonly("cs_position", [](const Scenario& s) { return to_tuple(s.cs_position); })
        .def_readonly("config", &Scenario::config)
        .def("to_json", [](const Scenario& s) { return scenario_to_json(s); });

    m.def("build_scenario", &build_scenario, py::arg("config"));
    m.def("scenario_from_json", &scenario_from_json, py::arg("text"));

    m.def("gamma_min", &gamma_min, py::arg("rate_bps"), py::arg("bandwidth_hz"));
    m.def(
        "min_units",
        [](double p, double h_sq, double gmin, double n0, double bandwidth, double rho) {
            return min_units(PowerW(p), GainLinear(h_sq), gmin, NoiseSpec(n0, bandwidth), rho);
        },
        py::arg("p_w"), py::arg("h_sq"), py::arg("gamma_min"), py::arg("n0_w_per_hz"), py::arg("bandwidth_hz"),
        py::arg("rho") = 1.0);

    m.def(
        "run_json",
        [](const Scenario& s, const std::vector<std::string>& methods) {
            const RunOutput out = run_single(s, methods_from(methods));
            return py::make_tuple(run_summary_json(out), run_table_csv(out));
        },
        py::arg("scenario"), py::arg("methods") = std::vector<std::string>{"algorithm1", "benchmark"});

    m.def(
        "sweep_json",
        [](const std::string& preset_name, const std::optional<ScenarioConfig>& base,
           const std::optional<std::string>& parameter, const std::optional<std::vector<double>>& grid, int seeds,
           std::uint64_t seed_start, const std::vector<std::string>& methods, int workers) {
            SweepSpec spec = preset(preset_name);
            if (base) spec.base = *base;
            if (parameter) spec.parameter = sweep_parameter_from_string(*parameter);
            if (grid) spec.grid = *grid;
            spec.num_seeds = seeds;
            spec.first_seed = seed_start;
            spec.methods = methods_from(methods);
            spec.workers = workers;
            ExperimentReport rep;
            {
                py::gil_scoped_release release;
                rep = run_sweep(spec);
            }
            return py::make_tuple(sweep_summary_json(rep), sweep_table_csv(rep), sweep_records_csv(rep));
        },
        py::arg("preset"), py::arg("base") = py::none(), py::arg("parameter") = py::none(),
        py::arg("grid") = py::none(), py::arg("seeds") = 100, py::arg("seed_start") = 1,
        py::arg("methods") = std::vector<std::string>{"algorithm1", "benchmark"}, py::arg("workers") = 0);

    m.def(
        "solve_stage2",
        [](std::vector<double> c, std::vector<double> pc, std::vector<double> nc, double up, double pb, double nb,
           double pf, double nf, double pw, double nw) {
            return solution_dict(solve(make_instance(std::move(c), std::move(pc), std::move(nc), up, pb, nb, pf, nf, pw, nw)));
        },
        STAGE2_ARGS, "Barrier solve of the continuous stage-2 problem.");
    m.def(
        "oracle_stage2",
        [](std::vector<double> c, std::vector<double> pc, std::vector<double> nc, double up, double pb, double nb,
           double pf, double nf, double pw, double nw) {
            return solution_dict(
                oracle_kkt(make_instance(std::move(c), std::move(pc), std::move(nc), up, pb, nb, pf, nf, pw, nw)));
        },
        STAGE2_ARGS, "KKT dual-bisection reference for the continuous stage-2 problem.");

    m.def(
        "validate",
        [](bool quick) {
            ValidationOptions o;
            o.quick = quick;
            py::list out;
            for (const auto& c : run_validation(o)) out.append(py::make_tuple(c.name, c.passed, c.detail, c.seconds));
            return out;
        },
        py::arg("quick") = true);
}
