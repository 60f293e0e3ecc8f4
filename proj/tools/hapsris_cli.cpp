// hapsris: scenario generation, single runs, sweeps, method comparison and
// self-validation for HAPS-RIS beyond-cell connectivity.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hapsris/errors.hpp"
#include "hapsris/report.hpp"
#include "hapsris/scenario.hpp"
#include "hapsris/validation.hpp"

namespace fs = std::filesystem;
using namespace hapsris;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kInfeasible = 3, kInternal = 4, kValidationFailed = 5 };

struct Common {
    std::string config = "paper_defaults";
    std::vector<std::string> overrides;
    std::string out = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--config", c.config, "Config file path, or paper_defaults");
    cmd->add_option("--set", c.overrides, "Override a config key (key=value), repeatable");
    cmd->add_option("--out", c.out, "Output directory");
}

ScenarioConfig resolve_config(const Common& c, const ScenarioConfig* preset_base = nullptr)
{
    // A preset supplies its own base unless an explicit config file is given.
    ScenarioConfig cfg = (preset_base && c.config == "paper_defaults") ? *preset_base : load_config(c.config);
    for (const auto& kv : c.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError(kv, "override must be key=value");
        apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.seed_given) cfg.rng_seed = c.seed;
    cfg.validate();
    return cfg;
}

void write_file(const fs::path& path, const std::string& body)
{
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << body;
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("scenario", "cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::vector<Method> parse_methods(const std::string& text)
{
    if (text == "both") return {Method::algorithm1, Method::benchmark};
    return {method_from_string(text)};
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("grid", "not a number: '" + item + "'");
        }
    }
    if (grid.empty()) throw ConfigError("grid", "empty grid");
    return grid;
}

void write_sweep(const ExperimentReport& report, const fs::path& dir, bool plots)
{
    write_file(dir / "sweep.csv", sweep_table_csv(report));
    write_file(dir / "records.csv", sweep_records_csv(report));
    write_file(dir / "summary.json", sweep_summary_json(report));
    if (plots) {
        write_file(dir / "pct_connected.svg", sweep_plot_svg(report, "pct_connected"));
        write_file(dir / "eta_normalized.svg", sweep_plot_svg(report, "eta_normalized"));
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"HAPS-RIS beyond-cell connectivity simulator"};
    app.set_version_flag("--version", std::string(library_version()));
    app.require_subcommand(1);

    Common gen_c, run_c, sweep_c, cmp_c;

    auto* gen = app.add_subcommand("generate", "Write a scenario replay file and the resolved config");
    add_common(gen, gen_c);
    gen->add_option("--seed", gen_c.seed, "Scenario seed")->each([&](const std::string&) { gen_c.seed_given = true; });

    auto* run = app.add_subcommand("run", "Associate, allocate and report one scenario");
    add_common(run, run_c);
    run->add_option("--seed", run_c.seed, "Scenario seed")->each([&](const std::string&) { run_c.seed_given = true; });
    std::string scenario_path, run_method = "both", run_mask;
    run->add_option("--scenario", scenario_path, "Scenario replay file (overrides --config)");
    run->add_option("--method", run_method, "algorithm1, benchmark or both");
    run->add_option("--objective-mask", run_mask, "full, units-only or power-only");

    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter over seeds and methods");
    add_common(sweep, sweep_c);
    std::string preset_name, param_name, grid_text, sweep_method = "both";
    int num_seeds = 0;
    std::uint64_t seed_start = 0;
    bool plots = false;
    int workers = 0;
    sweep->add_option("--preset", preset_name, "fig3, fig4 or fig5");
    sweep->add_option("--param", param_name, "rate_threshold_bps, ris_total_units or cs_total_power_w");
    sweep->add_option("--grid", grid_text, "Comma-separated values (watts for power)");
    sweep->add_option("--seeds", num_seeds, "Number of seeds")->check(CLI::PositiveNumber);
    sweep->add_option("--seed-start", seed_start, "First seed");
    sweep->add_option("--method", sweep_method, "algorithm1, benchmark or both");
    sweep->add_option("--workers", workers, "Worker threads (default: HAPSRIS_WORKERS or detected)");
    sweep->add_flag("--plots", plots, "Also write SVG plots");

    auto* cmp = app.add_subcommand("compare", "Paired per-seed comparison of algorithm1 against benchmark");
    add_common(cmp, cmp_c);
    int cmp_seeds = 10;
    std::uint64_t cmp_start = 1;
    cmp->add_option("--seeds", cmp_seeds, "Number of seeds")->check(CLI::PositiveNumber);
    cmp->add_option("--seed-start", cmp_start, "First seed");

    auto* val = app.add_subcommand("validate", "Run the built-in oracle suites");
    ValidationOptions vopt;
    double injected_tolerance = 0.0;
    val->add_flag("--quick", vopt.quick, "Reduced draw counts");
    val->add_option("--inject-solver-tolerance", injected_tolerance,
                    "Override the barrier gap tolerance (negative control)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    try {
        if (*gen) {
            const ScenarioConfig cfg = resolve_config(gen_c);
            const Scenario sc = build_scenario(cfg);
            const fs::path dir(gen_c.out);
            write_file(dir / "scenario.json", scenario_to_json(sc));
            write_file(dir / "config.cfg", "# config_hash=" + config_hash(cfg) + " seed=" + std::to_string(cfg.rng_seed) +
                                               "\n" + serialize_config(cfg));
            std::cout << "wrote " << (dir / "scenario.json").string() << " (config_hash=" << config_hash(cfg)
                      << ", seed=" << cfg.rng_seed << ")\n";
        } else if (*run) {
            Scenario sc;
            if (!scenario_path.empty()) {
                sc = scenario_from_json(read_file(scenario_path));
            } else {
                sc = build_scenario(resolve_config(run_c));
            }
            if (!run_mask.empty()) sc.config.objective_mask = objective_mask_from_string(run_mask);
            const RunOutput out = run_single(sc, parse_methods(run_method));
            const fs::path dir(run_c.out);
            write_file(dir / "allocation.csv", run_table_csv(out));
            write_file(dir / "summary.json", run_summary_json(out));
            for (std::size_t i = 0; i < out.allocations.size(); ++i) {
                const RunMetrics& m = out.metrics[i];
                std::cout << to_string(out.allocations[i].method) << ": within-cell " << m.num_within_cell
                          << ", beyond-cell " << m.num_beyond_cell << ", connected " << m.pct_connected * 100.0
                          << "%\n";
            }
        } else if (*sweep) {
            SweepSpec spec;
            if (!preset_name.empty()) spec = preset(preset_name);
            else if (param_name.empty() || grid_text.empty())
                throw ConfigError("preset", "give --preset or both --param and --grid");
            spec.base = resolve_config(sweep_c, preset_name.empty() ? nullptr : &spec.base);
            if (!param_name.empty()) spec.parameter = sweep_parameter_from_string(param_name);
            if (!grid_text.empty()) spec.grid = parse_grid(grid_text);
            if (num_seeds > 0) spec.num_seeds = num_seeds;
            if (seed_start > 0) spec.first_seed = seed_start;
            spec.methods = parse_methods(sweep_method);
            spec.workers = workers;
            spec.validate();
            const ExperimentReport report = run_sweep(spec);
            write_sweep(report, fs::path(sweep_c.out), plots);
            int ok_rows = 0;
            for (const auto& r : report.rows) {
                if (r.num_seeds > 0) ++ok_rows;
                std::cout << to_string(spec.parameter) << "=" << r.value << " " << to_string(r.method)
                          << ": pct_connected " << r.mean_pct_connected * 100.0 << "% (+/- "
                          << r.ci_pct_connected * 100.0 << "), failures " << r.failures << "\n";
            }
            if (ok_rows == 0) {
                std::cerr << "error: every sweep row failed\n";
                return kInfeasible;
            }
        } else if (*cmp) {
            const ScenarioConfig base = resolve_config(cmp_c);
            std::ostringstream csv;
            csv << "# hapsris compare config_hash=" << config_hash(base) << " seeds=" << cmp_start << ".."
                << cmp_start + static_cast<std::uint64_t>(cmp_seeds) - 1 << " version=" << library_version() << "\n";
            csv << "seed,pct_algorithm1,pct_benchmark,diff_pct,eta_algorithm1,eta_benchmark\n";
            int worse = 0;
            for (int i = 0; i < cmp_seeds; ++i) {
                ScenarioConfig cfg = base;
                cfg.rng_seed = cmp_start + static_cast<std::uint64_t>(i);
                const RunOutput out = run_single(build_scenario(cfg), {Method::algorithm1, Method::benchmark});
                const RunMetrics& a = out.metrics[0];
                const RunMetrics& b = out.metrics[1];
                const double diff = a.pct_connected - b.pct_connected;
                if (diff < 0.0) ++worse;
                char line[256];
                std::snprintf(line, sizeof line, "%llu,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                              static_cast<unsigned long long>(cfg.rng_seed), a.pct_connected, b.pct_connected, diff,
                              a.eta.value_or(0.0), b.eta.value_or(0.0));
                csv << line;
            }
            write_file(fs::path(cmp_c.out) / "compare.csv", csv.str());
            std::cout << cmp_seeds << " seeds compared, algorithm1 behind benchmark on " << worse << "\n";
        } else if (*val) {
            if (injected_tolerance > 0.0) {
                vopt.solver.gap_tolerance = injected_tolerance;
                vopt.solver.newton_tolerance = injected_tolerance;
            }
            bool all = true;
            for (const auto& c : run_validation(vopt)) {
                std::printf("%s  %-32s %7.2fs  %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.seconds,
                            c.detail.c_str());
                all = all && c.passed;
            }
            return all ? kOk : kValidationFailed;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kOk;
}
