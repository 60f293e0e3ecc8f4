#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hapsris/metrics.hpp"

namespace hapsris {

enum class SweepParameter { rate_threshold, ris_total_units, cs_total_power };

std::string_view to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(std::string_view text);

/// Writes `value` into the config field a sweep parameter controls (watts for power).
void apply_sweep_value(ScenarioConfig& config, SweepParameter p, double value);

struct SweepSpec {
    std::string name = "custom";
    SweepParameter parameter = SweepParameter::rate_threshold;
    std::vector<double> grid;
    std::vector<Method> methods{Method::algorithm1, Method::benchmark};
    int num_seeds = 100;
    std::uint64_t first_seed = 1;
    ScenarioConfig base;
    /// 0 picks HAPSRIS_WORKERS or the hardware concurrency.
    int workers = 0;

    void validate() const;
    std::vector<std::uint64_t> seeds() const;
};

/// Standard experiment set-ups: "fig3" (rate threshold), "fig4" (RIS units,
/// units-only objective), "fig5" (CS power, power-only objective).
SweepSpec preset(std::string_view name);

/// One run at one grid point, seed and method.
struct SeedRecord {
    double value = 0.0;
    Method method = Method::algorithm1;
    std::uint64_t seed = 0;
    RunMetrics metrics;
    bool ok = false;
    std::string error;
};

struct ReportRow {
    double value = 0.0;
    Method method = Method::algorithm1;
    int num_seeds = 0;  ///< successful runs
    int failures = 0;
    double mean_pct_connected = 0.0;
    double ci_pct_connected = 0.0;
    double mean_within_cell = 0.0;
    int eta_count = 0;  ///< runs with eta defined
    double mean_eta = 0.0;
    double ci_eta = 0.0;
    double mean_eta_normalized = 0.0;
    double ci_eta_normalized = 0.0;
    std::string failure_reason;
};

struct ExperimentReport {
    SweepSpec spec;
    std::string config_hash;
    std::string version;
    std::vector<ReportRow> rows;        ///< grid-major, methods in spec order
    std::vector<SeedRecord> records;    ///< grid-major, then seed, then method

    const ReportRow& row(std::size_t grid_index, Method method) const;
};

/// Builds and evaluates every (grid point, seed, method) run. Seeds are shared
/// across grid points and methods. Failing runs are recorded, not fatal.
ExperimentReport run_sweep(const SweepSpec& spec);

/// Evaluates one seed for every requested method on a shared scenario.
std::vector<SeedRecord> run_seed(const ScenarioConfig& config, const std::vector<Method>& methods, double value);

/// 1.96 sd / sqrt(n); 0 for n < 2.
double ci_half_width(const std::vector<double>& samples);

const char* library_version();

/// Worker count from HAPSRIS_WORKERS, else hardware concurrency.
int default_workers();

}  // namespace hapsris
