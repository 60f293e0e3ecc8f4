#pragma once

#include <cstdint>
#include <string>

#include "hapsris/experiments.hpp"

namespace hapsris {

/// Fixed sweep-table header (first non-comment line of sweep_table_csv).
inline constexpr const char* kSweepCsvHeader =
    "parameter,value,method,num_seeds,failures,mean_pct_connected,ci_pct_connected,mean_within_cell,"
    "eta_count,mean_eta_per_w,ci_eta_per_w,mean_eta_normalized,ci_eta_normalized";

/// Fixed per-UE allocation header.
inline constexpr const char* kRunCsvHeader = "ue,method,h_sq,p_w,n_units,rate_bps";

/// Comment preamble + header + one row per (grid value, method).
std::string sweep_table_csv(const ExperimentReport& report);

/// Per-seed records: one line per (grid value, seed, method).
std::string sweep_records_csv(const ExperimentReport& report);

/// Structured summary. `timestamp` is written verbatim when non-empty.
std::string sweep_summary_json(const ExperimentReport& report, const std::string& timestamp = {});

/// Line chart of one column against the swept value; `metric` is
/// "pct_connected" or "eta_normalized".
std::string sweep_plot_svg(const ExperimentReport& report, const std::string& metric);

struct RunOutput {
    ScenarioConfig config;
    AssociationResult association;
    std::vector<AllocationResult> allocations;
    std::vector<RunMetrics> metrics;
};

/// Association + requested allocators + metrics for one scenario.
RunOutput run_single(const Scenario& scenario, const std::vector<Method>& methods);

std::string run_table_csv(const RunOutput& run);
std::string run_summary_json(const RunOutput& run, const std::string& timestamp = {});

}  // namespace hapsris
