#pragma once

#include <optional>

#include "hapsris/allocation.hpp"

namespace hapsris {

struct RunMetrics {
    int num_ues = 0;
    int num_within_cell = 0;
    int num_beyond_cell = 0;  ///< |U|
    /// (K1 + sum u_k) / K.
    double pct_connected = 0.0;
    double total_cs_power_w = 0.0;
    double total_ris_power_w = 0.0;
    long long total_units = 0;
    /// (sum p_k u_k + P_RIS sum n_k u_k) / |U|; absent when nobody is served beyond-cell.
    std::optional<double> avg_power_per_served_w;
    /// pct_connected / avg power, 1/W.
    std::optional<double> eta;
    /// pct_connected / avg power in dBm; absent when that average is <= 0 dBm.
    std::optional<double> eta_dbm;
};

RunMetrics resource_efficiency(const AllocationResult& alloc, const AssociationResult& assoc,
                               const ScenarioConfig& config);

}  // namespace hapsris
