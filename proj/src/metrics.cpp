#include "hapsris/metrics.hpp"

#include "hapsris/units.hpp"

namespace hapsris {

RunMetrics resource_efficiency(const AllocationResult& alloc, const AssociationResult& assoc,
                               const ScenarioConfig& config)
{
    RunMetrics m;
    m.num_ues = static_cast<int>(assoc.serving_bs.size());
    m.num_within_cell = assoc.num_within_cell();
    m.num_beyond_cell = static_cast<int>(alloc.served.size());
    m.pct_connected = m.num_ues > 0 ? static_cast<double>(m.num_within_cell + m.num_beyond_cell) / m.num_ues : 0.0;
    m.total_cs_power_w = alloc.total_power_w;
    m.total_units = alloc.total_units;
    m.total_ris_power_w = config.ris_unit_power_w * static_cast<double>(alloc.total_units);
    if (m.num_beyond_cell == 0) return m;

    const double avg = (m.total_cs_power_w + m.total_ris_power_w) / m.num_beyond_cell;
    m.avg_power_per_served_w = avg;
    if (avg > 0.0) {
        m.eta = m.pct_connected / avg;
        const double avg_dbm = watts_to_dbm(PowerW(avg)).value;
        if (avg_dbm > 0.0) m.eta_dbm = m.pct_connected / avg_dbm;
    }
    return m;
}

}  // namespace hapsris
