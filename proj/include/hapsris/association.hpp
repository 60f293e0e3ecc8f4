#pragma once

#include <vector>

#include "hapsris/channel.hpp"

namespace hapsris {

struct AssociationResult {
    /// BS index per UE, -1 for stranded UEs.
    std::vector<int> serving_bs;
    /// Stranded UEs (the beyond-cell candidate set), ascending id.
    std::vector<int> stranded;
    /// Direct-link rate of each UE at its serving BS, 0 for stranded UEs.
    std::vector<double> per_ue_rate;
    /// Number of UEs attached to each BS.
    std::vector<int> bs_load;
    int bs_capacity = 0;

    int num_within_cell() const { return static_cast<int>(serving_bs.size() - stranded.size()); }

    /// Throws InfeasibleError if a capacity, rate or stability invariant fails.
    void check_invariants(const ChannelState& channels, const ScenarioConfig& config) const;
};

/// Subcarriers per BS: floor(B_BS / B_UE).
int bs_capacity(const ScenarioConfig& config);

/// Direct-link rate of `ue` at `bs` with the BS power split evenly over its subcarriers.
double direct_rate(const ChannelState& channels, const ScenarioConfig& config, int ue, int bs);

/// Best-rate-first greedy association. UEs are visited in descending order of
/// their best BS rate; each takes its highest-rate BS that still has a free
/// subcarrier, if that rate meets the threshold. Ties go to the lower BS index,
/// then the lower UE index.
AssociationResult associate(const Scenario& scenario, const ChannelState& channels);

}  // namespace hapsris
