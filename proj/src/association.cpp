#include "hapsris/association.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hapsris/errors.hpp"

namespace hapsris {

int bs_capacity(const ScenarioConfig& config)
{
    return static_cast<int>(std::floor(config.bs_bandwidth_hz / config.ue_bandwidth_hz + 1e-9));
}

double direct_rate(const ChannelState& channels, const ScenarioConfig& config, int ue, int bs)
{
    const PowerW per_subcarrier(config.bs_tx_power_w / bs_capacity(config));
    const NoiseSpec noise(config.noise_psd, config.ue_bandwidth_hz);
    const double gamma = snr(per_subcarrier, channels.terrestrial(ue, bs), 1.0, noise);
    return rate(gamma, config.ue_bandwidth_hz);
}

AssociationResult associate(const Scenario& scenario, const ChannelState& channels)
{
    const auto& cfg = scenario.config;
    const int k = channels.num_ues;
    const int l = channels.num_bs;

    std::vector<double> rates(static_cast<std::size_t>(k) * l);
    std::vector<double> best(k, 0.0);
    for (int u = 0; u < k; ++u)
        for (int b = 0; b < l; ++b) {
            rates[u * l + b] = direct_rate(channels, cfg, u, b);
            best[u] = std::max(best[u], rates[u * l + b]);
        }

    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return best[a] > best[b]; });

    AssociationResult res;
    res.bs_capacity = bs_capacity(cfg);
    res.serving_bs.assign(k, -1);
    res.per_ue_rate.assign(k, 0.0);
    res.bs_load.assign(l, 0);
    for (int u : order) {
        int pick = -1;
        for (int b = 0; b < l; ++b) {
            if (res.bs_load[b] >= res.bs_capacity) continue;
            if (pick < 0 || rates[u * l + b] > rates[u * l + pick]) pick = b;
        }
        if (pick >= 0 && rates[u * l + pick] >= cfg.rate_threshold_bps) {
            res.serving_bs[u] = pick;
            res.per_ue_rate[u] = rates[u * l + pick];
            ++res.bs_load[pick];
        }
    }
    for (int u = 0; u < k; ++u)
        if (res.serving_bs[u] < 0) res.stranded.push_back(u);
    return res;
}

void AssociationResult::check_invariants(const ChannelState& channels, const ScenarioConfig& config) const
{
    const int k = channels.num_ues;
    const int l = channels.num_bs;
    if (static_cast<int>(serving_bs.size()) != k) throw InfeasibleError("association: wrong UE count");
    std::vector<int> load(l, 0);
    std::size_t n_stranded = 0;
    for (int u = 0; u < k; ++u) {
        const int b = serving_bs[u];
        if (b < 0) {
            ++n_stranded;
            continue;
        }
        ++load[b];
        if (direct_rate(channels, config, u, b) < config.rate_threshold_bps)
            throw InfeasibleError("association: UE " + std::to_string(u) + " below the rate threshold");
    }
    if (n_stranded != stranded.size()) throw InfeasibleError("association: stranded list out of sync");
    for (int b = 0; b < l; ++b)
        if (load[b] > bs_capacity || load[b] != bs_load[b])
            throw InfeasibleError("association: BS " + std::to_string(b) + " load inconsistent or over capacity");
    for (int u : stranded)
        for (int b = 0; b < l; ++b)
            if (load[b] < bs_capacity && direct_rate(channels, config, u, b) >= config.rate_threshold_bps)
                throw InfeasibleError("association: stranded UE " + std::to_string(u) + " fits BS " +
                                      std::to_string(b));
}

}  // namespace hapsris
