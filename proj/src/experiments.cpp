#include "hapsris/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <thread>

#include "hapsris/errors.hpp"

#ifndef HAPSRIS_VERSION
#define HAPSRIS_VERSION "0.0.0"
#endif

namespace hapsris {

const char* library_version() { return HAPSRIS_VERSION; }

std::string_view to_string(SweepParameter p)
{
    switch (p) {
    case SweepParameter::rate_threshold: return "rate_threshold_bps";
    case SweepParameter::ris_total_units: return "ris_total_units";
    case SweepParameter::cs_total_power: return "cs_total_power_w";
    }
    return "";
}

SweepParameter sweep_parameter_from_string(std::string_view text)
{
    if (text == "rate_threshold_bps" || text == "r_min") return SweepParameter::rate_threshold;
    if (text == "ris_total_units" || text == "n_max") return SweepParameter::ris_total_units;
    if (text == "cs_total_power_w" || text == "p_max") return SweepParameter::cs_total_power;
    throw ConfigError("parameter", "expected rate_threshold_bps|ris_total_units|cs_total_power_w, got '" +
                                       std::string(text) + "'");
}

void apply_sweep_value(ScenarioConfig& config, SweepParameter p, double value)
{
    switch (p) {
    case SweepParameter::rate_threshold: config.rate_threshold_bps = value; break;
    case SweepParameter::ris_total_units: config.ris_total_units = std::llround(value); break;
    case SweepParameter::cs_total_power: config.cs_total_power_w = value; break;
    }
}

void SweepSpec::validate() const
{
    if (grid.empty()) throw ConfigError("grid", "must not be empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw ConfigError("grid", "must be strictly increasing");
    if (num_seeds < 1) throw ConfigError("num_seeds", "must be >= 1");
    if (methods.empty()) throw ConfigError("methods", "must not be empty");
    base.validate();
}

std::vector<std::uint64_t> SweepSpec::seeds() const
{
    std::vector<std::uint64_t> s(static_cast<std::size_t>(num_seeds));
    std::iota(s.begin(), s.end(), first_seed);
    return s;
}

SweepSpec preset(std::string_view name)
{
    SweepSpec s;
    s.name = std::string(name);
    if (name == "fig3") {
        s.parameter = SweepParameter::rate_threshold;
        s.grid = {1e6, 2e6, 4e6, 8e6};
        s.base.ris_total_units = 220'000;
        s.base.objective_mask = ObjectiveMask::full;
    } else if (name == "fig4") {
        s.parameter = SweepParameter::ris_total_units;
        s.grid = {10'000, 40'000, 70'000, 100'000, 130'000, 160'000, 190'000, 220'000};
        s.base.objective_mask = ObjectiveMask::units_only;
    } else if (name == "fig5") {
        s.parameter = SweepParameter::cs_total_power;
        for (int dbm = 30; dbm <= 35; ++dbm) s.grid.push_back(std::pow(10.0, (dbm - 30) / 10.0));
        s.base.ris_total_units = 150'000;
        s.base.objective_mask = ObjectiveMask::power_only;
    } else {
        throw ConfigError("preset", "expected fig3|fig4|fig5, got '" + std::string(name) + "'");
    }
    return s;
}

const ReportRow& ExperimentReport::row(std::size_t grid_index, Method method) const
{
    const auto nm = spec.methods.size();
    for (std::size_t j = 0; j < nm; ++j)
        if (spec.methods[j] == method) return rows.at(grid_index * nm + j);
    throw std::out_of_range("ExperimentReport::row: method not in sweep");
}

double ci_half_width(const std::vector<double>& x)
{
    const auto n = x.size();
    if (n < 2) return 0.0;
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return 1.96 * std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

int default_workers()
{
    if (const char* env = std::getenv("HAPSRIS_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SeedRecord> run_seed(const ScenarioConfig& config, const std::vector<Method>& methods, double value)
{
    std::vector<SeedRecord> out;
    for (Method m : methods) out.push_back({value, m, config.rng_seed, {}, false, {}});
    try {
        const Scenario scenario = build_scenario(config);
        const ChannelState channels = effective_gain(scenario);
        const AssociationResult assoc = associate(scenario, channels);
        const auto k2 = stranded_candidates(channels, assoc);
        for (auto& rec : out) {
            try {
                const AllocationResult alloc = rec.method == Method::algorithm1
                                                   ? run_algorithm1(scenario, channels, assoc)
                                                   : benchmark_allocate(k2, config);
                verify_allocation(alloc, config);
                rec.metrics = resource_efficiency(alloc, assoc, config);
                rec.ok = true;
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
        }
    } catch (const std::exception& e) {
        for (auto& rec : out) rec.error = e.what();
    }
    return out;
}

ExperimentReport run_sweep(const SweepSpec& spec)
{
    spec.validate();
    ExperimentReport rep;
    rep.spec = spec;
    rep.config_hash = config_hash(spec.base);
    rep.version = library_version();

    const auto seeds = spec.seeds();
    const std::size_t ng = spec.grid.size(), ns = seeds.size(), nm = spec.methods.size();
    std::vector<std::vector<SeedRecord>> slots(ng * ns);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < slots.size(); i = next++) {
            const std::size_t g = i / ns, s = i % ns;
            ScenarioConfig cfg = spec.base;
            apply_sweep_value(cfg, spec.parameter, spec.grid[g]);
            cfg.rng_seed = seeds[s];
            slots[i] = run_seed(cfg, spec.methods, spec.grid[g]);
        }
    };
    const int nw = std::clamp(spec.workers > 0 ? spec.workers : default_workers(), 1, 256);
    if (nw == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    }

    rep.records.reserve(ng * ns * nm);
    for (auto& slot : slots)
        for (auto& r : slot) rep.records.push_back(std::move(r));

    for (std::size_t g = 0; g < ng; ++g) {
        for (std::size_t j = 0; j < nm; ++j) {
            ReportRow row;
            row.value = spec.grid[g];
            row.method = spec.methods[j];
            std::vector<double> pct, eta;
            double k1 = 0.0;
            for (std::size_t s = 0; s < ns; ++s) {
                const auto& r = rep.records[(g * ns + s) * nm + j];
                if (!r.ok) {
                    ++row.failures;
                    if (row.failure_reason.empty()) row.failure_reason = r.error;
                    continue;
                }
                pct.push_back(r.metrics.pct_connected);
                k1 += static_cast<double>(r.metrics.num_within_cell) / r.metrics.num_ues;
                if (r.metrics.eta) eta.push_back(*r.metrics.eta);
            }
            row.num_seeds = static_cast<int>(pct.size());
            if (!pct.empty()) {
                row.mean_pct_connected = std::accumulate(pct.begin(), pct.end(), 0.0) / pct.size();
                row.ci_pct_connected = ci_half_width(pct);
                row.mean_within_cell = k1 / pct.size();
            }
            row.eta_count = static_cast<int>(eta.size());
            if (!eta.empty()) {
                row.mean_eta = std::accumulate(eta.begin(), eta.end(), 0.0) / eta.size();
                row.ci_eta = ci_half_width(eta);
            }
            rep.rows.push_back(std::move(row));
        }
    }

    // One normalizer for the whole sweep so methods stay comparable.
    double max_eta = 0.0;
    for (const auto& r : rep.rows) max_eta = std::max(max_eta, r.mean_eta);
    if (max_eta > 0.0)
        for (auto& r : rep.rows) {
            r.mean_eta_normalized = r.mean_eta / max_eta;
            r.ci_eta_normalized = r.ci_eta / max_eta;
        }
    return rep;
}

}  // namespace hapsris
