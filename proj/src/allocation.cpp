#include "hapsris/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hapsris/errors.hpp"

namespace hapsris {

std::string_view to_string(Method method)
{
    return method == Method::algorithm1 ? "algorithm1" : "benchmark";
}

Method method_from_string(std::string_view text)
{
    if (text == "algorithm1") return Method::algorithm1;
    if (text == "benchmark") return Method::benchmark;
    throw ConfigError("method", "expected algorithm1|benchmark, got '" + std::string(text) + "'");
}

double gamma_min(double rate_bps, double bandwidth_hz) { return std::exp2(rate_bps / bandwidth_hz) - 1.0; }

long long min_units(PowerW p, GainLinear h_sq, double gmin, const NoiseSpec& noise, double rho)
{
    const double radicand = noise_power(noise).watts() * gmin / (p.watts() * rho * rho * h_sq.value());
    const double n = std::ceil(std::sqrt(radicand));
    if (!(n < 9.0e18)) return std::numeric_limits<long long>::max();
    return std::max(1LL, static_cast<long long>(n));
}

std::vector<Candidate> stranded_candidates(const ChannelState& channels, const AssociationResult& association)
{
    std::vector<Candidate> out;
    out.reserve(association.stranded.size());
    for (int ue : association.stranded) out.push_back({ue, channels.haps_effective_gain_sq[ue]});
    return out;
}

std::vector<Candidate> sort_by_gain(std::span<const Candidate> candidates)
{
    std::vector<Candidate> v(candidates.begin(), candidates.end());
    std::sort(v.begin(), v.end(), [](const Candidate& a, const Candidate& b) {
        if (a.h_sq.value() != b.h_sq.value()) return a.h_sq.value() > b.h_sq.value();
        return a.ue < b.ue;
    });
    return v;
}

double equal_power_share(std::size_t num_candidates, const ScenarioConfig& config)
{
    if (num_candidates == 0) return 0.0;
    return std::min(config.cs_total_power_w / static_cast<double>(num_candidates), config.per_ue_power_cap_w);
}

namespace {

NoiseSpec ue_noise(const ScenarioConfig& config) { return NoiseSpec(config.noise_psd, config.ue_bandwidth_hz); }

double beyond_cell_rate(double p, double h_sq, long long n, const ScenarioConfig& config)
{
    const double phi = config.reflection_loss * static_cast<double>(n);
    return rate(snr(PowerW(p), GainLinear(h_sq), phi, ue_noise(config)), config.ue_bandwidth_hz);
}

AllocationResult make_result(Method method, std::span<const Candidate> k2, std::vector<ServedUe> served,
                             const ScenarioConfig& config)
{
    AllocationResult r;
    r.method = method;
    for (const auto& c : k2) r.candidates.push_back(c.ue);
    std::sort(r.candidates.begin(), r.candidates.end());
    r.admitted.assign(r.candidates.size(), false);
    for (auto& s : served) {
        s.rate_bps = beyond_cell_rate(s.p_w, s.h_sq, s.n_units, config);
        r.total_power_w += s.p_w;
        r.total_units += s.n_units;
        const auto it = std::lower_bound(r.candidates.begin(), r.candidates.end(), s.ue);
        r.admitted[static_cast<std::size_t>(it - r.candidates.begin())] = true;
    }
    r.served = std::move(served);
    return r;
}

struct Admission {
    long long units = 0;
    bool fits_caps = false;
};

Admission check_admission(double p_eq, const Candidate& c, double gmin, const ScenarioConfig& config)
{
    Admission a;
    if (!(p_eq > 0.0)) return a;
    a.units = min_units(PowerW(p_eq), c.h_sq, gmin, ue_noise(config), config.reflection_loss);
    a.fits_caps = a.units <= config.per_ue_unit_cap && p_eq <= config.per_ue_power_cap_w;
    return a;
}

std::string describe(const Stage2Instance& inst)
{
    std::ostringstream os;
    os.precision(17);
    os << "stage-2 instance: m=" << inst.size() << " P_RIS=" << inst.unit_power << " P_max=" << inst.power_budget
       << " N_max=" << inst.unit_budget << " w=(" << inst.power_weight << "," << inst.unit_weight << ") c=[";
    for (std::size_t k = 0; k < inst.size(); ++k) os << (k ? "," : "") << inst.qos_constant[k];
    os << "]";
    return os.str();
}

}  // namespace

Stage1Result stage1_select(std::span<const Candidate> k2, const ScenarioConfig& config)
{
    Stage1Result out;
    out.sorted = sort_by_gain(k2);
    out.equal_power_w = equal_power_share(k2.size(), config);
    const double gmin = gamma_min(config.rate_threshold_bps, config.ue_bandwidth_hz);
    long long used_units = 0;
    double used_power = 0.0;
    for (const auto& c : out.sorted) {
        const Admission a = check_admission(out.equal_power_w, c, gmin, config);
        if (!a.fits_caps) continue;
        if (a.units > config.ris_total_units - used_units) continue;
        if (used_power + out.equal_power_w > config.cs_total_power_w * (1.0 + 1e-12)) continue;
        used_units += a.units;
        used_power += out.equal_power_w;
        out.admitted.push_back({c.ue, c.h_sq.value(), out.equal_power_w, a.units, 0.0});
    }
    return out;
}

Stage2Instance make_stage2_instance(std::span<const ServedUe> served, const ScenarioConfig& config)
{
    Stage2Instance inst;
    const double gmin = gamma_min(config.rate_threshold_bps, config.ue_bandwidth_hz);
    const double noise = noise_power(ue_noise(config)).watts();
    const double rho2 = config.reflection_loss * config.reflection_loss;
    for (const auto& s : served) {
        inst.qos_constant.push_back(gmin * noise / (rho2 * s.h_sq));
        inst.power_cap.push_back(config.per_ue_power_cap_w);
        inst.unit_cap.push_back(static_cast<double>(config.per_ue_unit_cap));
    }
    inst.unit_power = config.ris_unit_power_w;
    inst.power_budget = config.cs_total_power_w;
    inst.unit_budget = static_cast<double>(config.ris_total_units);
    inst.power_floor = config.power_floor_w;
    inst.unit_floor = 1.0;
    inst.power_weight = config.objective_mask == ObjectiveMask::units_only ? 0.0 : 1.0;
    inst.unit_weight = config.objective_mask == ObjectiveMask::power_only ? 0.0 : 1.0;
    return inst;
}

AllocationResult stage2_allocate(const Stage1Result& stage1, const ScenarioConfig& config, const BarrierOptions& options)
{
    std::vector<ServedUe> set = stage1.admitted;
    std::vector<ServedUe> seed = stage1.admitted;
    int dropped = 0;
    bool kept_seed = false;

    while (!set.empty()) {
        const Stage2Instance inst = make_stage2_instance(set, config);
        const Stage2Solution sol = solve(inst, options);
        if (sol.status == SolveStatus::max_iterations)
            throw SolverError("stage-2 solver did not converge; " + describe(inst));

        std::vector<ServedUe> best;
        double best_obj = std::numeric_limits<double>::infinity();
        if (sol.status == SolveStatus::optimal) {
            const IntegerSolution rounded = round_and_repair(sol, inst);
            if (rounded.feasible) {
                best = set;
                for (std::size_t k = 0; k < set.size(); ++k) {
                    best[k].p_w = rounded.p[k];
                    best[k].n_units = rounded.n[k];
                }
                best_obj = rounded.objective;
            }
        }
        if (!seed.empty()) {
            // The stage-1 point is feasible; tighten its power to the rate target.
            std::vector<double> p(seed.size()), n(seed.size());
            std::vector<ServedUe> tightened = seed;
            for (std::size_t k = 0; k < seed.size(); ++k) {
                n[k] = static_cast<double>(seed[k].n_units);
                p[k] = std::min(seed[k].p_w, std::max(inst.qos_constant[k] / (n[k] * n[k]), inst.power_floor));
                tightened[k].p_w = p[k];
            }
            const double seed_obj = inst.objective(p, n);
            if (seed_obj < best_obj) {
                best = std::move(tightened);
                best_obj = seed_obj;
                kept_seed = true;
            }
        }
        if (!best.empty()) {
            AllocationResult r = make_result(Method::algorithm1, stage1.sorted, std::move(best), config);
            r.kept_stage1_point = kept_seed;
            r.dropped_after_rounding = dropped;
            return r;
        }
        // No feasible integer point for this set: drop the weakest UE.
        const auto weakest = std::min_element(set.begin(), set.end(), [](const ServedUe& a, const ServedUe& b) {
            if (a.h_sq != b.h_sq) return a.h_sq < b.h_sq;
            return a.ue > b.ue;
        });
        set.erase(weakest);
        seed.clear();
        ++dropped;
    }
    AllocationResult r = make_result(Method::algorithm1, stage1.sorted, {}, config);
    r.dropped_after_rounding = dropped;
    return r;
}

AllocationResult benchmark_allocate(std::span<const Candidate> k2, const ScenarioConfig& config)
{
    const auto sorted = sort_by_gain(k2);
    const double p_eq = equal_power_share(k2.size(), config);
    const double gmin = gamma_min(config.rate_threshold_bps, config.ue_bandwidth_hz);
    std::vector<ServedUe> served;
    long long used_units = 0;
    for (const auto& c : sorted) {
        const Admission a = check_admission(p_eq, c, gmin, config);
        if (!a.fits_caps || a.units > config.ris_total_units - used_units) break;
        used_units += a.units;
        served.push_back({c.ue, c.h_sq.value(), p_eq, a.units, 0.0});
    }
    return make_result(Method::benchmark, k2, std::move(served), config);
}

AllocationResult run_algorithm1(const Scenario& scenario, const ChannelState& channels,
                                const AssociationResult& association, const BarrierOptions& options)
{
    const auto k2 = stranded_candidates(channels, association);
    const Stage1Result s1 = stage1_select(k2, scenario.config);
    return stage2_allocate(s1, scenario.config, options);
}

void verify_allocation(const AllocationResult& r, const ScenarioConfig& config)
{
    auto fail = [](const std::string& what) { throw InfeasibleError("allocation check: " + what); };
    constexpr double rel = 1e-9;
    double sum_p = 0.0;
    long long sum_n = 0;
    std::size_t n_admitted = 0;
    for (const auto& s : r.served) {
        if (!std::binary_search(r.candidates.begin(), r.candidates.end(), s.ue))
            fail("UE " + std::to_string(s.ue) + " is not a beyond-cell candidate");
        const double achieved = beyond_cell_rate(s.p_w, s.h_sq, s.n_units, config);
        if (achieved < config.rate_threshold_bps * (1.0 - rel))
            fail("UE " + std::to_string(s.ue) + " rate " + std::to_string(achieved) + " below threshold");
        if (s.p_w > config.per_ue_power_cap_w * (1.0 + rel)) fail("UE " + std::to_string(s.ue) + " over power cap");
        if (s.n_units < 1 || s.n_units > config.per_ue_unit_cap)
            fail("UE " + std::to_string(s.ue) + " unit count outside [1, cap]");
        sum_p += s.p_w;
        sum_n += s.n_units;
    }
    if (sum_p > config.cs_total_power_w * (1.0 + rel)) fail("CS power budget exceeded");
    if (sum_n > config.ris_total_units) fail("RIS unit budget exceeded");
    for (bool u : r.admitted) n_admitted += u ? 1 : 0;
    if (n_admitted != r.served.size()) fail("admission flags disagree with the served set");
}

}  // namespace hapsris
