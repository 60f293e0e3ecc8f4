#include "hapsris/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hapsris/allocation.hpp"
#include "hapsris/channel.hpp"

namespace hapsris {

Stage2Instance random_stage2_instance(std::mt19937_64& rng, std::size_t m, BudgetRegime regime)
{
    if (m == 0) throw std::invalid_argument("random_stage2_instance: empty instance");
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) { return std::exp(std::log(lo) + u01(rng) * std::log(hi / lo)); };

    for (int attempt = 0; attempt < 1000; ++attempt) {
        Stage2Instance inst;
        inst.unit_power = 7.8e-3;
        for (std::size_t k = 0; k < m; ++k) {
            inst.qos_constant.push_back(log_uniform(1e2, 1e6));
            inst.power_cap.push_back(log_uniform(0.5, 5.0));
            inst.unit_cap.push_back(5e4);
        }
        // Unconstrained optimum and the extremes of each budget.
        double sum_p = 0.0, sum_n = 0.0, cap_p = 0.0, min_n = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double n = std::clamp(std::cbrt(2.0 * inst.qos_constant[k] / inst.unit_power), inst.unit_lower(k),
                                        inst.unit_upper(k));
            sum_p += inst.qos_constant[k] / (n * n);
            sum_n += n;
            cap_p += inst.power_cap[k];
            min_n += inst.unit_lower(k);
        }
        const double f1 = 0.3 + 0.6 * u01(rng);
        switch (regime) {
        case BudgetRegime::slack:
            inst.power_budget = sum_p * (1.5 + u01(rng));
            inst.unit_budget = sum_n * (1.5 + u01(rng));
            break;
        case BudgetRegime::power_binding:
            inst.power_budget = sum_p * f1;
            inst.unit_budget = 10.0 * sum_n / f1;
            break;
        case BudgetRegime::units_binding:
            inst.unit_budget = std::max(min_n * 1.05, sum_n * f1);
            inst.power_budget = 2.0 * cap_p;
            break;
        }
        if (oracle_kkt(inst).status == SolveStatus::optimal) return inst;
    }
    throw std::runtime_error("random_stage2_instance: no feasible instance drawn");
}

namespace {

std::string sci(double x)
{
    std::ostringstream o;
    o.precision(3);
    o << x;
    return o.str();
}

template <class F>
ValidationCheck timed(std::string name, F&& body)
{
    ValidationCheck c;
    c.name = std::move(name);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        c.detail = body(c.passed);
    } catch (const std::exception& e) {
        c.passed = false;
        c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

double rel_diff(double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300}); }

}  // namespace

std::vector<ValidationCheck> run_validation(const ValidationOptions& opt)
{
    std::vector<ValidationCheck> out;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    out.push_back(timed("units round trip", [&](bool& ok) {
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const double w = std::pow(10.0, -21.0 + 24.0 * u01(rng));
            worst = std::max(worst, rel_diff(dbm_to_watts(watts_to_dbm(PowerW(w))).watts(), w));
        }
        ok = worst <= 1e-12;
        return "max relative error " + sci(worst);
    }));

    out.push_back(timed("unit sizing vs linear scan", [&](bool& ok) {
        const int draws = opt.quick ? 200 : 1000;
        int mismatches = 0;
        for (int i = 0; i < draws; ++i) {
            const double bw = std::pow(10.0, 5.0 + 2.0 * u01(rng));
            const NoiseSpec noise(std::pow(10.0, -21.0 + 2.0 * u01(rng)), bw);
            const double r_min = bw * (0.1 + 4.0 * u01(rng));
            const double g = gamma_min(r_min, bw);
            const double rho = 0.5 + 0.5 * u01(rng);
            // Radicand spans 1e0..1e10.
            const double target = std::pow(10.0, 10.0 * u01(rng));
            const double p = 0.01 + u01(rng);
            const double h = noise_power(noise).watts() * g / (p * rho * rho * target);
            const long long closed = min_units(PowerW(p), GainLinear(h), g, noise, rho);
            long long scan = 1;
            while (rate(snr(PowerW(p), GainLinear(h), rho * static_cast<double>(scan), noise), bw) < r_min) ++scan;
            if (scan != closed) ++mismatches;
        }
        ok = mismatches == 0;
        return std::to_string(mismatches) + " mismatches in " + std::to_string(draws) + " draws";
    }));

    out.push_back(timed("barrier solver vs KKT oracle", [&](bool& ok) {
        const int per_size = opt.quick ? 10 : 100;
        const BudgetRegime regimes[] = {BudgetRegime::slack, BudgetRegime::power_binding, BudgetRegime::units_binding};
        double worst_obj = 0.0, worst_var = 0.0;
        int failures = 0, count = 0;
        for (std::size_t m : {1u, 5u, 20u, 50u}) {
            for (int i = 0; i < per_size; ++i) {
                const Stage2Instance inst = random_stage2_instance(rng, m, regimes[i % 3]);
                const Stage2Solution a = solve(inst, opt.solver);
                const Stage2Solution b = oracle_kkt(inst);
                ++count;
                if (a.status != SolveStatus::optimal || b.status != SolveStatus::optimal) {
                    ++failures;
                    continue;
                }
                worst_obj = std::max(worst_obj, rel_diff(a.objective, b.objective));
                for (std::size_t k = 0; k < m; ++k)
                    worst_var = std::max({worst_var, rel_diff(a.p[k], b.p[k]), rel_diff(a.n[k], b.n[k])});
            }
        }
        ok = failures == 0 && worst_obj <= 1e-6 && worst_var <= 1e-4;
        std::ostringstream os;
        os << count << " instances, " << failures << " non-optimal, max objective diff " << worst_obj
           << ", max variable diff " << worst_var;
        return os.str();
    }));

    out.push_back(timed("reflection gain bounds", [&](bool& ok) {
        ok = true;
        const int trials = opt.quick ? 50 : 200;
        for (int t = 0; t < trials && ok; ++t) {
            RisPhaseConfig cfg;
            const int n = 1 + static_cast<int>(u01(rng) * 500);
            cfg.reflection_loss = 0.2 + 0.8 * u01(rng);
            for (int i = 0; i < n; ++i) {
                cfg.unit_phases.push_back(wrap_phase(2.0 * std::numbers::pi * u01(rng)));
                cfg.incident_phases.push_back(wrap_phase(2.0 * std::numbers::pi * u01(rng)));
                cfg.departure_phases.push_back(wrap_phase(2.0 * std::numbers::pi * u01(rng)));
            }
            const double bound = cfg.reflection_loss * n;
            if (std::abs(reflection_gain(cfg)) > bound * (1.0 + 1e-12)) ok = false;
            for (int i = 0; i < n; ++i) cfg.unit_phases[i] = aligned_phase(cfg.incident_phases[i], cfg.departure_phases[i]);
            if (rel_diff(std::abs(reflection_gain(cfg)), bound) > 1e-9) ok = false;
        }
        return ok ? std::string("bound and alignment hold") : std::string("bound or alignment violated");
    }));

    out.push_back(timed("scenario invariants", [&](bool& ok) {
        const int seeds = opt.quick ? 20 : 200;
        ScenarioConfig cfg = paper_defaults();
        double worst = 0.0;
        for (int s = 1; s <= seeds; ++s) {
            cfg.rng_seed = static_cast<std::uint64_t>(s);
            const Scenario sc = build_scenario(cfg);
            worst = std::max(worst, effective_gain(sc).recomposition_error());
        }
        ok = worst <= 1e-12;
        return std::to_string(seeds) + " seeds, max gain recomposition error " + sci(worst);
    }));

    return out;
}

}  // namespace hapsris
