#include <doctest.h>

#include <cmath>
#include <random>

#include "hapsris/allocation.hpp"
#include "hapsris/errors.hpp"
#include "hapsris/metrics.hpp"
#include "hapsris/scenario.hpp"
#include "oracles.hpp"

using namespace hapsris;

namespace {

const NoiseSpec kNoise(3.981071705534972e-21, 2e6);

struct Pipeline {
    Scenario scenario;
    ChannelState channels;
    AssociationResult association;
    std::vector<Candidate> k2;
};

Pipeline pipeline(const ScenarioConfig& c)
{
    Pipeline p;
    p.scenario = build_scenario(c);
    p.channels = effective_gain(p.scenario);
    p.association = associate(p.scenario, p.channels);
    p.k2 = stranded_candidates(p.channels, p.association);
    return p;
}

/// Gain at which a UE needs exactly `units` RIS units at power `p`.
double gain_for_units(double units, double p, const ScenarioConfig& c)
{
    return noise_power(NoiseSpec(c.noise_psd, c.ue_bandwidth_hz)).watts() *
           gamma_min(c.rate_threshold_bps, c.ue_bandwidth_hz) / (p * units * units);
}

}  // namespace

TEST_CASE("minimum SNR from the rate target")
{
    CHECK(gamma_min(2e6, 2e6) == 1.0);
    CHECK(gamma_min(4e6, 2e6) == 3.0);
    CHECK(gamma_min(1e6, 2e6) == doctest::Approx(std::sqrt(2.0) - 1.0));
}

TEST_CASE("minimum RIS units")
{
    CHECK(min_units(PowerW(4.0), GainLinear(1.0), 1.0, NoiseSpec(1.0, 1.0), 1.0) == 1);
    const NoiseSpec n2(7.9433e-15 / 2e6, 2e6);
    CHECK(min_units(PowerW(1.0), GainLinear(1e-20), 1.0, n2, 1.0) == 892);
    CHECK(oracle::scan_min_units(1.0, 1e-20, 1.0, 7.9433e-15, 2e6, 2e6) == 892);
}

TEST_CASE("minimum RIS units agree with a linear scan")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double bw = std::pow(10.0, 5.0 + 2.0 * u(rng));
        const double n0 = std::pow(10.0, -21.0 + 2.0 * u(rng));
        const double r_min = bw * (0.05 + 5.0 * u(rng));
        const double g = gamma_min(r_min, bw);
        const double rho = 0.3 + 0.7 * u(rng);
        const double p = std::pow(10.0, -3.0 + 3.0 * u(rng));
        const double radicand = std::pow(10.0, 10.0 * u(rng));
        const double h = n0 * bw * g / (p * rho * rho * radicand);
        const long long expect = oracle::scan_min_units(p, h, rho, n0 * bw, bw, r_min);
        REQUIRE(min_units(PowerW(p), GainLinear(h), g, NoiseSpec(n0, bw), rho) == expect);
    }
}

TEST_CASE("sorting by gain breaks ties by id")
{
    const std::vector<Candidate> c{{4, GainLinear(1.0)}, {2, GainLinear(3.0)}, {1, GainLinear(1.0)}, {3, GainLinear(3.0)}};
    const auto s = sort_by_gain(c);
    CHECK(s[0].ue == 2);
    CHECK(s[1].ue == 3);
    CHECK(s[2].ue == 1);
    CHECK(s[3].ue == 4);
}

TEST_CASE("equal power share")
{
    ScenarioConfig c;
    CHECK(equal_power_share(4, c) == doctest::Approx(c.cs_total_power_w / 4));
    CHECK(equal_power_share(1, c) == c.per_ue_power_cap_w);
    CHECK(equal_power_share(0, c) == 0.0);
}

TEST_CASE("stage 1 stops admitting when the unit budget is used up")
{
    ScenarioConfig c;
    c.cs_total_power_w = 1.0;
    const double p = 0.5;
    const std::vector<Candidate> k2{{0, GainLinear(gain_for_units(1000, p, c))},
                                    {1, GainLinear(gain_for_units(1500, p, c))}};
    const long long first = min_units(PowerW(p), k2[0].h_sq, 1.0, kNoise, 1.0);
    c.ris_total_units = first;
    const Stage1Result s1 = stage1_select(k2, c);
    REQUIRE(s1.admitted.size() == 1);
    CHECK(s1.admitted[0].ue == 0);
    CHECK(s1.admitted[0].p_w == 0.5);
    CHECK(s1.admitted[0].n_units == first);
}

TEST_CASE("with uniform caps stage 1 and the benchmark admit the same prefix")
{
    ScenarioConfig c;
    c.cs_total_power_w = 1.5;
    const double p = 0.5;
    const std::vector<Candidate> k2{{0, GainLinear(gain_for_units(1000, p, c))},
                                    {1, GainLinear(gain_for_units(1900, p, c))},
                                    {2, GainLinear(gain_for_units(1950, p, c))}};
    c.ris_total_units = 1000 + 1900 + 10;
    const Stage1Result s1 = stage1_select(k2, c);
    const AllocationResult b = benchmark_allocate(k2, c);
    REQUIRE(s1.admitted.size() == 2);
    REQUIRE(b.served.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(s1.admitted[i].ue == b.served[i].ue);
        CHECK(s1.admitted[i].n_units == b.served[i].n_units);
    }
}

TEST_CASE("identical channels are treated identically")
{
    ScenarioConfig c;
    const std::vector<Candidate> k2{{3, GainLinear(2e-21)}, {1, GainLinear(2e-21)}, {2, GainLinear(2e-21)}};
    const Stage1Result s1 = stage1_select(k2, c);
    REQUIRE(s1.admitted.size() == 3);
    for (const auto& s : s1.admitted) {
        CHECK(s.p_w == s1.admitted[0].p_w);
        CHECK(s.n_units == s1.admitted[0].n_units);
    }
    const AllocationResult r = stage2_allocate(s1, c);
    REQUIRE(r.served.size() == 3);
    for (const auto& s : r.served) CHECK(s.n_units == r.served[0].n_units);
}

TEST_CASE("single served UE matches the closed form")
{
    ScenarioConfig c;
    c.cs_total_power_w = 100.0;
    c.per_ue_power_cap_w = 100.0;
    c.ris_total_units = 10'000'000;
    c.per_ue_unit_cap = 10'000'000;
    const std::vector<Candidate> k2{{0, GainLinear(1e-19)}};
    const AllocationResult r = stage2_allocate(stage1_select(k2, c), c);
    REQUIRE(r.served.size() == 1);
    const double cst = noise_power(kNoise).watts() / 1e-19;
    const double n_star = std::cbrt(2.0 * cst / c.ris_unit_power_w);
    const auto n = r.served[0].n_units;
    CHECK(std::fabs(static_cast<double>(n) - n_star) <= 1.0);
    CHECK(r.served[0].p_w == doctest::Approx(cst / (static_cast<double>(n) * n)).epsilon(1e-12));
    CHECK_NOTHROW(verify_allocation(r, c));

    // Benchmark: same served set, weakly more power.
    const AllocationResult b = benchmark_allocate(k2, c);
    REQUIRE(b.served.size() == 1);
    CHECK(b.total_consumed_w(c.ris_unit_power_w) >= r.total_consumed_w(c.ris_unit_power_w));
}

TEST_CASE("empty candidate sets")
{
    ScenarioConfig c;
    const std::vector<Candidate> none;
    const AllocationResult r = stage2_allocate(stage1_select(none, c), c);
    CHECK(r.served.empty());
    CHECK(r.total_power_w == 0.0);
    CHECK(r.total_units == 0);
    CHECK(benchmark_allocate(none, c).served.empty());

    c.ris_total_units = 0;
    const std::vector<Candidate> one{{0, GainLinear(1e-20)}};
    CHECK(benchmark_allocate(one, c).served.empty());
    CHECK(stage1_select(one, c).admitted.empty());
}

TEST_CASE("stage 2 never costs more than its stage-1 seed")
{
    ScenarioConfig c;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        c.rng_seed = seed;
        const Pipeline p = pipeline(c);
        const Stage1Result s1 = stage1_select(p.k2, c);
        const AllocationResult r = stage2_allocate(s1, c);
        double seed_cost = 0.0;
        for (const auto& s : s1.admitted) seed_cost += s.p_w + c.ris_unit_power_w * static_cast<double>(s.n_units);
        CHECK(r.served.size() == s1.admitted.size());
        CHECK(r.total_consumed_w(c.ris_unit_power_w) <= seed_cost * (1.0 + 1e-12));
        REQUIRE_NOTHROW(verify_allocation(r, c));
        for (const auto& s : r.served) REQUIRE(s.rate_bps >= c.rate_threshold_bps * (1.0 - 1e-9));
    }
}

TEST_CASE("algorithm 1 against the benchmark on shared scenarios")
{
    ScenarioConfig c;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        c.rng_seed = seed;
        const Pipeline p = pipeline(c);
        const AllocationResult a = run_algorithm1(p.scenario, p.channels, p.association);
        const AllocationResult b = benchmark_allocate(p.k2, c);
        REQUIRE_NOTHROW(verify_allocation(a, c));
        REQUIRE_NOTHROW(verify_allocation(b, c));
        CHECK(b.served.size() <= a.served.size());
        const auto ma = resource_efficiency(a, p.association, c);
        const auto mb = resource_efficiency(b, p.association, c);
        if (mb.eta) {
            REQUIRE(ma.eta);
            CHECK(*ma.eta >= *mb.eta * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("admission grows with the budgets")
{
    ScenarioConfig c;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        c.rng_seed = seed;
        std::size_t prev_a = 0, prev_b = 0;
        for (long long n_max : {10'000LL, 70'000LL, 130'000LL, 220'000LL}) {
            c.ris_total_units = n_max;
            const Pipeline p = pipeline(c);
            const auto a = run_algorithm1(p.scenario, p.channels, p.association).served.size();
            const auto b = benchmark_allocate(p.k2, c).served.size();
            CHECK(a >= prev_a);
            CHECK(b >= prev_b);
            prev_a = a;
            prev_b = b;
        }
        c.ris_total_units = 150'000;
        prev_a = prev_b = 0;
        for (double dbm : {30.0, 31.0, 32.0, 33.0, 34.0, 35.0}) {
            c.cs_total_power_w = dbm_to_watts(Decibel{dbm}).watts();
            const Pipeline p = pipeline(c);
            const auto a = run_algorithm1(p.scenario, p.channels, p.association).served.size();
            const auto b = benchmark_allocate(p.k2, c).served.size();
            CHECK(a >= prev_a);
            CHECK(b >= prev_b);
            prev_a = a;
            prev_b = b;
        }
        c = ScenarioConfig{};
    }
}

TEST_CASE("objective masks steer stage 2")
{
    ScenarioConfig c;
    c.rng_seed = 3;
    const Pipeline p = pipeline(c);
    c.objective_mask = ObjectiveMask::units_only;
    const auto units_only = stage2_allocate(stage1_select(p.k2, c), c);
    c.objective_mask = ObjectiveMask::power_only;
    const auto power_only = stage2_allocate(stage1_select(p.k2, c), c);
    REQUIRE(units_only.served.size() == power_only.served.size());
    CHECK(units_only.total_units <= power_only.total_units);
    CHECK(power_only.total_power_w <= units_only.total_power_w);
    const Stage2Instance in = make_stage2_instance(stage1_select(p.k2, c).admitted, c);
    CHECK(in.unit_weight == 0.0);
    CHECK(in.power_weight == 1.0);
}

TEST_CASE("verification catches broken allocations")
{
    ScenarioConfig c;
    c.rng_seed = 1;
    const Pipeline p = pipeline(c);
    AllocationResult r = run_algorithm1(p.scenario, p.channels, p.association);
    REQUIRE(!r.served.empty());
    AllocationResult bad = r;
    bad.served[0].n_units -= 10;
    CHECK_THROWS_AS(verify_allocation(bad, c), InfeasibleError);
    bad = r;
    int inside = 0;
    while (p.association.serving_bs[static_cast<std::size_t>(inside)] < 0) ++inside;
    bad.served[0].ue = inside;
    CHECK_THROWS_AS(verify_allocation(bad, c), InfeasibleError);
    bad = r;
    bad.admitted.assign(bad.admitted.size(), false);
    CHECK_THROWS_AS(verify_allocation(bad, c), InfeasibleError);
    ScenarioConfig tight = c;
    tight.cs_total_power_w = 1.0;
    CHECK_THROWS_AS(verify_allocation(r, tight), InfeasibleError);
}

TEST_CASE("golden run: default settings, seed 1")
{
    ScenarioConfig c;
    c.rng_seed = 1;
    const Pipeline p = pipeline(c);
    CHECK(p.association.num_within_cell() == 65);
    CHECK(p.association.stranded.size() == 35);
    CHECK(p.association.bs_load == std::vector<int>{16, 13, 17, 19});

    const AllocationResult a = run_algorithm1(p.scenario, p.channels, p.association);
    const AllocationResult b = benchmark_allocate(p.k2, c);
    CHECK(a.served.size() == 27);
    CHECK(b.served.size() == 27);
    CHECK(a.total_units == 188278);
    CHECK(b.total_units == 214365);
    CHECK(a.total_power_w == doctest::Approx(1.9949534151501893).epsilon(1e-9));
    CHECK(b.total_power_w == doctest::Approx(1.539202357261706).epsilon(1e-12));
    CHECK_FALSE(a.kept_stage1_point);
    CHECK(a.dropped_after_rounding == 0);
    CHECK(a.served[0].ue == 7);
    CHECK(a.served[0].n_units == 6877);
}
