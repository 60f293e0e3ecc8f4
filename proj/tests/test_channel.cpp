#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hapsris/channel.hpp"
#include "hapsris/scenario.hpp"
#include "oracles.hpp"

using namespace hapsris;
using std::numbers::pi;

TEST_CASE("UMa path loss branches")
{
    CHECK(uma_pathloss(1000.0, 2e9, 1.5, true).value == doctest::Approx(100.0206).epsilon(1e-6));
    CHECK(uma_pathloss(1000.0, 2e9, 1.5, false).value == doctest::Approx(136.8006).epsilon(1e-6));
    CHECK(uma_pathloss(1000.0, 2e9, 1.5, true).value == doctest::Approx(oracle::uma_los_db(1000.0, 2e9)));
    CHECK(uma_pathloss(1000.0, 2e9, 1.5, false).value == doctest::Approx(oracle::uma_nlos_db(1000.0, 2e9, 1.5)));
    // NLOS never undercuts LOS.
    for (double d : {10.0, 12.0, 50.0, 300.0, 5000.0})
        CHECK(uma_pathloss(d, 2e9, 1.5, false).value >= uma_pathloss(d, 2e9, 1.5, true).value);
}

TEST_CASE("UMa LOS probability")
{
    CHECK(uma_los_probability(5.0) == 1.0);
    CHECK(uma_los_probability(18.0) == 1.0);
    const double e = std::exp(-100.0 / 63.0);
    CHECK(uma_los_probability(100.0) == doctest::Approx(0.18 * (1.0 - e) + e));
    CHECK(uma_los_probability(2000.0) < uma_los_probability(200.0));
}

TEST_CASE("terrestrial draws")
{
    ScenarioConfig c;
    const Vec3 bs{0.0, 0.0, 25.0};

    SUBCASE("no shadowing reproduces the LOS formula where LOS is certain")
    {
        c.shadowing_sigma_db = 0.0;
        auto rng = make_rng(1, 1);
        const Vec3 ue{15.0, 0.0, 1.5};
        const double d3 = std::hypot(15.0, 23.5);
        CHECK(terrestrial_pathloss_draw(bs, ue, c, rng).value == doctest::Approx(oracle::uma_los_db(d3, 2e9)));
    }
    SUBCASE("2D distance is clamped at 10 m")
    {
        c.shadowing_sigma_db = 0.0;
        auto r1 = make_rng(1, 1);
        auto r2 = make_rng(1, 1);
        CHECK(terrestrial_pathloss_draw(bs, {3.0, 0.0, 1.5}, c, r1).value ==
              terrestrial_pathloss_draw(bs, {10.0, 0.0, 1.5}, c, r2).value);
    }
    SUBCASE("shadowing standard deviation")
    {
        auto rng = make_rng(2, 1);
        const Vec3 ue{15.0, 0.0, 1.5};
        double s = 0.0, s2 = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const double v = terrestrial_pathloss_draw(bs, ue, c, rng).value;
            s += v;
            s2 += v * v;
        }
        const double mean = s / n;
        const double sd = std::sqrt((s2 - n * mean * mean) / (n - 1));
        CHECK(sd == doctest::Approx(8.0).epsilon(0.2 / 8.0));
    }
    SUBCASE("gain folds in both antennas")
    {
        c.shadowing_sigma_db = 0.0;
        c.ue_antenna_gain = 2.0;
        auto r1 = make_rng(4, 1);
        auto r2 = make_rng(4, 1);
        const Vec3 ue{15.0, 0.0, 1.5};
        const double pl = terrestrial_pathloss_draw(bs, ue, c, r1).value;
        CHECK(terrestrial_gain(bs, ue, c, r2).value() ==
              doctest::Approx(c.bs_antenna_gain * 2.0 * std::pow(10.0, -pl / 10.0)).epsilon(1e-12));
    }
}

TEST_CASE("free-space path loss")
{
    CHECK(std::fabs(free_space_pl(1.0, oracle::kC / (4.0 * pi)).value) <= 1e-12);
    CHECK(free_space_pl(20000.0, 2e9).value == doctest::Approx(124.48898).epsilon(1e-6));
    CHECK(free_space_pl(20000.0, 2e9).value == doctest::Approx(oracle::fspl_db(20000.0, 2e9)).epsilon(1e-13));
    CHECK(free_space_pl(2000.0, 2e9).value - free_space_pl(1000.0, 2e9).value ==
          doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(free_space_pl(0.0, 2e9), std::domain_error);
}

TEST_CASE("dry-air attenuation")
{
    CHECK(atmospheric_attenuation(pi / 2, 2e9).value == doctest::Approx(0.035).epsilon(1e-12));
    CHECK(atmospheric_attenuation(pi / 6, 2e9).value == doctest::Approx(0.070).epsilon(1e-12));
    CHECK(atmospheric_attenuation(5.0 * pi / 180.0, 2e9).value == doctest::Approx(0.4016).epsilon(1e-4));
    CHECK_THROWS_AS(atmospheric_attenuation(0.0, 2e9), std::domain_error);
    CHECK_THROWS_AS(atmospheric_attenuation(-0.1, 2e9), std::domain_error);
    // Interpolated between table rows.
    const double mid = zenith_dry_air_attenuation(3e9).value;
    CHECK(mid > zenith_dry_air_attenuation(2e9).value);
    CHECK(mid < zenith_dry_air_attenuation(4e9).value);
}

TEST_CASE("HAPS link path loss")
{
    const Vec3 haps{5000.0, 5000.0, 20000.0};
    const double slant = std::sqrt(2.0 * 5000.0 * 5000.0 + 19990.0 * 19990.0);
    CHECK(haps_link_pl({0.0, 0.0, 10.0}, haps, 2e9).value ==
          doctest::Approx(oracle::fspl_db(slant, 2e9) + 0.035 * slant / 19990.0).epsilon(1e-12));
    // Directly below: free space over 20 km plus the zenith loss.
    CHECK(haps_link_pl({5000.0, 5000.0, 0.0}, haps, 2e9).value == doctest::Approx(124.48898 + 0.035).epsilon(1e-6));
    const double up = haps_link_pl({0.0, 0.0, 10.0}, haps, 4e9).value - haps_link_pl({0.0, 0.0, 10.0}, haps, 2e9).value;
    const double atm = atmospheric_attenuation(elevation_angle({0.0, 0.0, 10.0}, haps), 4e9).value -
                       atmospheric_attenuation(elevation_angle({0.0, 0.0, 10.0}, haps), 2e9).value;
    CHECK(up - atm == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("effective CS-HAPS-UE gain matches a from-scratch link budget")
{
    ScenarioConfig c;
    c.rng_seed = 1;
    const Scenario sc = build_scenario(c);
    const ChannelState ch = effective_gain(sc);
    CHECK(ch.recomposition_error() <= 1e-12);
    auto hop = [&](const Vec3& g) {
        const double d = std::sqrt(std::pow(g.x - 5000.0, 2) + std::pow(g.y - 5000.0, 2) + std::pow(20000.0 - g.z, 2));
        const double elev = std::atan2(20000.0 - g.z, std::hypot(g.x - 5000.0, g.y - 5000.0));
        return oracle::fspl_db(d, 2e9) + 0.035 / std::sin(elev);
    };
    const double cs_db = hop(sc.cs_position);
    for (std::size_t k = 0; k < sc.ue_positions.size(); ++k) {
        const double expect_db = 43.2 - cs_db - hop(sc.ue_positions[k]);
        REQUIRE(ch.haps_effective_gain_sq[k].value() == doctest::Approx(std::pow(10.0, expect_db / 10.0)).epsilon(1e-9));
    }
    CHECK(ch.terrestrial_gain.size() == 400);
}

TEST_CASE("effective gain arithmetic")
{
    CHECK(db_to_linear(43.2 - 250.0) == doctest::Approx(std::pow(10.0, -20.68)).epsilon(1e-12));
    CHECK(db_to_linear(0.0 + 0.0 - 0.0) == 1.0);
}

TEST_CASE("reflection gain")
{
    SUBCASE("perfect alignment")
    {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
        RisPhaseConfig cfg;
        for (int i = 0; i < 4000; ++i) {
            cfg.incident_phases.push_back(u(rng));
            cfg.departure_phases.push_back(u(rng));
            cfg.unit_phases.push_back(aligned_phase(cfg.incident_phases.back(), cfg.departure_phases.back()));
        }
        const auto phi = reflection_gain(cfg);
        CHECK(phi.real() == doctest::Approx(4000.0).epsilon(1e-12));
        CHECK(std::fabs(phi.imag()) <= 1e-9);
    }
    SUBCASE("cancellation")
    {
        RisPhaseConfig cfg;
        cfg.unit_phases = {0.0, pi};
        cfg.incident_phases = {0.0, 0.0};
        cfg.departure_phases = {0.0, 0.0};
        CHECK(std::abs(reflection_gain(cfg)) <= 1e-12);
    }
    SUBCASE("bound holds for random phases and per-unit loss")
    {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(0.0, 2.0 * pi), r(0.1, 1.0);
        for (int t = 0; t < 200; ++t) {
            RisPhaseConfig cfg;
            const int n = 1 + t * 3;
            double bound = 0.0;
            for (int i = 0; i < n; ++i) {
                cfg.unit_phases.push_back(u(rng));
                cfg.incident_phases.push_back(u(rng));
                cfg.departure_phases.push_back(u(rng));
                cfg.unit_reflection.push_back(r(rng));
                bound += cfg.unit_reflection.back();
            }
            REQUIRE(std::abs(reflection_gain(cfg)) <= bound * (1.0 + 1e-12));
        }
    }
    SUBCASE("malformed configurations are rejected")
    {
        RisPhaseConfig cfg;
        cfg.unit_phases = {0.0, 1.0};
        cfg.incident_phases = {0.0};
        cfg.departure_phases = {0.0, 0.0};
        CHECK_THROWS(reflection_gain(cfg));
        cfg.incident_phases = {0.0, 7.0};
        CHECK_THROWS(reflection_gain(cfg));
    }
}

TEST_CASE("phase quantization")
{
    CHECK(quantize_phase(0.2, 1) == 0.0);
    CHECK(quantize_phase(pi - 0.2, 1) == doctest::Approx(pi));
    CHECK(quantize_phase(2.0 * pi - 0.1, 1) == 0.0);
    CHECK(quantize_phase(pi / 2 + 0.1, 2) == doctest::Approx(pi / 2));
    for (int b : {1, 2, 4, 8}) {
        const double step = 2.0 * pi / std::ldexp(1.0, b);
        for (double x = 0.0; x < 2.0 * pi; x += 0.01) {
            const double q = quantize_phase(x, b);
            REQUIRE(std::fabs(q / step - std::nearbyint(q / step)) <= 1e-9);
            REQUIRE(q < 2.0 * pi);
        }
    }
    CHECK(wrap_phase(-0.5) == doctest::Approx(2.0 * pi - 0.5));
    CHECK(wrap_phase(7.0) == doctest::Approx(7.0 - 2.0 * pi));
}

TEST_CASE("quantization loss follows sinc(pi / 2^b)")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
    for (int b : {1, 2, 4, 8}) {
        const int n = 10000, trials = 20;
        double mean = 0.0;
        for (int t = 0; t < trials; ++t) {
            RisPhaseConfig cfg;
            cfg.bits = b;
            for (int i = 0; i < n; ++i) {
                cfg.incident_phases.push_back(u(rng));
                cfg.departure_phases.push_back(u(rng));
                cfg.unit_phases.push_back(
                    quantize_phase(aligned_phase(cfg.incident_phases.back(), cfg.departure_phases.back()), b));
            }
            mean += std::abs(reflection_gain(cfg)) / n / trials;
        }
        const double x = pi / std::ldexp(1.0, b);
        CAPTURE(b);
        CHECK(mean == doctest::Approx(std::sin(x) / x).epsilon(0.01));
    }
}

TEST_CASE("SNR and rate")
{
    const NoiseSpec noise(std::pow(10.0, -20.4), 2e6);
    const double np = noise_power(noise).watts();
    CHECK(snr(PowerW(np), GainLinear(1.0), 1.0, noise) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(snr(PowerW(1.0), GainLinear(1e-12), 50.0, noise) ==
          doctest::Approx(2500.0 * snr(PowerW(1.0), GainLinear(1e-12), 1.0, noise)).epsilon(1e-14));
    // Worked example with a -111 dBm noise floor.
    const NoiseSpec floor111(7.9433e-15 / 2e6, 2e6);
    CHECK(snr(PowerW(0.33), GainLinear(std::pow(10.0, -20.68)), 1e4, floor111) == doctest::Approx(8.68).epsilon(1e-3));
    CHECK(rate(1.0, 2e6) == 2e6);
    CHECK(rate(0.0, 2e6) == 0.0);
    CHECK(rate(3.0, 1e6) == 2e6);
    // Strictly increasing in every positive argument.
    CHECK(snr(PowerW(2.0), GainLinear(1e-15), 10.0, noise) > snr(PowerW(1.0), GainLinear(1e-15), 10.0, noise));
    CHECK(snr(PowerW(1.0), GainLinear(2e-15), 10.0, noise) > snr(PowerW(1.0), GainLinear(1e-15), 10.0, noise));
    CHECK(snr(PowerW(1.0), GainLinear(1e-15), 11.0, noise) > snr(PowerW(1.0), GainLinear(1e-15), 10.0, noise));
    CHECK(rate(2.0, 1e6) > rate(1.0, 1e6));
    CHECK(rate(1.0, 2e6) > rate(1.0, 1e6));
}
