#include <doctest.h>

#include <cmath>

#include "hapsris/channel.hpp"
#include "hapsris/errors.hpp"
#include "hapsris/scenario.hpp"

using namespace hapsris;

namespace {

double min_pairwise(const std::vector<Vec3>& pts)
{
    double best = INFINITY;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::min(best, std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y));
    return best;
}

}  // namespace

TEST_CASE("UE placement keeps the minimum separation")
{
    ScenarioConfig c;
    auto rng = make_rng(7, 0);
    const auto pts = place_ues(c, rng);
    CHECK(pts.size() == 100);
    CHECK(min_pairwise(pts) >= 100.0);
    for (const auto& p : pts) {
        CHECK(p.x >= 0.0);
        CHECK(p.x <= 10000.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y <= 10000.0);
        CHECK(p.z == 1.5);
    }
}

TEST_CASE("single UE and tight two-UE placement")
{
    ScenarioConfig c;
    c.num_ues = 1;
    auto rng = make_rng(3, 0);
    CHECK(place_ues(c, rng).size() == 1);

    c.num_ues = 2;
    c.area_side_m = 150.0;
    for (std::uint64_t s = 1; s <= 50; ++s) {
        auto r = make_rng(s, 0);
        const auto pts = place_ues(c, r);
        REQUIRE(pts.size() == 2);
        CHECK(min_pairwise(pts) >= 100.0);
    }
}

TEST_CASE("overfull areas are reported as infeasible")
{
    ScenarioConfig c;
    c.num_ues = 200;
    c.area_side_m = 500.0;
    auto rng = make_rng(1, 0);
    CHECK_THROWS_AS(place_ues(c, rng), InfeasibleError);

    // Packable in principle but hopeless for rejection sampling.
    c.num_ues = 20;
    c.area_side_m = 400.0;
    auto rng2 = make_rng(1, 0);
    CHECK_THROWS_AS(place_ues(c, rng2, 1000), InfeasibleError);
}

TEST_CASE("BS grid placement")
{
    ScenarioConfig c;
    c.max_bs = 4;
    const auto four = place_bss(c);
    REQUIRE(four.size() == 4);
    const double expect[4][2] = {{2500, 2500}, {2500, 7500}, {7500, 2500}, {7500, 7500}};
    for (int i = 0; i < 4; ++i) {
        CHECK(four[i].x == expect[i][0]);
        CHECK(four[i].y == expect[i][1]);
        CHECK(four[i].z == 25.0);
    }
    c.max_bs = 1;
    const auto one = place_bss(c);
    REQUIRE(one.size() == 1);
    CHECK(one[0].x == 5000.0);
    CHECK(one[0].y == 5000.0);

    c.max_bs = 9;
    const auto nine = place_bss(c);
    REQUIRE(nine.size() == 9);
    for (int i = 0; i < 9; ++i) {
        CHECK(nine[i].x == doctest::Approx(10000.0 / 3 * (i / 3 + 0.5)));
        CHECK(nine[i].y == doctest::Approx(10000.0 / 3 * (i % 3 + 0.5)));
    }
}

TEST_CASE("HAPS and CS geometry")
{
    ScenarioConfig c;
    const auto [haps, cs] = place_haps_cs(c);
    CHECK(haps.x == 5000.0);
    CHECK(haps.y == 5000.0);
    CHECK(haps.z == 20000.0);
    const double d2 = std::hypot(5000.0, 5000.0);
    CHECK(elevation_angle(cs, haps) * 180.0 / M_PI == doctest::Approx(std::atan2(19990.0, d2) * 180.0 / M_PI));
    CHECK(elevation_angle(cs, haps) * 180.0 / M_PI == doctest::Approx(70.5).epsilon(0.002));
    CHECK(distance(cs, haps) == doctest::Approx(21200.0).epsilon(0.001));

    c.cs_position = {5000.0, 5000.0, 10.0};
    const auto below = place_haps_cs(c);
    CHECK(elevation_angle(below.second, below.first) == doctest::Approx(M_PI / 2));

    c.cs_position = {305000.0, 5000.0, 10.0};
    try {
        place_haps_cs(c);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "cs_position");
    }
}

TEST_CASE("scenario determinism")
{
    ScenarioConfig c;
    c.rng_seed = 1;
    const Scenario a = build_scenario(c);
    const Scenario b = build_scenario(c);
    CHECK(scenario_to_json(a) == scenario_to_json(b));
    c.rng_seed = 2;
    const Scenario d = build_scenario(c);
    CHECK(a.ue_positions[0].x != d.ue_positions[0].x);
    for (std::size_t i = 0; i < a.bs_positions.size(); ++i) CHECK(a.bs_positions[i].x == d.bs_positions[i].x);
    CHECK(a.haps_position.z == d.haps_position.z);
    CHECK(a.cs_position.x == d.cs_position.x);
}

TEST_CASE("scenario invariants over 1000 seeds")
{
    ScenarioConfig c;
    for (std::uint64_t s = 1; s <= 1000; ++s) {
        c.rng_seed = s;
        const Scenario sc = build_scenario(c);
        REQUIRE_NOTHROW(sc.validate());
        REQUIRE(effective_gain(sc).recomposition_error() <= 1e-12);
    }
}

TEST_CASE("placement is uniform without a separation constraint")
{
    ScenarioConfig c;
    c.num_ues = 10000;
    c.min_ue_separation_m = 0.0;
    auto rng = make_rng(5, 0);
    const auto pts = place_ues(c, rng);
    double mx = 0.0, my = 0.0;
    for (const auto& p : pts) {
        mx += p.x;
        my += p.y;
    }
    mx /= pts.size();
    my /= pts.size();
    const double sigma = 10000.0 / std::sqrt(12.0) / std::sqrt(10000.0);
    CHECK(std::fabs(mx - 5000.0) <= 3.0 * sigma);
    CHECK(std::fabs(my - 5000.0) <= 3.0 * sigma);
}

TEST_CASE("scenario replay file round trips")
{
    ScenarioConfig c;
    c.rng_seed = 9;
    const Scenario a = build_scenario(c);
    const std::string text = scenario_to_json(a);
    const Scenario b = scenario_from_json(text);
    CHECK(scenario_to_json(b) == text);
    CHECK(b.ue_positions[17].y == a.ue_positions[17].y);
    CHECK(text.find(config_hash(c)) != std::string::npos);
    CHECK_THROWS(scenario_from_json("{not json"));
}
