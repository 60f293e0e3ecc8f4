#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hapsris/config.hpp"
#include "hapsris/geometry.hpp"

namespace hapsris {

/// Gateway placement limits relative to the HAPS.
inline constexpr double kMinCsElevationDeg = 5.0;
inline constexpr double kMaxCsHapsDistanceM = 229'000.0;

/// Concrete node placements for one Monte Carlo draw.
struct Scenario {
    std::vector<Vec3> ue_positions;
    std::vector<Vec3> bs_positions;
    Vec3 haps_position;
    Vec3 cs_position;
    ScenarioConfig config;

    /// Checks size, separation, containment and CS/HAPS geometry. Throws on violation.
    void validate() const;
};

/// Independent RNG streams derived from a run seed. Stream 0 places UEs,
/// stream 1 draws terrestrial LOS states and shadowing.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

/// Uniform placement conditioned on pairwise separation. Whole-configuration
/// rejection: any conflict discards the partial draw, so the accepted sample is
/// exactly uniform over the constrained set. Throws InfeasibleError after
/// `max_rejections` conflicts.
std::vector<Vec3> place_ues(const ScenarioConfig& config, std::mt19937_64& rng,
                            long long max_rejections = 1'000'000);

/// One BS at the centre of each cell of a rows x cols grid tiling the square,
/// rows * cols == max_bs and cols the smallest divisor >= sqrt(max_bs).
std::vector<Vec3> place_bss(const ScenarioConfig& config);

/// HAPS above the area centre; CS at the configured position. Throws ConfigError
/// if the CS would violate the elevation or slant-range limit.
std::pair<Vec3, Vec3> place_haps_cs(const ScenarioConfig& config);

Scenario build_scenario(const ScenarioConfig& config);

std::string scenario_to_json(const Scenario& scenario, int indent = 2);
Scenario scenario_from_json(const std::string& text);

}  // namespace hapsris
