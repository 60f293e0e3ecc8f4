#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hapsris/geometry.hpp"

namespace hapsris {

/// Which terms of the stage-2 objective are minimized.
enum class ObjectiveMask { full, units_only, power_only };

std::string_view to_string(ObjectiveMask mask);
ObjectiveMask objective_mask_from_string(std::string_view text);

/// Every tunable parameter of a run. Defaults are the reference setup; the
/// BS power/gain, heights, HAPS altitude and CS position are not given there and
/// are documented calibration defaults.
struct ScenarioConfig {
    // geometry
    double area_side_m = 10'000.0;
    int num_ues = 100;
    int max_bs = 4;
    double min_ue_separation_m = 100.0;
    double bs_height_m = 25.0;
    double ue_height_m = 1.5;
    double haps_altitude_m = 20'000.0;
    Vec3 cs_position{0.0, 0.0, 10.0};

    // radio
    double carrier_hz = 2e9;
    double bs_bandwidth_hz = 50e6;
    double ue_bandwidth_hz = 2e6;
    double rate_threshold_bps = 2e6;
    double noise_psd = 3.981071705534972e-21;  // -174 dBm/Hz
    double shadowing_sigma_db = 8.0;

    // terrestrial network
    double bs_tx_power_w = 39.810717055349734;  // 46 dBm
    double bs_antenna_gain = 6.309573444801933;  // 8 dBi
    double ue_antenna_gain = 1.0;                // 0 dBi

    // control station and RIS
    double cs_total_power_w = 1.9952623149688795;  // 33 dBm
    double cs_antenna_gain = 20892.961308540423;   // 43.2 dBi
    double per_ue_power_cap_w = 1.0;               // 30 dBm
    long long ris_total_units = 220'000;
    long long per_ue_unit_cap = 50'000;
    double ris_unit_power_w = 7.8e-3;
    int phase_bits = 1;
    double reflection_loss = 1.0;

    // solver
    double power_floor_w = 1e-9;
    ObjectiveMask objective_mask = ObjectiveMask::full;

    std::uint64_t rng_seed = 1;

    /// Throws ConfigError naming the first violated field.
    void validate() const;
};

ScenarioConfig paper_defaults();

/// Applies one `key = value` assignment. Accepts canonical keys and the
/// `_db`/`_dbm` alternatives. Throws ConfigError on unknown keys or bad values.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Parses a flat key/value document (`#` comments, blank lines allowed) on top of `base`.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base = paper_defaults());

/// Loads a config file, or the built-in defaults when `path` is "paper_defaults".
ScenarioConfig load_config(const std::string& path);

/// Canonical key/value rendering; round-trips through parse_config exactly.
std::string serialize_config(const ScenarioConfig& cfg);

/// 64-bit FNV-1a of serialize_config, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

/// Canonical keys, in serialization order.
std::vector<std::string> config_keys();

}  // namespace hapsris
