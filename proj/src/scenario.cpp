#include "hapsris/scenario.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "hapsris/errors.hpp"

namespace hapsris {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), 0x48415053u};
    return std::mt19937_64(seq);
}

std::vector<Vec3> place_ues(const ScenarioConfig& config, std::mt19937_64& rng, long long max_rejections)
{
    const int k = config.num_ues;
    const double side = config.area_side_m;
    const double sep = config.min_ue_separation_m;
    if (k < 1) throw ConfigError("num_ues", "must be >= 1");

    // Hexagonal packing bound on disks of radius sep/2 whose centres lie in the square.
    const double disk = std::numbers::pi * 0.25 * sep * sep;
    const double padded = (side + sep) * (side + sep);
    if (k > 1 && k * disk > 0.9069 * padded)
        throw InfeasibleError("place_ues: " + std::to_string(k) + " UEs with " + std::to_string(sep) +
                              " m separation cannot fit a " + std::to_string(side) + " m square");

    std::uniform_real_distribution<double> coord(0.0, side);
    const double sep2 = sep * sep;
    std::vector<Vec3> pts;
    pts.reserve(k);
    long long rejections = 0;
    while (static_cast<int>(pts.size()) < k) {
        const Vec3 p{coord(rng), coord(rng), config.ue_height_m};
        bool ok = true;
        for (const auto& q : pts) {
            const double dx = p.x - q.x, dy = p.y - q.y;
            if (dx * dx + dy * dy < sep2) {
                ok = false;
                break;
            }
        }
        if (ok) {
            pts.push_back(p);
            continue;
        }
        if (++rejections > max_rejections)
            throw InfeasibleError("place_ues: rejection budget of " + std::to_string(max_rejections) + " exhausted");
        pts.clear();
    }
    return pts;
}

std::vector<Vec3> place_bss(const ScenarioConfig& config)
{
    const int l = config.max_bs;
    if (l < 1) throw ConfigError("max_bs", "must be >= 1");
    int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(l)) - 1e-12));
    while (l % cols != 0) ++cols;
    const int rows = l / cols;
    const double wx = config.area_side_m / cols;
    const double wy = config.area_side_m / rows;

    std::vector<Vec3> out;
    out.reserve(l);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) out.push_back({(c + 0.5) * wx, (r + 0.5) * wy, config.bs_height_m});
    return out;
}

std::pair<Vec3, Vec3> place_haps_cs(const ScenarioConfig& config)
{
    const Vec3 haps{0.5 * config.area_side_m, 0.5 * config.area_side_m, config.haps_altitude_m};
    const Vec3 cs = config.cs_position;
    const double elev_deg = elevation_angle(cs, haps) * 180.0 / std::numbers::pi;
    if (elev_deg < kMinCsElevationDeg)
        throw ConfigError("cs_position", "CS-HAPS elevation " + std::to_string(elev_deg) +
                                             " deg is below the 5 deg gateway minimum");
    const double d = distance(cs, haps);
    if (d > kMaxCsHapsDistanceM)
        throw ConfigError("cs_position", "CS-HAPS distance " + std::to_string(d) +
                                             " m exceeds the 229 km gateway maximum");
    return {haps, cs};
}

Scenario build_scenario(const ScenarioConfig& config)
{
    config.validate();
    Scenario s;
    s.config = config;
    auto rng = make_rng(config.rng_seed, 0);
    s.ue_positions = place_ues(config, rng);
    s.bs_positions = place_bss(config);
    std::tie(s.haps_position, s.cs_position) = place_haps_cs(config);
    s.validate();
    return s;
}

void Scenario::validate() const
{
    if (static_cast<int>(ue_positions.size()) != config.num_ues)
        throw InfeasibleError("scenario: UE count does not match num_ues");
    if (static_cast<int>(bs_positions.size()) != config.max_bs)
        throw InfeasibleError("scenario: BS count does not match max_bs");
    const double side = config.area_side_m;
    auto inside = [side](const Vec3& p) { return p.x >= 0.0 && p.x <= side && p.y >= 0.0 && p.y <= side; };
    for (const auto& p : ue_positions)
        if (!inside(p)) throw InfeasibleError("scenario: UE outside the area");
    for (const auto& p : bs_positions)
        if (!inside(p)) throw InfeasibleError("scenario: BS outside the area");
    const double sep = config.min_ue_separation_m;
    for (std::size_t i = 0; i < ue_positions.size(); ++i)
        for (std::size_t j = i + 1; j < ue_positions.size(); ++j)
            if (ground_distance(ue_positions[i], ue_positions[j]) < sep)
                throw InfeasibleError("scenario: UEs " + std::to_string(i) + " and " + std::to_string(j) +
                                      " closer than the minimum separation");
    if (elevation_angle(cs_position, haps_position) * 180.0 / std::numbers::pi < kMinCsElevationDeg)
        throw InfeasibleError("scenario: CS-HAPS elevation below 5 deg");
    if (distance(cs_position, haps_position) > kMaxCsHapsDistanceM)
        throw InfeasibleError("scenario: CS-HAPS distance above 229 km");
}

namespace {

nlohmann::ordered_json to_json(const Vec3& v) { return nlohmann::ordered_json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const nlohmann::json& j)
{
    if (!j.is_array() || j.size() != 3) throw ConfigError("", "scenario file: position must be [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

std::string scenario_to_json(const Scenario& s, int indent)
{
    nlohmann::ordered_json j;
    j["format"] = "hapsris-scenario/1";
    j["config_hash"] = config_hash(s.config);
    j["config"] = serialize_config(s.config);
    j["haps_position"] = to_json(s.haps_position);
    j["cs_position"] = to_json(s.cs_position);
    auto& bs = j["bs_positions"] = nlohmann::ordered_json::array();
    for (const auto& p : s.bs_positions) bs.push_back(to_json(p));
    auto& ue = j["ue_positions"] = nlohmann::ordered_json::array();
    for (const auto& p : s.ue_positions) ue.push_back(to_json(p));
    return j.dump(indent);
}

Scenario scenario_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("", std::string("scenario file: ") + e.what());
    }
    if (j.value("format", "") != "hapsris-scenario/1") throw ConfigError("", "scenario file: unknown format");
    Scenario s;
    s.config = parse_config(j.at("config").get<std::string>());
    s.haps_position = vec_from_json(j.at("haps_position"));
    s.cs_position = vec_from_json(j.at("cs_position"));
    for (const auto& p : j.at("bs_positions")) s.bs_positions.push_back(vec_from_json(p));
    for (const auto& p : j.at("ue_positions")) s.ue_positions.push_back(vec_from_json(p));
    s.validate();
    return s;
}

}  // namespace hapsris
