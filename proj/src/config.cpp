#include "hapsris/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "hapsris/errors.hpp"
#include "hapsris/units.hpp"

namespace hapsris {

std::string_view to_string(ObjectiveMask mask)
{
    switch (mask) {
    case ObjectiveMask::full: return "full";
    case ObjectiveMask::units_only: return "units-only";
    case ObjectiveMask::power_only: return "power-only";
    }
    return "full";
}

ObjectiveMask objective_mask_from_string(std::string_view text)
{
    if (text == "full") return ObjectiveMask::full;
    if (text == "units-only" || text == "units_only") return ObjectiveMask::units_only;
    if (text == "power-only" || text == "power_only") return ObjectiveMask::power_only;
    throw ConfigError("objective_mask", "expected full|units-only|power-only, got '" + std::string(text) + "'");
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text)
{
    text = trim(text);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError(std::string(key), "expected a real number, got '" + std::string(text) + "'");
    return v;
}

template <class T>
T parse_integer(std::string_view key, std::string_view text)
{
    text = trim(text);
    // Accept "220000" as well as "2.2e5" when it is integral.
    T v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec == std::errc() && ptr == end) return v;
    if (ec == std::errc::result_out_of_range) throw ConfigError(std::string(key), "integer out of range");
    const double d = parse_real(key, text);
    if (d != std::floor(d) || std::fabs(d) > 9.0e15)
        throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
    if (d < static_cast<double>(std::numeric_limits<T>::min()) || d > static_cast<double>(std::numeric_limits<T>::max()))
        throw ConfigError(std::string(key), "integer out of range");
    return static_cast<T>(d);
}

Vec3 parse_position(std::string_view key, std::string_view text)
{
    double xyz[3];
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
        const auto comma = text.find(',', start);
        if ((i < 2) != (comma != std::string_view::npos))
            throw ConfigError(std::string(key), "expected 'x,y,z', got '" + std::string(text) + "'");
        xyz[i] = parse_real(key, text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
        start = comma + 1;
    }
    return {xyz[0], xyz[1], xyz[2]};
}

std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

enum class Kind { real, integer, position, mask };

struct Field {
    std::string key;
    Kind kind;
    std::function<void(ScenarioConfig&, std::string_view, std::string_view)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

template <class T>
Field real_field(std::string key, T ScenarioConfig::*member)
{
    return {key, Kind::real,
            [member](ScenarioConfig& c, std::string_view k, std::string_view v) { c.*member = parse_real(k, v); },
            [member](const ScenarioConfig& c) { return format_real(c.*member); }};
}

template <class T>
Field integer_field(std::string key, T ScenarioConfig::*member)
{
    return {key, Kind::integer,
            [member](ScenarioConfig& c, std::string_view k, std::string_view v) {
                c.*member = parse_integer<T>(k, v);
            },
            [member](const ScenarioConfig& c) { return std::to_string(c.*member); }};
}

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(real_field("area_side_m", &ScenarioConfig::area_side_m));
        f.push_back(integer_field("num_ues", &ScenarioConfig::num_ues));
        f.push_back(integer_field("max_bs", &ScenarioConfig::max_bs));
        f.push_back(real_field("min_ue_separation_m", &ScenarioConfig::min_ue_separation_m));
        f.push_back(real_field("bs_height_m", &ScenarioConfig::bs_height_m));
        f.push_back(real_field("ue_height_m", &ScenarioConfig::ue_height_m));
        f.push_back(real_field("haps_altitude_m", &ScenarioConfig::haps_altitude_m));
        f.push_back({"cs_position", Kind::position,
                     [](ScenarioConfig& c, std::string_view k, std::string_view v) { c.cs_position = parse_position(k, v); },
                     [](const ScenarioConfig& c) {
                         return format_real(c.cs_position.x) + "," + format_real(c.cs_position.y) + "," +
                                format_real(c.cs_position.z);
                     }});
        f.push_back(real_field("carrier_hz", &ScenarioConfig::carrier_hz));
        f.push_back(real_field("bs_bandwidth_hz", &ScenarioConfig::bs_bandwidth_hz));
        f.push_back(real_field("ue_bandwidth_hz", &ScenarioConfig::ue_bandwidth_hz));
        f.push_back(real_field("rate_threshold_bps", &ScenarioConfig::rate_threshold_bps));
        f.push_back(real_field("noise_psd", &ScenarioConfig::noise_psd));
        f.push_back(real_field("shadowing_sigma_db", &ScenarioConfig::shadowing_sigma_db));
        f.push_back(real_field("bs_tx_power_w", &ScenarioConfig::bs_tx_power_w));
        f.push_back(real_field("bs_antenna_gain", &ScenarioConfig::bs_antenna_gain));
        f.push_back(real_field("ue_antenna_gain", &ScenarioConfig::ue_antenna_gain));
        f.push_back(real_field("cs_total_power_w", &ScenarioConfig::cs_total_power_w));
        f.push_back(real_field("cs_antenna_gain", &ScenarioConfig::cs_antenna_gain));
        f.push_back(real_field("per_ue_power_cap_w", &ScenarioConfig::per_ue_power_cap_w));
        f.push_back(integer_field("ris_total_units", &ScenarioConfig::ris_total_units));
        f.push_back(integer_field("per_ue_unit_cap", &ScenarioConfig::per_ue_unit_cap));
        f.push_back(real_field("ris_unit_power_w", &ScenarioConfig::ris_unit_power_w));
        f.push_back(integer_field("phase_bits", &ScenarioConfig::phase_bits));
        f.push_back(real_field("reflection_loss", &ScenarioConfig::reflection_loss));
        f.push_back(real_field("power_floor_w", &ScenarioConfig::power_floor_w));
        f.push_back({"objective_mask", Kind::mask,
                     [](ScenarioConfig& c, std::string_view, std::string_view v) {
                         c.objective_mask = objective_mask_from_string(trim(v));
                     },
                     [](const ScenarioConfig& c) { return std::string(to_string(c.objective_mask)); }});
        f.push_back(integer_field("rng_seed", &ScenarioConfig::rng_seed));
        return f;
    }();
    return table;
}

const Field* find_field(std::string_view key)
{
    for (const auto& f : fields())
        if (f.key == key) return &f;
    return nullptr;
}

bool ends_with(std::string_view s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    if (const Field* f = find_field(key)) {
        f->set(cfg, key, value);
        return;
    }
    // Logarithmic alternatives: X_dbm for a power X_w, X_db for a gain X,
    // noise_psd_dbm_per_hz for noise_psd.
    if (key == "noise_psd_dbm_per_hz") {
        cfg.noise_psd = dbm_to_watts(Decibel{parse_real(key, value)}).watts();
        return;
    }
    if (ends_with(key, "_dbm")) {
        const std::string base = std::string(key.substr(0, key.size() - 4)) + "_w";
        if (const Field* f = find_field(base); f && f->kind == Kind::real) {
            f->set(cfg, base, format_real(dbm_to_watts(Decibel{parse_real(key, value)}).watts()));
            return;
        }
    }
    for (std::string_view suffix : {"_dbi", "_db"}) {
        if (!ends_with(key, suffix)) continue;
        const std::string base(key.substr(0, key.size() - suffix.size()));
        if (const Field* f = find_field(base); f && f->kind == Kind::real && ends_with(base, "_gain")) {
            f->set(cfg, base, format_real(db_to_linear(parse_real(key, value))));
            return;
        }
    }
    throw ConfigError(std::string(key), "unknown configuration key");
}

ScenarioConfig parse_config(std::string_view text, ScenarioConfig base)
{
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
        apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

ScenarioConfig load_config(const std::string& path)
{
    if (path.empty() || path == "paper_defaults") return paper_defaults();
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& cfg)
{
    std::string out;
    for (const auto& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
    return out;
}

std::string config_hash(const ScenarioConfig& cfg)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : serialize_config(cfg)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> config_keys()
{
    std::vector<std::string> keys;
    for (const auto& f : fields()) keys.push_back(f.key);
    return keys;
}

ScenarioConfig paper_defaults() { return ScenarioConfig{}; }

void ScenarioConfig::validate() const
{
    auto require = [](bool ok, const char* key, const char* what) {
        if (!ok) throw ConfigError(key, what);
    };
    auto positive = [&](double v, const char* key) { require(std::isfinite(v) && v > 0.0, key, "must be positive"); };

    positive(area_side_m, "area_side_m");
    require(num_ues >= 1, "num_ues", "must be >= 1");
    require(max_bs >= 1, "max_bs", "must be >= 1");
    require(min_ue_separation_m >= 0.0, "min_ue_separation_m", "must be nonnegative");
    require(area_side_m > min_ue_separation_m, "min_ue_separation_m", "must be smaller than area_side_m");
    require(bs_height_m >= 0.0, "bs_height_m", "must be nonnegative");
    require(ue_height_m >= 0.0, "ue_height_m", "must be nonnegative");
    positive(haps_altitude_m, "haps_altitude_m");
    positive(carrier_hz, "carrier_hz");
    positive(bs_bandwidth_hz, "bs_bandwidth_hz");
    positive(ue_bandwidth_hz, "ue_bandwidth_hz");
    require(bs_bandwidth_hz >= ue_bandwidth_hz, "bs_bandwidth_hz", "must hold at least one UE subcarrier");
    positive(rate_threshold_bps, "rate_threshold_bps");
    positive(noise_psd, "noise_psd");
    require(shadowing_sigma_db >= 0.0, "shadowing_sigma_db", "must be nonnegative");
    positive(bs_tx_power_w, "bs_tx_power_w");
    positive(bs_antenna_gain, "bs_antenna_gain");
    positive(ue_antenna_gain, "ue_antenna_gain");
    positive(cs_total_power_w, "cs_total_power_w");
    positive(cs_antenna_gain, "cs_antenna_gain");
    positive(per_ue_power_cap_w, "per_ue_power_cap_w");
    require(ris_total_units >= 1, "ris_total_units", "must be >= 1");
    require(per_ue_unit_cap >= 1, "per_ue_unit_cap", "must be >= 1");
    positive(ris_unit_power_w, "ris_unit_power_w");
    require(phase_bits >= 1 && phase_bits <= 30, "phase_bits", "must be in [1, 30]");
    require(reflection_loss > 0.0 && reflection_loss <= 1.0, "reflection_loss", "must be in (0, 1]");
    positive(power_floor_w, "power_floor_w");
    require(power_floor_w < per_ue_power_cap_w, "power_floor_w", "must be below per_ue_power_cap_w");
}

}  // namespace hapsris
