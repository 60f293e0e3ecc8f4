#include "hapsris/channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hapsris {

Decibel free_space_pl(double distance_m, double carrier_hz)
{
    if (!(distance_m > 0.0)) throw std::domain_error("free_space_pl: distance must be positive");
    if (!(carrier_hz > 0.0)) throw std::domain_error("free_space_pl: frequency must be positive");
    return Decibel{20.0 * std::log10(4.0 * std::numbers::pi * distance_m * carrier_hz / kSpeedOfLight)};
}

Decibel zenith_dry_air_attenuation(double carrier_hz)
{
    // GHz, dB. Oxygen-dominated zenith loss well below the 60 GHz line.
    static constexpr std::array<std::pair<double, double>, 8> table{{
        {1.0, 0.030}, {2.0, 0.035}, {4.0, 0.038}, {6.0, 0.040},
        {10.0, 0.045}, {15.0, 0.055}, {20.0, 0.075}, {30.0, 0.120},
    }};
    const double f = carrier_hz / 1e9;
    if (!(f >= table.front().first && f <= table.back().first))
        throw std::domain_error("zenith_dry_air_attenuation: frequency outside 1-30 GHz table");
    auto hi = std::lower_bound(table.begin(), table.end(), f, [](const auto& e, double v) { return e.first < v; });
    if (hi->first == f) return Decibel{hi->second};
    auto lo = hi - 1;
    const double w = (f - lo->first) / (hi->first - lo->first);
    return Decibel{lo->second + w * (hi->second - lo->second)};
}

Decibel atmospheric_attenuation(double elevation_rad, double carrier_hz)
{
    if (!(elevation_rad > 0.0) || elevation_rad > std::numbers::pi / 2 + 1e-12)
        throw std::domain_error("atmospheric_attenuation: elevation must be in (0, pi/2]");
    return Decibel{zenith_dry_air_attenuation(carrier_hz).value / std::sin(elevation_rad)};
}

Decibel haps_link_pl(const Vec3& ground, const Vec3& haps, double carrier_hz)
{
    const double d = distance(ground, haps);
    const double elev = elevation_angle(ground, haps);
    return Decibel{free_space_pl(d, carrier_hz).value + atmospheric_attenuation(elev, carrier_hz).value};
}

double uma_los_probability(double d)
{
    if (d <= 18.0) return 1.0;
    const double e = std::exp(-d / 63.0);
    return (18.0 / d) * (1.0 - e) + e;
}

Decibel uma_pathloss(double d3d, double carrier_hz, double ue_height_m, bool los)
{
    if (!(d3d > 0.0)) throw std::domain_error("uma_pathloss: distance must be positive");
    const double f_term = 20.0 * std::log10(carrier_hz / 1e9);
    const double pl_los = 28.0 + 22.0 * std::log10(d3d) + f_term;
    if (los) return Decibel{pl_los};
    const double pl_nlos = 13.54 + 39.08 * std::log10(d3d) + f_term - 0.6 * (ue_height_m - 1.5);
    return Decibel{std::max(pl_los, pl_nlos)};
}

Decibel terrestrial_pathloss_draw(const Vec3& bs, const Vec3& ue, const ScenarioConfig& config, std::mt19937_64& rng)
{
    const double d2d = std::max(ground_distance(bs, ue), 10.0);
    const double d3d = std::hypot(d2d, bs.z - ue.z);
    // Always consume one uniform and one normal so draws stay aligned across configs.
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
    const bool los = u < uma_los_probability(d2d);
    return Decibel{uma_pathloss(d3d, config.carrier_hz, ue.z, los).value + config.shadowing_sigma_db * z};
}

GainLinear terrestrial_gain(const Vec3& bs, const Vec3& ue, const ScenarioConfig& config, std::mt19937_64& rng)
{
    const double pl_db = terrestrial_pathloss_draw(bs, ue, config, rng).value;
    return GainLinear(config.bs_antenna_gain * config.ue_antenna_gain * db_to_linear(-pl_db));
}

double ChannelState::recomposition_error() const
{
    double worst = 0.0;
    for (std::size_t k = 0; k < haps_effective_gain_sq.size(); ++k) {
        const double expect = cs_antenna_gain.value() * ue_antenna_gain.value() * cs_haps_pl.value() *
                              haps_ue_pl[k].value();
        worst = std::max(worst, std::fabs(haps_effective_gain_sq[k].value() - expect) / expect);
    }
    return worst;
}

ChannelState effective_gain(const Scenario& scenario)
{
    const auto& cfg = scenario.config;
    ChannelState ch;
    ch.num_ues = static_cast<int>(scenario.ue_positions.size());
    ch.num_bs = static_cast<int>(scenario.bs_positions.size());
    ch.cs_antenna_gain = GainLinear(cfg.cs_antenna_gain);
    ch.ue_antenna_gain = GainLinear(cfg.ue_antenna_gain);

    auto rng = make_rng(cfg.rng_seed, 1);
    ch.terrestrial_gain.reserve(static_cast<std::size_t>(ch.num_ues) * ch.num_bs);
    for (const auto& ue : scenario.ue_positions)
        for (const auto& bs : scenario.bs_positions) ch.terrestrial_gain.push_back(terrestrial_gain(bs, ue, cfg, rng));

    const double cs_pl_db = haps_link_pl(scenario.cs_position, scenario.haps_position, cfg.carrier_hz).value;
    ch.cs_haps_pl = GainLinear(db_to_linear(-cs_pl_db));
    const double antennas_db = linear_to_db(cfg.cs_antenna_gain) + linear_to_db(cfg.ue_antenna_gain);
    for (const auto& ue : scenario.ue_positions) {
        const double ue_pl_db = haps_link_pl(ue, scenario.haps_position, cfg.carrier_hz).value;
        ch.haps_ue_pl.emplace_back(db_to_linear(-ue_pl_db));
        ch.haps_effective_gain_sq.emplace_back(db_to_linear(antennas_db - cs_pl_db - ue_pl_db));
    }
    return ch;
}

double wrap_phase(double phase)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(phase, two_pi);
    if (r < 0.0) r += two_pi;
    return r >= two_pi ? 0.0 : r;
}

double aligned_phase(double incident, double departure) { return wrap_phase(incident + departure); }

double quantize_phase(double phase, int bits)
{
    if (bits < 1 || bits > 30) throw std::domain_error("quantize_phase: bits must be in [1, 30]");
    const double levels = std::ldexp(1.0, bits);
    const double step = 2.0 * std::numbers::pi / levels;
    double idx = std::nearbyint(wrap_phase(phase) / step);
    if (idx >= levels) idx = 0.0;
    return idx * step;
}

void RisPhaseConfig::validate() const
{
    const auto n = unit_phases.size();
    if (incident_phases.size() != n || departure_phases.size() != n)
        throw std::invalid_argument("RisPhaseConfig: phase lists must have equal length");
    if (!unit_reflection.empty() && unit_reflection.size() != n)
        throw std::invalid_argument("RisPhaseConfig: per-unit reflection list has wrong length");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (const auto* list : {&unit_phases, &incident_phases, &departure_phases})
        for (double p : *list)
            if (!(p >= 0.0 && p < two_pi)) throw std::invalid_argument("RisPhaseConfig: phase outside [0, 2 pi)");
    auto rho_ok = [](double r) { return r > 0.0 && r <= 1.0; };
    if (!rho_ok(reflection_loss)) throw std::invalid_argument("RisPhaseConfig: reflection loss outside (0, 1]");
    for (double r : unit_reflection)
        if (!rho_ok(r)) throw std::invalid_argument("RisPhaseConfig: reflection loss outside (0, 1]");
    if (bits < 1) throw std::invalid_argument("RisPhaseConfig: bits must be >= 1");
}

std::complex<double> reflection_gain(const RisPhaseConfig& cfg)
{
    cfg.validate();
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t i = 0; i < cfg.unit_phases.size(); ++i) {
        const double rho = cfg.unit_reflection.empty() ? cfg.reflection_loss : cfg.unit_reflection[i];
        const double residual = cfg.unit_phases[i] - cfg.incident_phases[i] - cfg.departure_phases[i];
        sum += std::polar(rho, -residual);
    }
    return sum;
}

double snr(PowerW p_tx, GainLinear h_sq, double phi_mag, const NoiseSpec& noise)
{
    return p_tx.watts() * h_sq.value() * phi_mag * phi_mag / noise_power(noise).watts();
}

double rate(double snr_linear, double bandwidth_hz)
{
    if (snr_linear < 0.0) throw std::domain_error("rate: negative SNR");
    return bandwidth_hz * std::log2(1.0 + snr_linear);
}

}  // namespace hapsris
