#pragma once

#include <complex>
#include <random>
#include <vector>

#include "hapsris/scenario.hpp"
#include "hapsris/units.hpp"

namespace hapsris {

inline constexpr double kSpeedOfLight = 299'792'458.0;

// --- propagation -----------------------------------------------------------

/// 20 log10(4 pi d f / c). Requires d > 0.
Decibel free_space_pl(double distance_m, double carrier_hz);

/// Zenith dry-air attenuation for the mean annual global reference atmosphere,
/// linearly interpolated over a built-in table (1-30 GHz).
Decibel zenith_dry_air_attenuation(double carrier_hz);

/// Zenith attenuation scaled by 1/sin(elevation). Elevation must be in (0, pi/2].
Decibel atmospheric_attenuation(double elevation_rad, double carrier_hz);

/// Line-of-sight HAPS <-> ground loss: FSPL over the slant range plus gas attenuation.
Decibel haps_link_pl(const Vec3& ground, const Vec3& haps, double carrier_hz);

/// Urban-macro LOS probability at 2D distance d (metres).
double uma_los_probability(double distance_2d_m);

/// Urban-macro path loss without shadowing. d3d in metres, h_ue in metres.
Decibel uma_pathloss(double distance_3d_m, double carrier_hz, double ue_height_m, bool los);

/// One random draw of the BS->UE path loss in dB: LOS state then lognormal
/// shadowing. 2D distances below 10 m are clamped to 10 m.
Decibel terrestrial_pathloss_draw(const Vec3& bs, const Vec3& ue, const ScenarioConfig& config,
                                  std::mt19937_64& rng);

/// Antenna gains over one path-loss draw.
GainLinear terrestrial_gain(const Vec3& bs, const Vec3& ue, const ScenarioConfig& config, std::mt19937_64& rng);

// --- channel state ----------------------------------------------------------

struct ChannelState {
    int num_ues = 0;
    int num_bs = 0;
    /// Row-major K x L, antenna gains and shadowing included.
    std::vector<GainLinear> terrestrial_gain;
    /// |h_k|^2 for every UE (only the stranded ones are consumed).
    std::vector<GainLinear> haps_effective_gain_sq;
    /// 1 / PL for the CS -> HAPS hop.
    GainLinear cs_haps_pl;
    /// 1 / PL for each HAPS -> UE hop.
    std::vector<GainLinear> haps_ue_pl;
    GainLinear cs_antenna_gain;
    GainLinear ue_antenna_gain;

    GainLinear terrestrial(int ue, int bs) const { return terrestrial_gain[static_cast<std::size_t>(ue) * num_bs + bs]; }

    /// Largest relative deviation of |h_k|^2 from G_cs G_r / (PL_cs PL_k).
    double recomposition_error() const;
};

/// Fills every gain for a scenario. Terrestrial draws use RNG stream 1 of the
/// scenario seed so UE placement and fading are independent.
ChannelState effective_gain(const Scenario& scenario);

// --- RIS reflection -----------------------------------------------------------

struct RisPhaseConfig {
    std::vector<double> unit_phases;       ///< applied phase shift per unit
    std::vector<double> incident_phases;   ///< CS -> unit phase
    std::vector<double> departure_phases;  ///< unit -> UE phase
    std::vector<double> unit_reflection;   ///< per-unit rho; empty means `reflection_loss` for all
    double reflection_loss = 1.0;
    int bits = 1;

    /// Sizes agree, phases in [0, 2 pi), rho in (0, 1].
    void validate() const;
};

/// Sum over units of rho_i exp(-j (phi_i - theta_i - theta_ik)).
std::complex<double> reflection_gain(const RisPhaseConfig& cfg);

/// Nearest point of {0, d, ..., (2^bits - 1) d}, d = 2 pi / 2^bits.
double quantize_phase(double phase, int bits);

/// Phase that cancels the incident and departure phases exactly, wrapped to [0, 2 pi).
double aligned_phase(double incident, double departure);

/// Wrap to [0, 2 pi).
double wrap_phase(double phase);

// --- link quality -----------------------------------------------------------

/// p |h|^2 |Phi|^2 / (N0 B).
double snr(PowerW p_tx, GainLinear h_sq, double phi_mag, const NoiseSpec& noise);

/// B log2(1 + snr).
double rate(double snr_linear, double bandwidth_hz);

}  // namespace hapsris
