#pragma once

#include <cmath>
#include <stdexcept>

namespace hapsris {

/// Transmit or consumed power in watts. Always finite and nonnegative.
class PowerW {
public:
    constexpr PowerW() = default;
    explicit PowerW(double watts) : value_(watts)
    {
        if (!std::isfinite(watts) || watts < 0.0)
            throw std::domain_error("PowerW: value must be finite and nonnegative");
    }
    double watts() const { return value_; }

    friend PowerW operator+(PowerW a, PowerW b) { return PowerW(a.value_ + b.value_); }
    friend PowerW operator*(PowerW a, double s) { return PowerW(a.value_ * s); }
    friend auto operator<=>(const PowerW&, const PowerW&) = default;

private:
    double value_ = 0.0;
};

/// Dimensionless linear power ratio (antenna gain, inverse path loss, |h|^2).
class GainLinear {
public:
    constexpr GainLinear() = default;
    explicit GainLinear(double ratio) : value_(ratio)
    {
        if (!std::isfinite(ratio) || ratio < 0.0)
            throw std::domain_error("GainLinear: value must be finite and nonnegative");
    }
    double value() const { return value_; }

    friend GainLinear operator*(GainLinear a, GainLinear b) { return GainLinear(a.value_ * b.value_); }
    friend auto operator<=>(const GainLinear&, const GainLinear&) = default;

private:
    double value_ = 1.0;
};

/// Logarithmic quantity. Whether it is dB, dBi or dBm is carried by the function using it.
struct Decibel {
    double value = 0.0;
};

/// Thermal noise: power spectral density (W/Hz) over a bandwidth (Hz).
struct NoiseSpec {
    double n0_w_per_hz;
    double bandwidth_hz;

    NoiseSpec(double n0, double bandwidth) : n0_w_per_hz(n0), bandwidth_hz(bandwidth)
    {
        if (!(n0 > 0.0) || !(bandwidth > 0.0) || !std::isfinite(n0) || !std::isfinite(bandwidth))
            throw std::domain_error("NoiseSpec: n0 and bandwidth must be positive");
    }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double ratio)
{
    if (!(ratio > 0.0))
        throw std::domain_error("linear_to_db: ratio must be positive");
    return 10.0 * std::log10(ratio);
}

inline GainLinear gain_from_db(Decibel g) { return GainLinear(db_to_linear(g.value)); }
inline Decibel gain_to_db(GainLinear g) { return Decibel{linear_to_db(g.value())}; }

PowerW dbm_to_watts(Decibel dbm);

/// Throws std::domain_error for p <= 0.
Decibel watts_to_dbm(PowerW p);

/// N0 * B.
PowerW noise_power(const NoiseSpec& spec);

}  // namespace hapsris
