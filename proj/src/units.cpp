#include "hapsris/units.hpp"

namespace hapsris {

PowerW dbm_to_watts(Decibel dbm)
{
    if (!std::isfinite(dbm.value))
        throw std::domain_error("dbm_to_watts: non-finite input");
    return PowerW(std::pow(10.0, (dbm.value - 30.0) / 10.0));
}

Decibel watts_to_dbm(PowerW p)
{
    if (!(p.watts() > 0.0))
        throw std::domain_error("watts_to_dbm: power must be positive");
    return Decibel{10.0 * std::log10(p.watts()) + 30.0};
}

PowerW noise_power(const NoiseSpec& spec)
{
    return PowerW(spec.n0_w_per_hz * spec.bandwidth_hz);
}

}  // namespace hapsris
