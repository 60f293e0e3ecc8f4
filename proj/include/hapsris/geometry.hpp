#pragma once

#include <cmath>

namespace hapsris {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double distance(const Vec3& a, const Vec3& b)
{
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

inline double ground_distance(const Vec3& a, const Vec3& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Elevation of `to` as seen from `from`, radians in [-pi/2, pi/2].
inline double elevation_angle(const Vec3& from, const Vec3& to)
{
    return std::atan2(to.z - from.z, ground_distance(from, to));
}

}  // namespace hapsris
