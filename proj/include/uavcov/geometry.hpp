#pragma once

#include <cmath>

namespace uavcov {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;
};

inline bool is_finite(const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

// Leg metric used throughout: 3D Euclidean by default, horizontal-only
// when the 2D sensitivity switch is active.
enum class DistanceMode {
    Euclid3d,
    Horizontal2d,
};

inline double leg_distance(const Point3& a, const Point3& b,
                           DistanceMode mode = DistanceMode::Euclid3d) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    if (mode == DistanceMode::Horizontal2d) {
        return std::hypot(dx, dy);
    }
    return std::sqrt(dx * dx + dy * dy + (a.z - b.z) * (a.z - b.z));
}

inline double horizontal_distance(const Point3& a, const Point3& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

} // namespace uavcov
