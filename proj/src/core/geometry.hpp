// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace uhn {

/// A node position: horizontal coordinates in km, height in m.
struct Point3 {
    double x_km = 0.0;
    double y_km = 0.0;
    double z_m = 0.0;
};

/// Rectangular simulation area with the origin at a corner.
struct SimRegion {
    double width_km = 10.0;
    double height_km = 10.0;

    double area_km2() const { return width_km * height_km; }
    bool contains(double x_km, double y_km) const {
        return x_km >= 0.0 && x_km <= width_km && y_km >= 0.0 && y_km <= height_km;
    }
};

/// Squared horizontal distance in km^2.
inline double horizontal_dist2_km2(const Point3& a, const Point3& b) {
    const double dx = a.x_km - b.x_km;
    const double dy = a.y_km - b.y_km;
    return dx * dx + dy * dy;
}

inline double horizontal_dist_m(const Point3& a, const Point3& b) {
    return std::sqrt(horizontal_dist2_km2(a, b)) * 1000.0;
}

/// Squared 3-D Euclidean distance in m^2.
inline double dist2_m2(const Point3& a, const Point3& b) {
    const double dx = (a.x_km - b.x_km) * 1000.0;
    const double dy = (a.y_km - b.y_km) * 1000.0;
    const double dz = a.z_m - b.z_m;
    return dx * dx + dy * dy + dz * dz;
}

inline double dist3_m(const Point3& a, const Point3& b) {
    return std::sqrt(dist2_m2(a, b));
}

}  // namespace uhn
