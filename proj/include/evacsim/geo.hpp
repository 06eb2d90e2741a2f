#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace evacsim {

/// Mean Earth radius in kilometers, used for all great-circle distances.
inline constexpr double kEarthRadiusKm = 6371.0;

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Great-circle distance in kilometers between two points given in decimal
/// degrees (spherical law of haversines).
inline double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    const double phi1 = deg2rad(lat1);
    const double phi2 = deg2rad(lat2);
    const double u = std::sin((phi2 - phi1) / 2.0);
    const double v = std::sin(deg2rad(lon2 - lon1) / 2.0);
    const double h = u * u + std::cos(phi1) * std::cos(phi2) * v * v;
    // h can creep above 1 by rounding for near-antipodal pairs
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

inline double haversine_m(double lat1, double lon1, double lat2, double lon2) {
    return haversine_km(lat1, lon1, lat2, lon2) * 1000.0;
}

}  // namespace evacsim
