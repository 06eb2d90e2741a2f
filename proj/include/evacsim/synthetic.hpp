#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "evacsim/geo.hpp"
#include "evacsim/network.hpp"

namespace evacsim {

/// Parameters of the bundled synthetic network: a grid of east-west lines
/// with interchange edges between neighboring rows, small coordinate jitter
/// so no two edge weights tie, and log-normal daily passenger counts.
struct SyntheticParams {
    int rows = 25;
    int cols = 40;
    double origin_lat = 35.60;
    double origin_lon = 139.60;
    double row_spacing_km = 0.35;
    double col_spacing_km = 0.35;
    double jitter_km = 0.02;
    double passengers_log_mean = 9.9;   // exp(9.9) ~ 20k persons/day
    double passengers_log_sigma = 0.8;
    std::uint64_t seed = 1;
};

namespace detail {

// The standard library distributions are not bit-stable across
// implementations; these are, given the standardized mt19937_64 stream.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double standard_normal(std::mt19937_64& rng) {
    double u = uniform01(rng);
    while (u == 0.0) u = uniform01(rng);
    const double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace detail

/// Deterministic synthetic railway network (~rows*cols stations). Stations
/// on row r share line "L<r>"; column edges connect neighboring rows, so
/// every vertical hop is a line change.
inline NetworkModel synthetic_network(const SyntheticParams& p = {}) {
    std::mt19937_64 rng(p.seed);
    const double deg_per_km_lat = 180.0 / (std::numbers::pi * kEarthRadiusKm);
    const double deg_per_km_lon = deg_per_km_lat / std::cos(deg2rad(p.origin_lat));

    std::vector<Station> stations;
    stations.reserve(static_cast<std::size_t>(p.rows) * p.cols);
    char buf[64];
    for (int r = 0; r < p.rows; ++r) {
        for (int c = 0; c < p.cols; ++c) {
            Station s;
            std::snprintf(buf, sizeof(buf), "S%04d", r * p.cols + c);
            s.id = buf;
            std::snprintf(buf, sizeof(buf), "Station %d-%d", r, c);
            s.name = buf;
            const double jitter_lat = (detail::uniform01(rng) * 2.0 - 1.0) * p.jitter_km;
            const double jitter_lon = (detail::uniform01(rng) * 2.0 - 1.0) * p.jitter_km;
            s.lat = p.origin_lat + (r * p.row_spacing_km + jitter_lat) * deg_per_km_lat;
            s.lon = p.origin_lon + (c * p.col_spacing_km + jitter_lon) * deg_per_km_lon;
            std::snprintf(buf, sizeof(buf), "L%02d", r);
            s.line_id = buf;
            std::snprintf(buf, sizeof(buf), "OP%d", r / 5);
            s.operator_id = buf;
            const double z = detail::standard_normal(rng);
            s.daily_passengers =
                std::max(1.0, std::round(std::exp(p.passengers_log_mean +
                                                  p.passengers_log_sigma * z)));
            stations.push_back(std::move(s));
        }
    }

    std::vector<std::pair<int, int>> edges;
    const auto at = [&](int r, int c) { return r * p.cols + c; };
    for (int r = 0; r < p.rows; ++r) {
        for (int c = 0; c + 1 < p.cols; ++c) edges.emplace_back(at(r, c), at(r, c + 1));
    }
    for (int r = 0; r + 1 < p.rows; ++r) {
        for (int c = 0; c < p.cols; ++c) edges.emplace_back(at(r, c), at(r + 1, c));
    }
    return NetworkModel(std::move(stations), std::move(edges));
}

}  // namespace evacsim
