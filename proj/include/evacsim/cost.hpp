#pragma once

#include "evacsim/errors.hpp"
#include "evacsim/matrix.hpp"
#include "evacsim/travel.hpp"

namespace evacsim {

struct CostParams {
    double walking_speed_kmh = 5.0;         // s
    double disruption_horizon_min = 30.0;   // T_lm; entries above it become unreachable
};

/// Fused evacuation cost matrix, minutes. Zero diagonal; every finite
/// off-diagonal entry is <= the disruption horizon it was built with.
struct CostMatrix {
    SquareMatrix values;
};

/// Element-level fusion of connectivity, walking distance and train time:
/// connected pairs cost their train travel time, unconnected pairs cost
/// their walking time (km / walking speed, in minutes). Any entry above the
/// disruption horizon is replaced by kUnreachable; the diagonal is zeroed
/// last.
inline CostMatrix fuse_cost(const SquareMatrix& connectivity, const SquareMatrix& distance_km,
                            const TrainTimeMatrix& train, const CostParams& params = {}) {
    if (params.walking_speed_kmh <= 0.0) throw ContractError("walking_speed_kmh must be > 0");
    if (!(params.disruption_horizon_min > 0.0))
        throw ContractError("disruption_horizon_min must be > 0");
    require_same_size(connectivity, distance_km, "fuse_cost");
    require_same_size(connectivity, train.values, "fuse_cost");

    const std::size_t n = connectivity.size();
    SquareMatrix out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v;
            if (connectivity(i, j) != 0.0) {
                v = train.values(i, j);
            } else {
                v = distance_km(i, j) / params.walking_speed_kmh * 60.0;
            }
            if (v > params.disruption_horizon_min) v = kUnreachable;
            out(i, j) = v;
        }
        out(i, i) = 0.0;
    }
    return CostMatrix{std::move(out)};
}

}  // namespace evacsim
