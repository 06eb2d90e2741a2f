// Adapter from a disruption scenario to the dense-simplex oracle: builds the
// transportation LP (one variable per finite blocked-to-unblocked arc) and
// returns the optimal total transport cost, or nullopt when infeasible.
#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "evacsim/cost.hpp"
#include "evacsim/solver.hpp"
#include "oracle_simplex.hpp"

namespace oracle {

inline std::optional<double> transport_optimum(const evacsim::CostMatrix& cost,
                                               const evacsim::Scenario& sc) {
    const std::size_t n = cost.values.size();
    std::vector<int> sources, sinks;
    for (std::size_t i = 0; i < n; ++i) {
        if (sc.blocked[i]) {
            sources.push_back(static_cast<int>(i));
        } else if (sc.spare_capacity(i) > 0.0) {
            sinks.push_back(static_cast<int>(i));
        }
    }
    std::vector<std::pair<int, int>> vars;  // (source slot, sink slot)
    std::vector<double> costs;
    for (std::size_t a = 0; a < sources.size(); ++a) {
        for (std::size_t b = 0; b < sinks.size(); ++b) {
            const double c = cost.values(sources[a], sinks[b]);
            if (!std::isfinite(c)) continue;
            vars.emplace_back(static_cast<int>(a), static_cast<int>(b));
            costs.push_back(c);
        }
    }
    std::vector<std::vector<double>> a_eq(sources.size(), std::vector<double>(vars.size(), 0.0));
    std::vector<double> b_eq;
    for (std::size_t a = 0; a < sources.size(); ++a) b_eq.push_back(sc.demand[sources[a]]);
    std::vector<std::vector<double>> a_ub(sinks.size(), std::vector<double>(vars.size(), 0.0));
    std::vector<double> b_ub;
    for (std::size_t b = 0; b < sinks.size(); ++b) b_ub.push_back(sc.spare_capacity(sinks[b]));
    for (std::size_t v = 0; v < vars.size(); ++v) {
        a_eq[vars[v].first][v] = 1.0;
        a_ub[vars[v].second][v] = 1.0;
    }
    DenseSimplex lp(std::move(a_eq), std::move(b_eq), std::move(a_ub), std::move(b_ub),
                    std::move(costs));
    const auto solution = lp.solve();
    if (!solution) return std::nullopt;
    return solution->objective;
}

/// Total transport cost realized by a plan.
inline double transport_cost_of(const evacsim::CostMatrix& cost,
                                const evacsim::EvacuationPlan& plan) {
    double total = 0.0;
    for (std::size_t i = 0; i < plan.flow.size(); ++i) {
        for (std::size_t j = 0; j < plan.flow.size(); ++j) {
            if (plan.flow(i, j) > 0.0) total += cost.values(i, j) * plan.flow(i, j);
        }
    }
    return total;
}

}  // namespace oracle
