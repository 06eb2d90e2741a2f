#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "evacsim/cost.hpp"
#include "evacsim/errors.hpp"
#include "evacsim/matrix.hpp"

namespace evacsim {

/// A reduced instance over the blocked stations and their cheapest reachable
/// candidates. `selected` maps local indices back to full-network indices:
/// blocked stations first, then candidates, each group in ascending index
/// order. Local matrices/vectors are consistent slices of the full ones.
struct Subproblem {
    std::vector<int> selected;
    SquareMatrix local_cost;
    std::vector<double> local_demand;
    std::vector<std::uint8_t> local_blocked;
    std::vector<std::string> warnings;

    std::size_t size() const { return selected.size(); }
};

/// k-nearest-nodes sampling: for each blocked station, rank the unblocked
/// stations by evacuation cost (unreachable excluded) and keep the k
/// cheapest; the subproblem is the union over all blocked stations, so spare
/// capacity shared between them is counted once. Ties at the k-th rank break
/// toward the lower station index. A blocked station with fewer than k
/// reachable candidates degrades to all of them with a warning; one with
/// none at all is an isolation error.
inline Subproblem k_nearest_subproblem(const CostMatrix& cost, const std::vector<double>& demand,
                                       const std::vector<std::uint8_t>& blocked, int k) {
    const std::size_t n = cost.values.size();
    if (k < 1) throw ContractError("k must be >= 1");
    if (demand.size() != n || blocked.size() != n)
        throw ContractError("k_nearest_subproblem: demand/blocked size does not match cost matrix");

    std::vector<int> blocked_idx;
    for (std::size_t i = 0; i < n; ++i) {
        if (blocked[i]) blocked_idx.push_back(static_cast<int>(i));
    }
    if (blocked_idx.empty()) throw ContractError("k_nearest_subproblem: no blocked station");

    std::vector<std::uint8_t> chosen(n, 0);
    std::vector<std::string> warnings;
    std::vector<std::pair<double, int>> ranked;
    for (int b : blocked_idx) {
        ranked.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (blocked[j]) continue;
            const double c = cost.values(b, j);
            if (std::isinf(c)) continue;
            ranked.emplace_back(c, static_cast<int>(j));
        }
        if (ranked.empty()) {
            throw IsolationError(b, "blocked station at index " + std::to_string(b) +
                                        " has no reachable unblocked station");
        }
        if (static_cast<int>(ranked.size()) < k) {
            warnings.push_back("blocked station at index " + std::to_string(b) + " has only " +
                               std::to_string(ranked.size()) + " reachable candidates (k=" +
                               std::to_string(k) + "); using all of them");
        }
        const std::size_t take = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(k));
        std::partial_sort(ranked.begin(), ranked.begin() + take, ranked.end());
        for (std::size_t r = 0; r < take; ++r) chosen[ranked[r].second] = 1;
    }

    Subproblem sub;
    sub.warnings = std::move(warnings);
    sub.selected = blocked_idx;
    for (std::size_t j = 0; j < n; ++j) {
        if (chosen[j]) sub.selected.push_back(static_cast<int>(j));
    }

    const std::size_t m = sub.selected.size();
    sub.local_cost = SquareMatrix(m, 0.0);
    sub.local_demand.resize(m);
    sub.local_blocked.resize(m);
    for (std::size_t a = 0; a < m; ++a) {
        const int fa = sub.selected[a];
        sub.local_demand[a] = demand[fa];
        sub.local_blocked[a] = blocked[fa];
        for (std::size_t b = 0; b < m; ++b) {
            sub.local_cost(a, b) = cost.values(fa, sub.selected[b]);
        }
    }
    return sub;
}

/// Places a local flow matrix back into the full n x n frame; entries outside
/// the selected set stay zero.
inline SquareMatrix embed_flow(const Subproblem& sub, const SquareMatrix& local_flow,
                               std::size_t full_n) {
    if (local_flow.size() != sub.size())
        throw ContractError("embed_flow: local flow does not match subproblem size");
    SquareMatrix full(full_n, 0.0);
    for (std::size_t a = 0; a < sub.size(); ++a) {
        for (std::size_t b = 0; b < sub.size(); ++b) {
            const double f = local_flow(a, b);
            if (f != 0.0) full(sub.selected[a], sub.selected[b]) = f;
        }
    }
    return full;
}

}  // namespace evacsim
