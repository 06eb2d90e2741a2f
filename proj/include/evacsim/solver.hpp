#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "evacsim/cost.hpp"
#include "evacsim/errors.hpp"
#include "evacsim/matrix.hpp"
#include "evacsim/network.hpp"

namespace evacsim {

/// Epsilon of the reported objective value, guarding the division when no
/// passenger moves. It never changes the argmin: under the conservation
/// constraint the denominator is the (constant) total blocked demand.
inline constexpr double kObjectiveEpsilon = 1e-6;

/// One disruption instance over a network.
struct Scenario {
    std::vector<std::uint8_t> blocked;   // J: 1 blocked, 0 normal
    std::vector<double> demand;          // Y: persons per station in the window
    std::vector<double> capacity_ratio;  // X: max occupancy multiplier, >= 1
    double horizon_min = 30.0;           // T_lm

    /// Spare room at station j: (X_j - 1) * Y_j.
    double spare_capacity(std::size_t j) const {
        return (capacity_ratio[j] - 1.0) * demand[j];
    }
};

inline std::vector<double> broadcast_ratio(double x, std::size_t n) {
    return std::vector<double>(n, x);
}

/// Optimized evacuation assignment. flow(i, j) is the passenger count moved
/// from station i to station j.
struct EvacuationPlan {
    SquareMatrix flow;
    double objective_att = 0.0;   // sum(cost * flow) / (sum(flow) + epsilon)
    double total_epf = 0.0;       // sum(flow)
    std::vector<double> inflow;   // column sums
    bool feasible = false;
    std::string diagnostic;
};

/// One failed constraint check, in persons.
struct Violation {
    std::string constraint;  // conservation | capacity | diagonal | direction | support
    int i = -1;
    int j = -1;
    double magnitude = 0.0;
    std::string detail;
};

namespace detail {

inline void check_scenario(const CostMatrix& cost, const Scenario& sc) {
    const std::size_t n = cost.values.size();
    if (sc.blocked.size() != n || sc.demand.size() != n || sc.capacity_ratio.size() != n)
        throw ContractError("scenario vectors do not match cost matrix dimension");
    if (!(sc.horizon_min > 0.0)) throw ContractError("horizon_min must be > 0");
    bool any_blocked = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (sc.blocked[i]) any_blocked = true;
        if (sc.demand[i] < 0.0)
            throw ContractError("negative demand at index " + std::to_string(i));
        if (sc.capacity_ratio[i] < 1.0)
            throw ContractError("capacity_ratio < 1 at index " + std::to_string(i));
    }
    if (!any_blocked) throw ContractError("scenario has no blocked station");
}

// Successive shortest paths with node potentials on real-valued capacities.
// Arc costs are non-negative, so zero initial potentials are valid; after
// each augmentation the potentials keep all reduced costs non-negative.
class MinCostFlow {
  public:
    explicit MinCostFlow(int node_count) : out_(node_count) {}

    int add_arc(int from, int to, double capacity, double cost) {
        const int handle = static_cast<int>(arcs_.size());
        out_[from].push_back(handle);
        arcs_.push_back({to, capacity, cost});
        out_[to].push_back(handle + 1);
        arcs_.push_back({from, 0.0, -cost});
        if (std::isfinite(capacity)) scale_ = std::max(scale_, capacity);
        return handle;
    }

    /// Ships as much as possible from source to sink along cheapest paths.
    /// Returns the total amount shipped.
    double run(int source, int sink) {
        const int n = static_cast<int>(out_.size());
        const double cap_eps = 1e-12 * std::max(1.0, scale_);
        std::vector<double> potential(n, 0.0), dist(n);
        std::vector<int> via(n);
        std::vector<std::uint8_t> visited(n);
        double shipped = 0.0;

        // Each round strictly increases the flow and zeroes at least one
        // residual exactly; the guard only trips on internal failure.
        const long max_rounds = 16L * static_cast<long>(arcs_.size() + n) + 1024;
        for (long round = 0;; ++round) {
            if (round >= max_rounds) throw Error("min-cost flow failed to converge");
            std::fill(dist.begin(), dist.end(), kUnreachable);
            std::fill(visited.begin(), visited.end(), 0);
            dist[source] = 0.0;
            using Entry = std::pair<double, int>;
            std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
            queue.push({0.0, source});
            while (!queue.empty()) {
                auto [d, u] = queue.top();
                queue.pop();
                if (visited[u]) continue;
                visited[u] = 1;
                for (int handle : out_[u]) {
                    const Arc& arc = arcs_[handle];
                    if (arc.capacity <= cap_eps || visited[arc.to]) continue;
                    const double reduced =
                        std::max(0.0, arc.cost + potential[u] - potential[arc.to]);
                    if (d + reduced < dist[arc.to]) {
                        dist[arc.to] = d + reduced;
                        via[arc.to] = handle;
                        queue.push({d + reduced, arc.to});
                    }
                }
            }
            if (!visited[sink]) break;
            for (int v = 0; v < n; ++v) {
                if (visited[v]) potential[v] += dist[v];
            }
            double bottleneck = kUnreachable;
            for (int v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
                bottleneck = std::min(bottleneck, arcs_[via[v]].capacity);
            }
            if (!(bottleneck > cap_eps)) break;
            for (int v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
                arcs_[via[v]].capacity -= bottleneck;
                arcs_[via[v] ^ 1].capacity += bottleneck;
            }
            shipped += bottleneck;
        }
        return shipped;
    }

    /// Flow pushed through a forward arc, read off its reverse capacity.
    double flow_on(int handle) const { return arcs_[handle ^ 1].capacity; }

  private:
    struct Arc {
        int to;
        double capacity;
        double cost;
    };
    std::vector<Arc> arcs_;  // forward arcs at even indices, reverse at odd
    std::vector<std::vector<int>> out_;
    double scale_ = 1.0;
};

}  // namespace detail

/// Derives the plan's reported fields from a flow matrix. Does not solve and
/// does not judge feasibility; callers set `feasible` themselves.
inline EvacuationPlan make_plan_from_flow(const CostMatrix& cost, SquareMatrix flow) {
    require_same_size(cost.values, flow, "make_plan_from_flow");
    const std::size_t n = flow.size();
    EvacuationPlan plan;
    plan.inflow.assign(n, 0.0);
    double sum_cost_flow = 0.0;
    double sum_flow = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double f = flow(i, j);
            if (f == 0.0) continue;
            sum_flow += f;
            plan.inflow[j] += f;
            const double c = cost.values(i, j);
            if (std::isfinite(c)) sum_cost_flow += c * f;
        }
    }
    plan.flow = std::move(flow);
    plan.total_epf = sum_flow;
    plan.objective_att = sum_cost_flow / (sum_flow + kObjectiveEpsilon);
    return plan;
}

/// Solves the evacuation assignment: minimize the average per-passenger
/// travel cost subject to conservation (all blocked demand leaves), spare
/// capacity at unblocked stations, no self-flow, and the blocked/unblocked
/// direction rules. Under conservation the total flow is constant, so the
/// fractional objective reduces to a linear transportation problem, solved
/// exactly on the bipartite blocked-to-unblocked graph over finite-cost arcs.
///
/// Throws IsolationError if some blocked station has no reachable unblocked
/// station, and InfeasibleError (with the shortfall in persons) if demand
/// exceeds what the reachable spare capacity can absorb.
inline EvacuationPlan solve(const CostMatrix& cost, const Scenario& scenario) {
    detail::check_scenario(cost, scenario);
    const std::size_t n = cost.values.size();

    std::vector<int> sources, sinks;
    for (std::size_t i = 0; i < n; ++i) {
        if (scenario.blocked[i]) sources.push_back(static_cast<int>(i));
    }
    std::vector<std::uint8_t> reachable(n, 0);
    for (int b : sources) {
        bool any = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (scenario.blocked[j]) continue;
            if (std::isfinite(cost.values(b, j))) {
                any = true;
                reachable[j] = 1;
            }
        }
        if (!any) {
            throw IsolationError(b, "blocked station at index " + std::to_string(b) +
                                        " has no reachable unblocked station");
        }
    }

    double total_demand = 0.0;
    for (int b : sources) total_demand += scenario.demand[b];
    double total_spare = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!reachable[j]) continue;
        const double spare = scenario.spare_capacity(j);
        if (spare > 0.0) {
            sinks.push_back(static_cast<int>(j));
            total_spare += spare;
        }
    }
    const double feas_tol = 1e-9 * std::max(1.0, total_demand);
    if (total_demand > total_spare + feas_tol) {
        const double shortfall = total_demand - total_spare;
        throw InfeasibleError(shortfall,
                              "blocked demand exceeds reachable spare capacity by " +
                                  std::to_string(shortfall) + " persons");
    }

    const int s_count = static_cast<int>(sources.size());
    const int t_count = static_cast<int>(sinks.size());
    const int super_source = 0;
    const int super_sink = 1 + s_count + t_count;
    detail::MinCostFlow mcf(super_sink + 1);
    for (int a = 0; a < s_count; ++a) {
        mcf.add_arc(super_source, 1 + a, scenario.demand[sources[a]], 0.0);
    }
    std::vector<std::tuple<int, int, int>> middle;  // handle, origin, destination
    for (int a = 0; a < s_count; ++a) {
        for (int b = 0; b < t_count; ++b) {
            const double c = cost.values(sources[a], sinks[b]);
            if (!std::isfinite(c)) continue;
            middle.emplace_back(mcf.add_arc(1 + a, 1 + s_count + b, kUnreachable, c),
                                sources[a], sinks[b]);
        }
    }
    for (int b = 0; b < t_count; ++b) {
        mcf.add_arc(1 + s_count + b, super_sink, scenario.spare_capacity(sinks[b]), 0.0);
    }

    const double shipped = mcf.run(super_source, super_sink);
    if (total_demand - shipped > feas_tol) {
        const double shortfall = total_demand - shipped;
        throw InfeasibleError(shortfall, "no assignment absorbs all blocked demand; " +
                                             std::to_string(shortfall) + " persons unplaced");
    }

    SquareMatrix flow(n, 0.0);
    for (auto [handle, origin, destination] : middle) {
        const double f = mcf.flow_on(handle);
        if (f > 0.0) flow(origin, destination) = f;
    }
    EvacuationPlan plan = make_plan_from_flow(cost, std::move(flow));
    plan.feasible = true;
    plan.diagnostic = "optimal";
    return plan;
}

/// Scales daily passenger counts down to a disruption window, or returns the
/// override verbatim when one is supplied.
inline std::vector<double> sample_demand(
    const NetworkModel& net, double window_minutes, double operating_minutes_per_day = 1080.0,
    const std::optional<std::vector<double>>& override_counts = std::nullopt) {
    if (!(window_minutes > 0.0)) throw ContractError("window_minutes must be > 0");
    if (!(operating_minutes_per_day > 0.0))
        throw ContractError("operating_minutes_per_day must be > 0");
    if (override_counts) {
        if (override_counts->size() != net.size())
            throw ContractError("demand override length " + std::to_string(override_counts->size()) +
                                " does not match station count " + std::to_string(net.size()));
        return *override_counts;
    }
    std::vector<double> demand(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        demand[i] = net.station(i).daily_passengers * window_minutes / operating_minutes_per_day;
    }
    return demand;
}

/// Independent constraint checker. Returns one report per violated
/// constraint instance; empty means the plan satisfies every invariant at
/// tolerance 1e-6 relative (1e-9 absolute floor).
inline std::vector<Violation> validate_plan(const CostMatrix& cost, const Scenario& scenario,
                                            const EvacuationPlan& plan) {
    detail::check_scenario(cost, scenario);
    require_same_size(cost.values, plan.flow, "validate_plan");
    const std::size_t n = plan.flow.size();
    constexpr double kZeroTol = 1e-9;
    const auto rel_tol = [](double reference) { return 1e-6 * std::max(1.0, reference); };

    std::vector<Violation> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double diag = plan.flow(i, i);
        if (std::abs(diag) > kZeroTol) {
            out.push_back({"diagonal", static_cast<int>(i), static_cast<int>(i), std::abs(diag),
                           "self-flow must be zero"});
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double f = plan.flow(i, j);
            if (f < -kZeroTol) {
                out.push_back({"direction", static_cast<int>(i), static_cast<int>(j), -f,
                               "negative flow"});
            }
            if (i == j) continue;
            if (!scenario.blocked[i] && std::abs(f) > kZeroTol) {
                out.push_back({"direction", static_cast<int>(i), static_cast<int>(j), std::abs(f),
                               "outflow from unblocked station"});
            }
            if (scenario.blocked[j] && std::abs(f) > kZeroTol) {
                out.push_back({"direction", static_cast<int>(i), static_cast<int>(j), std::abs(f),
                               "inflow to blocked station"});
            }
            if (f > kZeroTol && !std::isfinite(cost.values(i, j))) {
                out.push_back({"support", static_cast<int>(i), static_cast<int>(j), f,
                               "flow on an unreachable pair"});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!scenario.blocked[i]) continue;
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) row_sum += plan.flow(i, j);
        const double gap = std::abs(row_sum - scenario.demand[i]);
        if (gap > rel_tol(scenario.demand[i])) {
            out.push_back({"conservation", static_cast<int>(i), -1, gap,
                           "blocked demand not fully evacuated"});
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (scenario.blocked[j]) continue;
        double col_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) col_sum += plan.flow(i, j);
        const double excess = col_sum - scenario.spare_capacity(j);
        if (excess > rel_tol(scenario.demand[j])) {
            out.push_back({"capacity", -1, static_cast<int>(j), excess,
                           "inflow exceeds spare capacity"});
        }
    }
    return out;
}

}  // namespace evacsim
