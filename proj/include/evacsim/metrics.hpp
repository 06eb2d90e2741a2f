#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "evacsim/errors.hpp"
#include "evacsim/solver.hpp"

namespace evacsim {

struct FiveNumberSummary {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

/// Five-number summary with quartiles by linear interpolation between
/// closest ranks. Throws ContractError on an empty list.
inline FiveNumberSummary box_stats(std::vector<double> values) {
    if (values.empty()) throw ContractError("box_stats: empty list");
    std::sort(values.begin(), values.end());
    const auto quantile = [&](double p) {
        const double rank = p * static_cast<double>(values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(rank);
        const double frac = rank - static_cast<double>(lo);
        if (lo + 1 >= values.size()) return values.back();
        return values[lo] + frac * (values[lo + 1] - values[lo]);
    };
    return {values.front(), quantile(0.25), quantile(0.5), quantile(0.75), values.back()};
}

struct PairFlow {
    int origin = -1;
    int destination = -1;
    double passengers = 0.0;
};

/// Evaluation report: evacuated passenger flow, average travel time, and
/// per-station utilization. Optional fields are not-applicable rather than
/// zero when nothing moved, so an empty plan cannot masquerade as a perfect
/// score.
struct MetricsReport {
    double epf_total = 0.0;
    std::vector<PairFlow> epf_per_pair;                       // nonzero flows, row-major order
    std::optional<double> att_minutes;                        // flow-weighted mean cost
    std::vector<std::optional<double>> per_station_utilization;  // fraction of spare used
    std::optional<FiveNumberSummary> distribution_stats;      // over per-destination EPF
};

inline MetricsReport compute_metrics(const CostMatrix& cost, const EvacuationPlan& plan,
                                     const Scenario& scenario) {
    require_same_size(cost.values, plan.flow, "compute_metrics");
    const std::size_t n = plan.flow.size();
    if (scenario.blocked.size() != n)
        throw ContractError("compute_metrics: scenario does not match plan dimension");

    MetricsReport report;
    std::vector<double> inflow(n, 0.0);
    double sum_cost_flow = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double f = plan.flow(i, j);
            if (f <= 0.0) continue;
            report.epf_per_pair.push_back({static_cast<int>(i), static_cast<int>(j), f});
            report.epf_total += f;
            inflow[j] += f;
            sum_cost_flow += cost.values(i, j) * f;
        }
    }
    if (report.epf_total > 0.0) {
        report.att_minutes = sum_cost_flow / report.epf_total;
    }

    report.per_station_utilization.assign(n, std::nullopt);
    for (std::size_t j = 0; j < n; ++j) {
        if (scenario.blocked[j]) continue;
        const double spare = scenario.spare_capacity(j);
        if (scenario.demand[j] > 0.0 && spare > 0.0) {
            report.per_station_utilization[j] = inflow[j] / spare;
        }
    }

    std::vector<double> per_destination;
    for (std::size_t j = 0; j < n; ++j) {
        if (inflow[j] > 0.0) per_destination.push_back(inflow[j]);
    }
    if (!per_destination.empty()) {
        report.distribution_stats = box_stats(std::move(per_destination));
    }
    return report;
}

}  // namespace evacsim
