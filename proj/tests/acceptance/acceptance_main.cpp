// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails. Criteria pin the solver against an independent LP oracle, the
// travel matrix against exhaustive search, the cost fusion arithmetic, the
// baseline parameter set, and the scaling behaviour of the k-nearest
// partitioning on the bundled 1000-station synthetic network.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "evacsim/evacsim.hpp"
#include "oracle_paths.hpp"
#include "oracle_transport.hpp"
#include "testutil.hpp"

namespace {

using namespace evacsim;

struct CheckFailure {
    std::string detail;
};

void require(bool ok, const std::string& detail) {
    if (!ok) throw CheckFailure{detail};
}

std::string format(const char* fmt, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), fmt, args...);
    return buf;
}

constexpr double kDegPerKmLat = 180.0 / (std::numbers::pi * kEarthRadiusKm);

// ---------------------------------------------------------------------------
// C1: solver objective equals the independent simplex optimum on 200 seeded
// random instances, within 1e-6 relative, in under 10 seconds.
std::string criterion_oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(0xAC5EED);
    int accepted = 0;
    int draws = 0;
    double worst = 0.0;
    while (accepted < 200) {
        require(++draws < 4000, "instance generator starved");
        const testutil::SolverInstance inst = testutil::random_instance(rng);
        const auto optimum = oracle::transport_optimum(inst.cost, inst.scenario);
        if (!optimum) {
            // the oracle calls it infeasible; the solver must agree
            try {
                solve(inst.cost, inst.scenario);
                require(false, "solver accepted an oracle-infeasible instance");
            } catch (const InfeasibleError&) {
            } catch (const IsolationError&) {
            }
            continue;
        }
        const EvacuationPlan plan = solve(inst.cost, inst.scenario);
        const double got = oracle::transport_cost_of(inst.cost, plan);
        const double gap = std::abs(got - *optimum);
        worst = std::max(worst, gap / std::max(1.0, *optimum));
        require(gap <= 1e-6 * std::max(1.0, *optimum),
                format("instance %d: cost %.9f vs oracle %.9f", accepted, got, *optimum));
        ++accepted;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(seconds < 10.0, format("took %.1f s, budget 10 s", seconds));
    return format("200 instances, worst relative gap %.2e, %.2f s", worst, seconds);
}

// ---------------------------------------------------------------------------
// C2: the checker reports zero violations on every feasible solve of the
// corpus and catches each injected violation class.
std::string criterion_constraint_suite() {
    std::mt19937_64 rng(0xAC5EED);
    int accepted = 0;
    EvacuationPlan sample_plan;
    CostMatrix sample_cost;
    Scenario sample_scenario;
    while (accepted < 200) {
        const testutil::SolverInstance inst = testutil::random_instance(rng);
        EvacuationPlan plan;
        try {
            plan = solve(inst.cost, inst.scenario);
        } catch (const Error&) {
            continue;
        }
        const auto violations = validate_plan(inst.cost, inst.scenario, plan);
        require(violations.empty(),
                format("clean solve flagged with %zu violations", violations.size()));
        if (plan.total_epf > 0.0) {
            sample_plan = plan;
            sample_cost = inst.cost;
            sample_scenario = inst.scenario;
        }
        ++accepted;
    }

    const auto detects = [&](const EvacuationPlan& broken, const char* constraint) {
        for (const Violation& v : validate_plan(sample_cost, sample_scenario, broken)) {
            if (v.constraint == constraint) return true;
        }
        return false;
    };
    const std::size_t n = sample_plan.flow.size();
    int blocked_idx = -1, unblocked_idx = -1;
    for (std::size_t i = 0; i < n; ++i) {
        if (sample_scenario.blocked[i] && blocked_idx < 0) blocked_idx = static_cast<int>(i);
        if (!sample_scenario.blocked[i] && unblocked_idx < 0) unblocked_idx = static_cast<int>(i);
    }

    EvacuationPlan diagonal = sample_plan;
    diagonal.flow(blocked_idx, blocked_idx) = 7.0;
    require(detects(diagonal, "diagonal"), "diagonal injection missed");

    EvacuationPlan overfill = sample_plan;
    overfill.flow(blocked_idx, unblocked_idx) +=
        sample_scenario.spare_capacity(unblocked_idx) + 1.0;
    require(detects(overfill, "capacity"), "capacity overfill injection missed");

    EvacuationPlan backwards = sample_plan;
    backwards.flow(unblocked_idx, blocked_idx) = 3.0;
    require(detects(backwards, "direction"), "inflow-to-blocked injection missed");

    return "200 clean solves, 3/3 injected violations detected";
}

// ---------------------------------------------------------------------------
// C3: single-origin instances match greedy cheapest-fill analytically.
std::string criterion_single_origin_greedy() {
    std::mt19937_64 rng(0x95EED);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int targets = 3 + static_cast<int>(rng() % 4);
        const int n = targets + 1;
        CostMatrix cost{SquareMatrix(static_cast<std::size_t>(n), kUnreachable)};
        for (int i = 0; i < n; ++i) cost.values(i, i) = 0.0;
        Scenario sc;
        sc.blocked.assign(n, 0);
        sc.blocked[0] = 1;
        sc.demand.assign(n, 0.0);
        sc.capacity_ratio.assign(n, 1.0);
        double total_spare = 0.0;
        std::vector<std::pair<double, int>> ranked;
        for (int j = 1; j < n; ++j) {
            const double c = 1.0 + static_cast<double>(rng() % 25);
            const double y = 10.0 + static_cast<double>(rng() % 200);
            const double spare = static_cast<double>(rng() % 120);
            cost.values(0, j) = c;
            sc.demand[j] = y;
            sc.capacity_ratio[j] = (y + spare) / y;
            total_spare += spare;
            if (spare > 0.0) ranked.emplace_back(c, j);
        }
        if (total_spare < 1.0) continue;
        sc.demand[0] = 1.0 + static_cast<double>(rng() % static_cast<int>(total_spare));

        // greedy cheapest-fill is optimal for one origin
        std::sort(ranked.begin(), ranked.end());
        double remaining = sc.demand[0];
        double greedy_cost = 0.0;
        for (auto [c, j] : ranked) {
            if (remaining <= 0.0) break;
            const double take = std::min(remaining, sc.spare_capacity(j));
            greedy_cost += take * c;
            remaining -= take;
        }
        const double greedy_att = greedy_cost / (sc.demand[0] + kObjectiveEpsilon);

        const EvacuationPlan plan = solve(cost, sc);
        worst = std::max(worst, std::abs(plan.objective_att - greedy_att));
        require(std::abs(plan.objective_att - greedy_att) <= 1e-9,
                format("trial %d: att %.12f vs greedy %.12f", trial, plan.objective_att,
                       greedy_att));
    }
    return format("100 greedy instances, worst att gap %.2e", worst);
}

// ---------------------------------------------------------------------------
// C4: travel matrix fidelity: the planted 3-station chain and exhaustive
// search agreement for n <= 8.
std::string criterion_travel_fidelity() {
    const auto chain = [](const char* line_c) {
        std::vector<Station> stations = {
            testutil::station("A", 35.0, 139.0, "L1"),
            testutil::station("B", 35.0 + 1.6 * kDegPerKmLat, 139.0, "L1"),
            testutil::station("C", 35.0 + 2.4 * kDegPerKmLat, 139.0, line_c),
        };
        return NetworkModel(std::move(stations), {{0, 1}, {1, 2}});
    };
    const TrainTimeMatrix same_line = train_time_matrix(chain("L1"));
    require(std::abs(same_line.values(0, 2) - 5.0) <= 1e-9,
            format("same-line chain gave %.12f, want 5.0", same_line.values(0, 2)));
    const TrainTimeMatrix two_lines = train_time_matrix(chain("L2"));
    require(std::abs(two_lines.values(0, 2) - 12.5) <= 1e-9,
            format("transfer chain gave %.12f, want 12.5", two_lines.values(0, 2)));

    std::mt19937_64 rng(0x7A4E1);
    int pairs = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 5);
        const NetworkModel net =
            testutil::random_network(rng, n, 1 + trial % 3, 0.6, trial % 4 != 0);
        const TravelParams params;
        const TrainTimeMatrix got = train_time_matrix(net, params);
        const SquareMatrix want = oracle::brute_force_train_times(net, params);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j, ++pairs) {
                require(got.values(i, j) == want(i, j) ||
                            (std::isinf(got.values(i, j)) && std::isinf(want(i, j))),
                        format("trial %d (%d,%d): %.17g vs brute %.17g", trial, i, j,
                               got.values(i, j), want(i, j)));
            }
        }
    }
    return format("toy chain 5.0 / 12.5 min; %d all-pairs values equal exhaustive search", pairs);
}

// ---------------------------------------------------------------------------
// C5: cost fusion arithmetic and thresholding.
std::string criterion_cost_fusion() {
    SquareMatrix con(3, 0.0), dis(3, 0.0);
    TrainTimeMatrix train{SquareMatrix(3, 0.0)};
    con(0, 1) = con(1, 0) = 1.0;
    dis(0, 1) = dis(1, 0) = 1.0;
    dis(0, 2) = dis(2, 0) = 2.0;
    dis(1, 2) = dis(2, 1) = 4.0;
    train.values(0, 1) = train.values(1, 0) = 3.0;
    const CostMatrix cost = fuse_cost(con, dis, train, {5.0, 30.0});
    require(cost.values(0, 2) == 24.0, format("2 km walk gave %.9f, want 24", cost.values(0, 2)));
    require(std::isinf(cost.values(1, 2)), "4 km walk should exceed the 30 min horizon");
    require(cost.values(0, 1) == 3.0, "connected entry should copy the train time");

    // connected entries stay bit-identical on a real network
    std::mt19937_64 rng(0xF05E);
    const NetworkModel net = testutil::random_network(rng, 12, 3);
    const SquareMatrix full_con = connectivity_matrix(net);
    const TrainTimeMatrix full_train = train_time_matrix(net);
    const CostMatrix fused = fuse_cost(full_con, distance_matrix(net), full_train, {5.0, 90.0});
    int connected_checked = 0;
    for (std::size_t i = 0; i < net.size(); ++i) {
        for (std::size_t j = 0; j < net.size(); ++j) {
            if (i == j || full_con(i, j) == 0.0 || full_train.values(i, j) > 90.0) continue;
            require(fused.values(i, j) == full_train.values(i, j),
                    "connected entry not bit-identical to the train time");
            ++connected_checked;
        }
    }
    return format("walk 24.0 min, threshold to inf, %d connected entries bit-equal",
                  connected_checked);
}

// ---------------------------------------------------------------------------
// C6: a default run records the baseline constants in its manifest.
std::string criterion_default_manifest() {
    testutil::TempDir tmp("acceptance_manifest");
    {
        std::ofstream st(tmp.path() / "stations.csv");
        st << "id,name,lat,lon,line_id,operator_id,daily_passengers\n"
              "A,Alpha,35.600,139.700,L1,OPX,3600\n"
              "B,Bravo,35.609,139.700,L1,OPX,7200\n"
              "C,Charlie,35.618,139.700,L2,OPX,36000\n";
        std::ofstream ed(tmp.path() / "edges.csv");
        ed << "from_id,to_id\nA,B\nB,C\n";
        std::ofstream sc(tmp.path() / "scenario.cfg");
        sc << "blocked_stations = B\n";
    }
    RunOptions opt;
    opt.stations_path = (tmp.path() / "stations.csv").string();
    opt.edges_path = (tmp.path() / "edges.csv").string();
    opt.scenario_path = (tmp.path() / "scenario.cfg").string();
    opt.out_dir = (tmp.path() / "out").string();
    std::ostringstream log, err;
    require(run_cli(opt, log, err) == 0, "default toy run failed: " + err.str());

    std::ifstream in(tmp.path() / "out" / "manifest.json");
    const auto manifest = nlohmann::json::parse(in);
    const auto& p = manifest["parameters"];
    require(p["train_speed_m_per_min"] == 800.0, "train speed default");
    require(p["stop_time_minutes"] == 1.0, "stop time default");
    require(p["transfer_time_minutes"] == 7.5, "transfer time default");
    require(p["walking_speed_kmh"] == 5.0, "walking speed default");
    require(p["t_lm_minutes"] == 30.0, "horizon default");
    require(p["capacity_ratio"] == 1.5, "capacity ratio default");
    require(p["k"] == 30, "k default");
    require(p["objective_epsilon"] == 1e-6, "objective epsilon");
    return "manifest records 800 m/min, 1 min, 7.5 min, 5 km/h, 30 min, 1.5, k=30, 1e-6";
}

// ---------------------------------------------------------------------------
// C7: partition+solve wall time grows with k on the synthetic network.
std::string criterion_k_scaling() {
    const auto start = std::chrono::steady_clock::now();
    const NetworkModel net = synthetic_network();
    ScenarioConfig cfg;
    // three well-separated five-station hub clusters
    for (int base : {210, 498, 788}) {
        for (int off = 0; off < 5; ++off) {
            char id[16];
            std::snprintf(id, sizeof(id), "S%04d", base + off);
            cfg.blocked_station_ids.push_back(id);
        }
    }
    const std::vector<int> ks = {10, 20, 30, 50, 100};
    bench_k(net, cfg, {30}, 5);  // warm-up, discarded
    const std::vector<BenchRow> rows = bench_k(net, cfg, ks, 11);

    std::string shape;
    double at_30 = 0.0, at_100 = 0.0;
    for (const BenchRow& row : rows) {
        require(row.objective.has_value(), format("k=%d infeasible", row.k));
        shape += format("%d:%.2fms ", row.k, row.median_wall_ms);
        if (row.k == 30) at_30 = row.median_wall_ms;
        if (row.k == 100) at_100 = row.median_wall_ms;
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        require(rows[i].median_wall_ms >= rows[i - 1].median_wall_ms,
                format("median not monotone: k=%d %.3f ms < k=%d %.3f ms", rows[i].k,
                       rows[i].median_wall_ms, rows[i - 1].k, rows[i - 1].median_wall_ms));
    }
    require(at_100 >= 2.0 * at_30,
            format("k=100 (%.3f ms) is not 2x k=30 (%.3f ms)", at_100, at_30));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(seconds < 600.0, format("bench took %.0f s, budget 600 s", seconds));
    return shape + format("(ratio %.2fx, %.1f s)", at_100 / at_30, seconds);
}

// ---------------------------------------------------------------------------
// C8: with k covering every candidate, the partitioned objective equals the
// full-frame objective.
std::string criterion_partition_consistency() {
    std::mt19937_64 rng(0xACCE55);
    int checked = 0;
    double worst = 0.0;
    while (checked < 60) {
        const testutil::SolverInstance inst = testutil::random_instance(rng, 6, 12);
        EvacuationPlan full;
        try {
            full = solve(inst.cost, inst.scenario);
        } catch (const Error&) {
            continue;
        }
        const int n = static_cast<int>(inst.cost.values.size());
        const Subproblem sub =
            k_nearest_subproblem(inst.cost, inst.scenario.demand, inst.scenario.blocked, n);
        Scenario local;
        local.horizon_min = inst.scenario.horizon_min;
        for (int idx : sub.selected) {
            local.blocked.push_back(inst.scenario.blocked[idx]);
            local.demand.push_back(inst.scenario.demand[idx]);
            local.capacity_ratio.push_back(inst.scenario.capacity_ratio[idx]);
        }
        const EvacuationPlan reduced = solve(CostMatrix{sub.local_cost}, local);
        const EvacuationPlan embedded =
            make_plan_from_flow(inst.cost, embed_flow(sub, reduced.flow, inst.cost.values.size()));
        require(validate_plan(inst.cost, inst.scenario, embedded).empty(),
                "embedded plan violates full-frame constraints");
        const double gap = std::abs(embedded.objective_att - full.objective_att);
        worst = std::max(worst, gap);
        require(gap <= 1e-6 * std::max(1.0, full.objective_att),
                format("objective gap %.3e at n=%d", gap, n));
        ++checked;
    }
    return format("60 networks (n<=12), worst objective gap %.2e", worst);
}

// ---------------------------------------------------------------------------
// C9: every feasible plan on the synthetic network keeps ATT within the
// disruption horizon.
std::string criterion_att_bound() {
    const NetworkModel net = synthetic_network();
    const std::vector<std::vector<std::string>> scenarios = {
        {"S0500"},
        {"S0210", "S0211", "S0212", "S0213", "S0214"},
        {"S0498", "S0499", "S0500", "S0501", "S0502", "S0788", "S0789"},
    };
    std::string atts;
    ScenarioConfig cfg;
    const CostMatrix cost = build_cost_matrix(net, cfg);
    for (const auto& blocked_ids : scenarios) {
        cfg.blocked_station_ids = blocked_ids;
        Scenario scenario = detail::build_scenario(net, cfg);
        const PartitionSolveOutcome ps = partition_and_solve(cost, scenario, cfg.k);
        const EvacuationPlan plan =
            make_plan_from_flow(cost, embed_flow(ps.sub, ps.local_plan.flow, net.size()));
        require(validate_plan(cost, scenario, plan).empty(), "plan violates constraints");
        require(plan.objective_att <= cfg.t_lm_minutes + 1e-9,
                format("att %.3f exceeds horizon %.1f", plan.objective_att, cfg.t_lm_minutes));
        atts += format("%.2f ", plan.objective_att);
    }

    // blocking a full line as well
    cfg.blocked_station_ids.clear();
    cfg.blocked_line_ids = {"L12"};
    Scenario scenario = detail::build_scenario(net, cfg);
    const PartitionSolveOutcome ps = partition_and_solve(cost, scenario, cfg.k);
    const EvacuationPlan plan =
        make_plan_from_flow(cost, embed_flow(ps.sub, ps.local_plan.flow, net.size()));
    require(plan.objective_att <= cfg.t_lm_minutes + 1e-9, "line scenario exceeds horizon");
    atts += format("%.2f ", plan.objective_att);
    return "att minutes within the 30 min horizon: " + atts;
}

struct Criterion {
    const char* name;
    std::function<std::string()> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"C1 oracle equivalence (200 random instances, 1e-6)", criterion_oracle_equivalence},
        {"C2 constraint suite (clean solves + injected violations)", criterion_constraint_suite},
        {"C3 single-origin greedy optimality (att to 1e-9)", criterion_single_origin_greedy},
        {"C4 travel matrix fidelity (toy chain + exhaustive search)", criterion_travel_fidelity},
        {"C5 cost fusion fidelity (walk time, threshold, bit-equality)", criterion_cost_fusion},
        {"C6 baseline constants in the run manifest", criterion_default_manifest},
        {"C7 k-scaling on the synthetic 1000-station network", criterion_k_scaling},
        {"C8 partition consistency at full coverage (1e-6)", criterion_partition_consistency},
        {"C9 att bounded by the disruption horizon", criterion_att_bound},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        try {
            const std::string detail = criterion.body();
            std::cout << "[PASS] " << criterion.name << " -- " << detail << "\n";
        } catch (const CheckFailure& f) {
            std::cout << "[FAIL] " << criterion.name << " -- " << f.detail << "\n";
            ++failures;
        } catch (const std::exception& e) {
            std::cout << "[FAIL] " << criterion.name << " -- unexpected error: " << e.what()
                      << "\n";
            ++failures;
        }
    }
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all 9 criteria passed\n";
    return 0;
}
