#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "evacsim/cost.hpp"
#include "evacsim/errors.hpp"
#include "evacsim/metrics.hpp"
#include "evacsim/network.hpp"
#include "evacsim/partition.hpp"
#include "evacsim/scenario.hpp"
#include "evacsim/solver.hpp"
#include "evacsim/synthetic.hpp"
#include "evacsim/travel.hpp"

namespace evacsim {

struct RunOptions {
    std::string stations_path;
    std::string edges_path;
    bool synthetic = false;  // use the bundled generator instead of files
    SyntheticParams synthetic_params;
    std::string scenario_path;
    std::string out_dir = ".";
    // command-line overrides on top of the scenario file
    std::optional<int> k;
    std::optional<double> t_lm;
    std::optional<double> capacity_ratio;
    std::optional<std::string> demand_override;
    std::vector<int> bench_k_values;  // non-empty switches to bench mode
    int bench_repetitions = 5;
    bool per_origin_epf = false;
    bool dump_matrices = false;  // write t_train.csv and a_cost.csv
    std::optional<std::string> write_network_dir;
};

struct Timings {
    double matrices_ms = 0.0;
    double partition_ms = 0.0;
    double solve_ms = 0.0;
    double total_ms = 0.0;
};

struct PipelineResult {
    Scenario scenario;
    Subproblem sub;
    EvacuationPlan plan;  // embedded into the full network frame
    MetricsReport metrics;
    CostMatrix cost;
    std::vector<Violation> violations;
    Timings timings;
};

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

inline Scenario build_scenario(const NetworkModel& net, const ScenarioConfig& cfg) {
    Scenario sc;
    sc.blocked = resolve_blocked(net, cfg);
    sc.demand = sample_demand(net, cfg.window_minutes, cfg.operating_minutes_per_day);
    if (!cfg.demand_override_path.empty()) {
        std::ifstream in(cfg.demand_override_path);
        if (!in) throw Error("cannot open demand override '" + cfg.demand_override_path + "'");
        sc.demand = apply_demand_override(in, net, std::move(sc.demand));
    }
    sc.capacity_ratio = broadcast_ratio(cfg.capacity_ratio, net.size());
    sc.horizon_min = cfg.t_lm_minutes;
    return sc;
}

inline Scenario slice_scenario(const Scenario& full, const Subproblem& sub) {
    Scenario local;
    local.horizon_min = full.horizon_min;
    local.blocked.reserve(sub.size());
    local.demand.reserve(sub.size());
    local.capacity_ratio.reserve(sub.size());
    for (int idx : sub.selected) {
        local.blocked.push_back(full.blocked[idx]);
        local.demand.push_back(full.demand[idx]);
        local.capacity_ratio.push_back(full.capacity_ratio[idx]);
    }
    return local;
}

}  // namespace detail

/// Builds all matrices for a config: connectivity, haversine distances,
/// train travel times, and the fused evacuation cost matrix. The train
/// matrix is copied out when a sink is given.
inline CostMatrix build_cost_matrix(const NetworkModel& net, const ScenarioConfig& cfg,
                                    TrainTimeMatrix* train_out = nullptr) {
    const SquareMatrix con = connectivity_matrix(net);
    const SquareMatrix dis = distance_matrix(net);
    const TrainTimeMatrix train = train_time_matrix(net, cfg.travel);
    CostMatrix cost = fuse_cost(con, dis, train, CostParams{cfg.walking_speed_kmh, cfg.t_lm_minutes});
    if (train_out) *train_out = train;
    return cost;
}

/// The unit the bench harness times: k-nearest partitioning plus the solve
/// of the reduced instance. Embedding and validation live outside.
struct PartitionSolveOutcome {
    Subproblem sub;
    EvacuationPlan local_plan;
    double partition_ms = 0.0;
    double solve_ms = 0.0;
};

inline PartitionSolveOutcome partition_and_solve(const CostMatrix& cost, const Scenario& scenario,
                                                 int k) {
    PartitionSolveOutcome out;
    auto t_partition = std::chrono::steady_clock::now();
    out.sub = k_nearest_subproblem(cost, scenario.demand, scenario.blocked, k);
    out.partition_ms = detail::elapsed_ms(t_partition);

    auto t_solve = std::chrono::steady_clock::now();
    const Scenario local = detail::slice_scenario(scenario, out.sub);
    const CostMatrix local_cost{out.sub.local_cost};
    out.local_plan = solve(local_cost, local);
    out.solve_ms = detail::elapsed_ms(t_solve);
    return out;
}

/// Full pipeline: scenario resolution, matrix building, partitioning,
/// solving, embedding into the full frame, validation, metrics.
inline PipelineResult run_pipeline(const NetworkModel& net, const ScenarioConfig& cfg,
                                   TrainTimeMatrix* train_out = nullptr) {
    const auto t_total = std::chrono::steady_clock::now();
    Scenario scenario = detail::build_scenario(net, cfg);

    const auto t_matrices = std::chrono::steady_clock::now();
    CostMatrix cost = build_cost_matrix(net, cfg, train_out);
    const double matrices_ms = detail::elapsed_ms(t_matrices);

    PartitionSolveOutcome ps = partition_and_solve(cost, scenario, cfg.k);

    PipelineResult r;
    r.sub = std::move(ps.sub);
    r.timings.partition_ms = ps.partition_ms;
    r.timings.solve_ms = ps.solve_ms;
    r.timings.matrices_ms = matrices_ms;
    r.plan = make_plan_from_flow(cost, embed_flow(r.sub, ps.local_plan.flow, net.size()));
    r.plan.diagnostic = ps.local_plan.diagnostic;
    r.scenario = std::move(scenario);
    r.violations = validate_plan(cost, r.scenario, r.plan);
    r.plan.feasible = r.violations.empty();
    r.metrics = compute_metrics(cost, r.plan, r.scenario);
    r.cost = std::move(cost);
    r.timings.total_ms = detail::elapsed_ms(t_total);
    return r;
}

// ---------------------------------------------------------------------------
// artifact writers

inline void write_plan_csv(std::ostream& out, const NetworkModel& net, const CostMatrix& cost,
                           const EvacuationPlan& plan) {
    out << "origin_id,destination_id,passengers,cost_minutes\n";
    char buf[128];
    for (std::size_t i = 0; i < plan.flow.size(); ++i) {
        for (std::size_t j = 0; j < plan.flow.size(); ++j) {
            const double f = plan.flow(i, j);
            if (f <= 0.0) continue;
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f", f, cost.values(i, j));
            out << net.station(i).id << ',' << net.station(j).id << ',' << buf << '\n';
        }
    }
}

inline nlohmann::json plan_summary_json(const NetworkModel& net, const Scenario& scenario,
                                        const EvacuationPlan& plan, const MetricsReport& metrics) {
    nlohmann::json per_station = nlohmann::json::array();
    for (std::size_t j = 0; j < net.size(); ++j) {
        if (scenario.blocked[j]) continue;
        nlohmann::json entry = {{"id", net.station(j).id}, {"inflow", plan.inflow[j]}};
        if (metrics.per_station_utilization[j]) {
            entry["capacity_used_fraction"] = *metrics.per_station_utilization[j];
        } else {
            entry["capacity_used_fraction"] = nullptr;
        }
        per_station.push_back(std::move(entry));
    }
    nlohmann::json summary = {{"total_epf", plan.total_epf},
                              {"feasible", plan.feasible},
                              {"per_station", std::move(per_station)}};
    if (metrics.att_minutes) {
        summary["att_minutes"] = *metrics.att_minutes;
    } else {
        summary["att_minutes"] = nullptr;
    }
    return summary;
}

inline nlohmann::json metrics_json(const NetworkModel& net, const Scenario& scenario,
                                   const MetricsReport& metrics) {
    nlohmann::json utilization = nlohmann::json::array();
    for (std::size_t j = 0; j < net.size(); ++j) {
        if (scenario.blocked[j]) continue;
        nlohmann::json entry = {{"id", net.station(j).id}};
        if (metrics.per_station_utilization[j]) {
            entry["value"] = *metrics.per_station_utilization[j];
        } else {
            entry["value"] = nullptr;
        }
        utilization.push_back(std::move(entry));
    }
    nlohmann::json out = {{"epf_total", metrics.epf_total},
                          {"utilization", std::move(utilization)}};
    out["att_minutes"] = metrics.att_minutes ? nlohmann::json(*metrics.att_minutes)
                                             : nlohmann::json(nullptr);
    if (metrics.distribution_stats) {
        const FiveNumberSummary& b = *metrics.distribution_stats;
        out["box"] = {{"min", b.min}, {"q1", b.q1}, {"median", b.median},
                      {"q3", b.q3},   {"max", b.max}};
    } else {
        out["box"] = nullptr;
    }
    return out;
}

/// Plot-ready EPF data, aggregated per destination (default) or per origin.
inline void write_epf_csv(std::ostream& out, const NetworkModel& net,
                          const MetricsReport& metrics, bool per_origin = false) {
    out << (per_origin ? "origin_id,epf\n" : "destination_id,epf\n");
    std::vector<double> totals(net.size(), 0.0);
    for (const PairFlow& pf : metrics.epf_per_pair) {
        totals[per_origin ? pf.origin : pf.destination] += pf.passengers;
    }
    char buf[64];
    for (std::size_t i = 0; i < totals.size(); ++i) {
        if (totals[i] <= 0.0) continue;
        std::snprintf(buf, sizeof(buf), "%.6f", totals[i]);
        out << net.station(i).id << ',' << buf << '\n';
    }
}

inline nlohmann::json build_manifest(const NetworkModel& net, const ScenarioConfig& cfg,
                                     const Scenario& scenario) {
    nlohmann::json blocked_ids = nlohmann::json::array();
    double total_demand = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) {
        if (scenario.blocked[i]) {
            blocked_ids.push_back(net.station(i).id);
            total_demand += scenario.demand[i];
        }
    }
    return {{"parameters",
             {{"train_speed_m_per_min", cfg.travel.train_speed_m_per_min},
              {"stop_time_minutes", cfg.travel.stop_time_min},
              {"transfer_time_minutes", cfg.travel.transfer_time_min},
              {"penalty_aware_routing", cfg.travel.penalty_aware},
              {"walking_speed_kmh", cfg.walking_speed_kmh},
              {"t_lm_minutes", cfg.t_lm_minutes},
              {"capacity_ratio", cfg.capacity_ratio},
              {"k", cfg.k},
              {"objective_epsilon", kObjectiveEpsilon},
              {"window_minutes", cfg.window_minutes},
              {"operating_minutes_per_day", cfg.operating_minutes_per_day}}},
            {"network", {{"stations", net.size()}, {"edges", net.edges().size()}}},
            {"scenario",
             {{"blocked_stations", std::move(blocked_ids)}, {"total_demand", total_demand}}}};
}

// ---------------------------------------------------------------------------
// bench mode

struct BenchRow {
    int k = 0;
    double median_wall_ms = 0.0;
    std::optional<double> objective;  // nullopt = infeasible at this k
};

/// Times partition + solve for each k over a prebuilt cost matrix; at least
/// five repetitions, median wall time per row. An infeasible k is recorded
/// and the sweep continues.
inline std::vector<BenchRow> bench_k(const NetworkModel& net, const ScenarioConfig& cfg,
                                     const std::vector<int>& k_values, int repetitions = 5) {
    repetitions = std::max(repetitions, 5);
    const Scenario scenario = detail::build_scenario(net, cfg);
    const CostMatrix cost = build_cost_matrix(net, cfg);

    std::vector<BenchRow> rows;
    for (int k : k_values) {
        BenchRow row;
        row.k = k;
        std::vector<double> samples;
        samples.reserve(repetitions);
        for (int rep = 0; rep < repetitions; ++rep) {
            const auto start = std::chrono::steady_clock::now();
            try {
                PartitionSolveOutcome ps = partition_and_solve(cost, scenario, k);
                samples.push_back(detail::elapsed_ms(start));
                row.objective = ps.local_plan.objective_att;
            } catch (const InfeasibleError&) {
                samples.push_back(detail::elapsed_ms(start));
                row.objective = std::nullopt;
            } catch (const IsolationError&) {
                samples.push_back(detail::elapsed_ms(start));
                row.objective = std::nullopt;
            }
        }
        std::sort(samples.begin(), samples.end());
        row.median_wall_ms = samples[samples.size() / 2];
        rows.push_back(row);
    }
    return rows;
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "k,median_wall_ms,objective\n";
    char buf[64];
    for (const BenchRow& row : rows) {
        out << row.k << ',';
        std::snprintf(buf, sizeof(buf), "%.3f", row.median_wall_ms);
        out << buf << ',';
        if (row.objective) {
            std::snprintf(buf, sizeof(buf), "%.6f", *row.objective);
            out << buf;
        } else {
            out << "infeasible";
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// command-line entry

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
}

template <typename WriteFn>
inline void write_stream(const std::filesystem::path& path, WriteFn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    fn(out);
}

}  // namespace detail

/// End-to-end scenario run. Returns the process exit status:
/// 0 feasible solve, 1 input error, 2 infeasible.
inline int run_cli(const RunOptions& opt, std::ostream& log = std::cout,
                   std::ostream& err = std::cerr) {
    std::optional<NetworkModel> net;
    try {
        if (opt.synthetic) {
            net = synthetic_network(opt.synthetic_params);
        } else {
            if (opt.stations_path.empty() || opt.edges_path.empty())
                throw Error("need --stations and --edges, or --synthetic");
            net = NetworkModel::load_files(opt.stations_path, opt.edges_path);
        }
        if (opt.write_network_dir) {
            const std::filesystem::path dir(*opt.write_network_dir);
            std::filesystem::create_directories(dir);
            detail::write_stream(dir / "stations.csv",
                                 [&](std::ostream& o) { net->write_stations(o); });
            detail::write_stream(dir / "edges.csv", [&](std::ostream& o) { net->write_edges(o); });
        }

        if (opt.scenario_path.empty()) throw Error("need --scenario");
        std::ifstream scenario_in(opt.scenario_path);
        if (!scenario_in) throw Error("cannot open scenario '" + opt.scenario_path + "'");
        ScenarioConfig cfg = parse_scenario_config(scenario_in);
        if (opt.k) cfg.k = *opt.k;
        if (opt.t_lm) cfg.t_lm_minutes = *opt.t_lm;
        if (opt.capacity_ratio) cfg.capacity_ratio = *opt.capacity_ratio;
        if (opt.demand_override) cfg.demand_override_path = *opt.demand_override;
        if (cfg.k < 1) throw ContractError("k must be >= 1");

        const std::filesystem::path out_dir(opt.out_dir);
        std::filesystem::create_directories(out_dir);

        if (!opt.bench_k_values.empty()) {
            const auto rows = bench_k(*net, cfg, opt.bench_k_values, opt.bench_repetitions);
            detail::write_stream(out_dir / "bench_k.csv",
                                 [&](std::ostream& o) { write_bench_csv(o, rows); });
            log << "bench: " << rows.size() << " rows -> " << (out_dir / "bench_k.csv").string()
                << "\n";
            return 0;
        }

        nlohmann::json manifest;
        try {
            TrainTimeMatrix train;
            PipelineResult r = run_pipeline(*net, cfg, opt.dump_matrices ? &train : nullptr);
            if (opt.dump_matrices) {
                detail::write_stream(out_dir / "t_train.csv", [&](std::ostream& o) {
                    write_matrix_csv(o, train.values);
                });
                detail::write_stream(out_dir / "a_cost.csv", [&](std::ostream& o) {
                    write_matrix_csv(o, r.cost.values);
                });
            }
            manifest = build_manifest(*net, cfg, r.scenario);
            manifest["timings_ms"] = {{"matrices", r.timings.matrices_ms},
                                      {"partition", r.timings.partition_ms},
                                      {"solve", r.timings.solve_ms},
                                      {"total", r.timings.total_ms}};
            manifest["result"] = {{"feasible", r.plan.feasible},
                                  {"att_minutes", r.plan.objective_att},
                                  {"epf_total", r.plan.total_epf},
                                  {"selected_nodes", r.sub.size()},
                                  {"validation_violations", r.violations.size()}};
            for (const std::string& w : r.sub.warnings) err << "warning: " << w << "\n";

            detail::write_stream(out_dir / "plan.csv", [&](std::ostream& o) {
                write_plan_csv(o, *net, r.cost, r.plan);
            });
            detail::write_file(out_dir / "plan_summary.json",
                               plan_summary_json(*net, r.scenario, r.plan, r.metrics).dump(2) + "\n");
            detail::write_file(out_dir / "metrics.json",
                               metrics_json(*net, r.scenario, r.metrics).dump(2) + "\n");
            const std::string epf_name =
                opt.per_origin_epf ? "epf_by_origin.csv" : "epf_by_destination.csv";
            detail::write_stream(out_dir / epf_name, [&](std::ostream& o) {
                write_epf_csv(o, *net, r.metrics, opt.per_origin_epf);
            });
            detail::write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

            if (!r.violations.empty()) {
                err << "error: plan failed validation with " << r.violations.size()
                    << " violation(s)\n";
                return 1;
            }
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.3f", r.plan.objective_att);
            log << "feasible: evacuated " << r.plan.total_epf << " persons, att " << buf
                << " min, " << r.sub.size() << " stations in subproblem\n";
            return 0;
        } catch (const InfeasibleError& e) {
            manifest = build_manifest(*net, cfg, detail::build_scenario(*net, cfg));
            manifest["result"] = {{"feasible", false},
                                  {"shortfall_persons", e.shortfall_persons}};
            detail::write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
            err << "infeasible: " << e.what() << "\n";
            return 2;
        } catch (const IsolationError& e) {
            const std::string station = net->station(e.station_index).id;
            manifest = build_manifest(*net, cfg, detail::build_scenario(*net, cfg));
            manifest["result"] = {{"feasible", false}, {"isolated_station", station}};
            detail::write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
            err << "infeasible: " << e.what() << " (station '" << station << "')\n";
            return 2;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace evacsim
