// Scenario runner for railway evacuation simulation: loads or generates a
// network, applies a disruption scenario, partitions, solves, and writes the
// plan, metrics, and run manifest. Exit codes: 0 feasible, 1 input error,
// 2 infeasible.

#include <string>
#include <vector>

#include "CLI11.hpp"

#include "evacsim/evacsim.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Railway disruption evacuation simulator"};

    evacsim::RunOptions opt;
    std::string bench_spec;
    int k = 0;
    double t_lm = 0.0;
    double capacity_ratio = 0.0;
    std::string demand_override;
    std::uint64_t seed = 1;
    std::string write_network_dir;

    app.add_option("--stations", opt.stations_path, "Stations CSV (id,name,lat,lon,line_id,operator_id,daily_passengers)");
    app.add_option("--edges", opt.edges_path, "Edges CSV (from_id,to_id)");
    app.add_flag("--synthetic", opt.synthetic, "Use the bundled synthetic grid network instead of files");
    app.add_option("--seed", seed, "Seed for the synthetic network generator");
    app.add_option("--write-network", write_network_dir, "Dump the loaded/generated network as CSV into this directory");
    app.add_option("--scenario", opt.scenario_path, "Scenario config file (key = value)");
    app.add_option("--out-dir", opt.out_dir, "Output directory for artifacts");
    auto* k_opt = app.add_option("--k", k, "Candidates per blocked station (overrides scenario)");
    auto* tlm_opt = app.add_option("--t-lm", t_lm, "Disruption horizon in minutes (overrides scenario)");
    auto* cap_opt = app.add_option("--capacity-ratio", capacity_ratio, "Station capacity ratio (overrides scenario)");
    auto* dem_opt = app.add_option("--demand-override", demand_override, "Demand override CSV (id,passengers_in_window)");
    app.add_option("--bench-k", bench_spec, "Comma-separated k values; runs the timing sweep instead of a single solve");
    app.add_option("--bench-reps", opt.bench_repetitions, "Repetitions per bench row (>= 5)");
    app.add_flag("--per-origin-epf", opt.per_origin_epf, "Aggregate the EPF plot data per origin instead of per destination");
    app.add_flag("--dump-matrices", opt.dump_matrices, "Also write t_train.csv and a_cost.csv (n x n grids, 'inf' for unreachable)");

    CLI11_PARSE(app, argc, argv);

    opt.synthetic_params.seed = seed;
    if (!write_network_dir.empty()) opt.write_network_dir = write_network_dir;
    if (k_opt->count() > 0) opt.k = k;
    if (tlm_opt->count() > 0) opt.t_lm = t_lm;
    if (cap_opt->count() > 0) opt.capacity_ratio = capacity_ratio;
    if (dem_opt->count() > 0) opt.demand_override = demand_override;
    if (!bench_spec.empty()) {
        for (const std::string& item : evacsim::detail::split_csv_line(bench_spec)) {
            try {
                opt.bench_k_values.push_back(std::stoi(item));
            } catch (const std::exception&) {
                std::cerr << "error: bad --bench-k value '" << item << "'\n";
                return 1;
            }
        }
    }

    return evacsim::run_cli(opt);
}
