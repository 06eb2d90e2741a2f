#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "evacsim/cost.hpp"
#include "evacsim/errors.hpp"
#include "evacsim/network.hpp"
#include "evacsim/travel.hpp"

namespace evacsim {

/// Parsed scenario configuration. Defaults mirror the standard experimental
/// constants, so a config that only names the blocked stations reproduces
/// the baseline setting.
struct ScenarioConfig {
    std::vector<std::string> blocked_station_ids;
    std::vector<std::string> blocked_line_ids;  // each expands to all stations on the line
    double t_lm_minutes = 30.0;
    double capacity_ratio = 1.5;
    int k = 30;
    TravelParams travel;
    double walking_speed_kmh = 5.0;
    double window_minutes = 30.0;
    double operating_minutes_per_day = 1080.0;
    std::string demand_override_path;  // empty = none
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    for (const std::string& raw : split_csv_line(value)) {
        if (!raw.empty()) items.push_back(raw);
    }
    return items;
}

inline bool parse_bool(const std::string& value, int line_no) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ParseError(line_no, "expected true/false, got '" + value + "'");
}

}  // namespace detail

/// Key-value scenario file: one `key = value` per line, `#` starts a
/// comment, lists are comma-separated. Unknown keys are errors.
inline ScenarioConfig parse_scenario_config(std::istream& in) {
    ScenarioConfig cfg;
    std::string line;
    int line_no = 0;
    bool first = true;
    while (detail::next_line(in, line, first)) {
        first = false;
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        const std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ParseError(line_no, "expected `key = value`, got '" + trimmed + "'");
        const std::string key = detail::trim(trimmed.substr(0, eq));
        const std::string value = detail::trim(trimmed.substr(eq + 1));

        if (key == "blocked_stations") {
            cfg.blocked_station_ids = detail::split_list(value);
        } else if (key == "blocked_lines") {
            cfg.blocked_line_ids = detail::split_list(value);
        } else if (key == "t_lm_minutes") {
            cfg.t_lm_minutes = detail::parse_number(value, line_no, "t_lm_minutes");
        } else if (key == "capacity_ratio") {
            cfg.capacity_ratio = detail::parse_number(value, line_no, "capacity_ratio");
        } else if (key == "k") {
            cfg.k = static_cast<int>(detail::parse_number(value, line_no, "k"));
        } else if (key == "train_speed_m_per_min") {
            cfg.travel.train_speed_m_per_min =
                detail::parse_number(value, line_no, "train_speed_m_per_min");
        } else if (key == "stop_time_minutes") {
            cfg.travel.stop_time_min = detail::parse_number(value, line_no, "stop_time_minutes");
        } else if (key == "transfer_time_minutes") {
            cfg.travel.transfer_time_min =
                detail::parse_number(value, line_no, "transfer_time_minutes");
        } else if (key == "penalty_aware_routing") {
            cfg.travel.penalty_aware = detail::parse_bool(value, line_no);
        } else if (key == "walking_speed_kmh") {
            cfg.walking_speed_kmh = detail::parse_number(value, line_no, "walking_speed_kmh");
        } else if (key == "window_minutes") {
            cfg.window_minutes = detail::parse_number(value, line_no, "window_minutes");
        } else if (key == "operating_minutes_per_day") {
            cfg.operating_minutes_per_day =
                detail::parse_number(value, line_no, "operating_minutes_per_day");
        } else if (key == "demand_override") {
            cfg.demand_override_path = value;
        } else {
            throw ParseError(line_no, "unknown key '" + key + "'");
        }
    }
    return cfg;
}

/// Expands blocked station ids and blocked line ids into the indicator
/// vector J. Every id must resolve; a blocked line blocks exactly the
/// stations whose line_id matches.
inline std::vector<std::uint8_t> resolve_blocked(const NetworkModel& net,
                                                 const ScenarioConfig& cfg) {
    if (cfg.blocked_station_ids.empty() && cfg.blocked_line_ids.empty())
        throw ContractError("scenario blocks no station and no line");
    std::vector<std::uint8_t> blocked(net.size(), 0);
    for (const std::string& id : cfg.blocked_station_ids) {
        blocked[net.index_of(id)] = 1;
    }
    for (const std::string& line_id : cfg.blocked_line_ids) {
        bool any = false;
        for (std::size_t i = 0; i < net.size(); ++i) {
            if (net.station(i).line_id == line_id) {
                blocked[i] = 1;
                any = true;
            }
        }
        if (!any) throw ReferenceError("unknown line id '" + line_id + "'");
    }
    return blocked;
}

/// Demand override file: CSV `id,passengers_in_window`. Listed stations
/// replace the scaled baseline value; everything else keeps it.
inline std::vector<double> apply_demand_override(std::istream& in, const NetworkModel& net,
                                                 std::vector<double> base) {
    if (base.size() != net.size())
        throw ContractError("demand baseline does not match station count");
    std::string line;
    if (!detail::next_line(in, line, true)) throw ParseError(1, "demand override file is empty");
    {
        auto header = detail::split_csv_line(line);
        const std::vector<std::string> expected = {"id", "passengers_in_window"};
        if (header != expected) throw ParseError(1, "expected header id,passengers_in_window");
    }
    int line_no = 1;
    std::unordered_set<std::string> seen;
    while (detail::next_line(in, line, false)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 2)
            throw ParseError(line_no, "expected 2 fields, got " + std::to_string(f.size()));
        if (!seen.insert(f[0]).second)
            throw UniquenessError("line " + std::to_string(line_no) + ": duplicate id '" + f[0] +
                                  "' in demand override");
        const int idx = net.index_of(f[0]);
        const double value = detail::parse_number(f[1], line_no, "passengers_in_window");
        if (value < 0.0) throw ParseError(line_no, "negative passenger count");
        base[idx] = value;
    }
    return base;
}

}  // namespace evacsim
