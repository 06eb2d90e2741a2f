#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "evacsim/errors.hpp"
#include "evacsim/geo.hpp"
#include "evacsim/matrix.hpp"

namespace evacsim {

struct Station {
    std::string id;
    std::string name;
    double lat = 0.0;  // decimal degrees, [-90, 90]
    double lon = 0.0;  // decimal degrees, [-180, 180]
    std::string line_id;
    std::string operator_id;
    double daily_passengers = 0.0;  // persons/day, >= 0
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

inline double parse_number(const std::string& field, int line_no, const char* what) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty()) {
        throw ParseError(line_no, std::string("cannot parse ") + what + " from '" + field + "'");
    }
    return value;
}

inline void format_number(std::ostream& out, double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    out.write(buf, ptr - buf);
}

// Reads the next line, stripping a UTF-8 BOM on the very first one.
inline bool next_line(std::istream& in, std::string& line, bool first) {
    if (!std::getline(in, line)) return false;
    if (first && line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' && line[2] == '\xBF') {
        line.erase(0, 3);
    }
    return true;
}

}  // namespace detail

/// Immutable station graph. Station index i in 0..n-1 is the canonical index
/// used by every matrix built from this model; it is the file order of the
/// stations source. Adjacency pairs are unordered, stored with i < j, sorted
/// and deduplicated.
class NetworkModel {
  public:
    NetworkModel() = default;

    NetworkModel(std::vector<Station> stations, std::vector<std::pair<int, int>> edges)
        : stations_(std::move(stations)) {
        const int n = static_cast<int>(stations_.size());
        for (int i = 0; i < n; ++i) {
            const Station& s = stations_[i];
            if (s.lat < -90.0 || s.lat > 90.0)
                throw ContractError("station '" + s.id + "': lat out of [-90, 90]");
            if (s.lon < -180.0 || s.lon > 180.0)
                throw ContractError("station '" + s.id + "': lon out of [-180, 180]");
            if (s.daily_passengers < 0.0)
                throw ContractError("station '" + s.id + "': negative daily_passengers");
            if (!index_by_id_.emplace(s.id, i).second)
                throw UniquenessError("duplicate station id '" + s.id + "'");
        }
        edges_.reserve(edges.size());
        for (auto [a, b] : edges) {
            if (a < 0 || a >= n || b < 0 || b >= n)
                throw ContractError("edge index out of range");
            if (a == b)
                throw ContractError("self-loop edge at station '" + stations_[a].id + "'");
            if (a > b) std::swap(a, b);
            edges_.emplace_back(a, b);
        }
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    }

    /// Parses the stations and edges CSV streams (see file formats below).
    /// Throws ParseError / UniquenessError / ReferenceError on bad input.
    ///
    ///   stations: header `id,name,lat,lon,line_id,operator_id,daily_passengers`
    ///   edges:    header `from_id,to_id`
    static NetworkModel load(std::istream& stations_csv, std::istream& edges_csv) {
        std::vector<Station> stations;
        std::unordered_map<std::string, int> index;

        std::string line;
        int line_no = 1;
        if (!detail::next_line(stations_csv, line, true))
            throw ParseError(1, "stations file is empty");
        {
            auto header = detail::split_csv_line(line);
            const std::vector<std::string> expected = {"id",      "name",        "lat",
                                                       "lon",     "line_id",     "operator_id",
                                                       "daily_passengers"};
            if (header != expected)
                throw ParseError(1, "expected header id,name,lat,lon,line_id,operator_id,daily_passengers");
        }
        while (detail::next_line(stations_csv, line, false)) {
            ++line_no;
            if (detail::trim(line).empty()) continue;
            auto f = detail::split_csv_line(line);
            if (f.size() != 7)
                throw ParseError(line_no, "expected 7 fields, got " + std::to_string(f.size()));
            Station s;
            s.id = f[0];
            s.name = f[1];
            s.lat = detail::parse_number(f[2], line_no, "lat");
            s.lon = detail::parse_number(f[3], line_no, "lon");
            s.line_id = f[4];
            s.operator_id = f[5];
            s.daily_passengers = detail::parse_number(f[6], line_no, "daily_passengers");
            if (s.id.empty()) throw ParseError(line_no, "empty station id");
            if (s.lat < -90.0 || s.lat > 90.0)
                throw ParseError(line_no, "lat " + f[2] + " out of [-90, 90]");
            if (s.lon < -180.0 || s.lon > 180.0)
                throw ParseError(line_no, "lon " + f[3] + " out of [-180, 180]");
            if (s.daily_passengers < 0.0)
                throw ParseError(line_no, "negative daily_passengers " + f[6]);
            if (!index.emplace(s.id, static_cast<int>(stations.size())).second)
                throw UniquenessError("line " + std::to_string(line_no) +
                                      ": duplicate station id '" + s.id + "'");
            stations.push_back(std::move(s));
        }

        std::vector<std::pair<int, int>> edges;
        line_no = 1;
        if (!detail::next_line(edges_csv, line, true))
            throw ParseError(1, "edges file is empty");
        {
            auto header = detail::split_csv_line(line);
            const std::vector<std::string> expected = {"from_id", "to_id"};
            if (header != expected) throw ParseError(1, "expected header from_id,to_id");
        }
        while (detail::next_line(edges_csv, line, false)) {
            ++line_no;
            if (detail::trim(line).empty()) continue;
            auto f = detail::split_csv_line(line);
            if (f.size() != 2)
                throw ParseError(line_no, "expected 2 fields, got " + std::to_string(f.size()));
            auto from = index.find(f[0]);
            if (from == index.end())
                throw ReferenceError("line " + std::to_string(line_no) +
                                     ": edge references unknown station id '" + f[0] + "'");
            auto to = index.find(f[1]);
            if (to == index.end())
                throw ReferenceError("line " + std::to_string(line_no) +
                                     ": edge references unknown station id '" + f[1] + "'");
            if (from->second == to->second)
                throw ParseError(line_no, "self-loop edge at station '" + f[0] + "'");
            edges.emplace_back(from->second, to->second);
        }
        return NetworkModel(std::move(stations), std::move(edges));
    }

    static NetworkModel load_files(const std::string& stations_path, const std::string& edges_path) {
        std::ifstream st(stations_path);
        if (!st) throw Error("cannot open stations file '" + stations_path + "'");
        std::ifstream ed(edges_path);
        if (!ed) throw Error("cannot open edges file '" + edges_path + "'");
        return load(st, ed);
    }

    std::size_t size() const { return stations_.size(); }
    const std::vector<Station>& stations() const { return stations_; }
    const Station& station(std::size_t i) const { return stations_[i]; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    std::optional<int> try_index_of(const std::string& id) const {
        auto it = index_by_id_.find(id);
        if (it == index_by_id_.end()) return std::nullopt;
        return it->second;
    }

    int index_of(const std::string& id) const {
        auto idx = try_index_of(id);
        if (!idx) throw ReferenceError("unknown station id '" + id + "'");
        return *idx;
    }

    void write_stations(std::ostream& out) const {
        out << "id,name,lat,lon,line_id,operator_id,daily_passengers\n";
        for (const Station& s : stations_) {
            out << s.id << ',' << s.name << ',';
            detail::format_number(out, s.lat);
            out << ',';
            detail::format_number(out, s.lon);
            out << ',' << s.line_id << ',' << s.operator_id << ',';
            detail::format_number(out, s.daily_passengers);
            out << '\n';
        }
    }

    void write_edges(std::ostream& out) const {
        out << "from_id,to_id\n";
        for (auto [a, b] : edges_) {
            out << stations_[a].id << ',' << stations_[b].id << '\n';
        }
    }

  private:
    std::vector<Station> stations_;
    std::vector<std::pair<int, int>> edges_;
    std::unordered_map<std::string, int> index_by_id_;
};

/// a[i][j] = 1 iff stations i and j are consecutive on some line.
/// Symmetric, zero diagonal.
inline SquareMatrix connectivity_matrix(const NetworkModel& net) {
    SquareMatrix m(net.size(), 0.0);
    for (auto [a, b] : net.edges()) {
        m(a, b) = 1.0;
        m(b, a) = 1.0;
    }
    return m;
}

/// a[i][j] = haversine distance in km between stations i and j.
/// Symmetric, zero diagonal.
inline SquareMatrix distance_matrix(const NetworkModel& net) {
    const std::size_t n = net.size();
    SquareMatrix m(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const Station& a = net.station(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const Station& b = net.station(j);
            const double d = haversine_km(a.lat, a.lon, b.lat, b.lon);
            m(i, j) = d;
            m(j, i) = d;
        }
    }
    return m;
}

}  // namespace evacsim
