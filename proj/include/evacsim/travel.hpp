#pragma once

#include <cstdint>
#include <queue>
#include <thread>
#include <tuple>
#include <vector>

#include "evacsim/errors.hpp"
#include "evacsim/matrix.hpp"
#include "evacsim/network.hpp"

namespace evacsim {

struct TravelParams {
    double train_speed_m_per_min = 800.0;  // v
    double stop_time_min = 1.0;            // t_s, per intermediate stop
    double transfer_time_min = 7.5;        // t_c, per line change
    // When true, stop and transfer penalties are folded into the edge weights
    // of the search itself instead of being added along the minimum-time path
    // afterwards. The default (false) mirrors the post-hoc accumulation.
    bool penalty_aware = false;
};

/// All-pairs train travel times in minutes. Zero diagonal; kUnreachable for
/// disconnected pairs.
struct TrainTimeMatrix {
    SquareMatrix values;
};

namespace detail {

struct TimeEdge {
    int to;
    double minutes;      // in-train time, haversine_m / v
    bool line_change;    // line label differs between the two endpoints
};

inline std::vector<std::vector<TimeEdge>> time_adjacency(const NetworkModel& net, double speed) {
    std::vector<std::vector<TimeEdge>> adj(net.size());
    for (auto [a, b] : net.edges()) {
        const Station& sa = net.station(a);
        const Station& sb = net.station(b);
        const double t = haversine_m(sa.lat, sa.lon, sb.lat, sb.lon) / speed;
        const bool change = sa.line_id != sb.line_id;
        adj[a].push_back({b, t, change});
        adj[b].push_back({a, t, change});
    }
    // edges() is sorted, so each adjacency list is already ordered by the
    // insertion pass except for the reverse direction; sort for determinism
    for (auto& list : adj) {
        std::sort(list.begin(), list.end(),
                  [](const TimeEdge& x, const TimeEdge& y) { return x.to < y.to; });
    }
    return adj;
}

// Single-source run of the post-hoc scheme. The label per node is the
// lexicographic triple (time, transfers, hops): minimum in-train time first,
// then fewest line changes, then fewest stops. The triple is additive per
// edge, so plain Dijkstra applies. The resulting cost is
//   time + stop_time * hops + transfer_time * transfers.
inline void faithful_row(const std::vector<std::vector<TimeEdge>>& adj, int source,
                         const TravelParams& p, SquareMatrix& out) {
    const int n = static_cast<int>(adj.size());
    std::vector<double> time(n, kUnreachable);
    std::vector<int> transfers(n, 0), hops(n, 0);
    std::vector<std::uint8_t> done(n, 0);

    using Label = std::tuple<double, int, int, int>;  // time, transfers, hops, node
    std::priority_queue<Label, std::vector<Label>, std::greater<Label>> queue;
    time[source] = 0.0;
    queue.push({0.0, 0, 0, source});

    while (!queue.empty()) {
        auto [t, x, h, u] = queue.top();
        queue.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (const TimeEdge& e : adj[u]) {
            if (done[e.to]) continue;
            const double nt = t + e.minutes;
            const int nx = x + (e.line_change ? 1 : 0);
            const int nh = h + 1;
            if (std::tuple(nt, nx, nh) < std::tuple(time[e.to], transfers[e.to], hops[e.to])) {
                time[e.to] = nt;
                transfers[e.to] = nx;
                hops[e.to] = nh;
                queue.push({nt, nx, nh, e.to});
            }
        }
    }
    for (int v = 0; v < n; ++v) {
        out(source, v) = done[v]
                             ? time[v] + p.stop_time_min * hops[v] + p.transfer_time_min * transfers[v]
                             : kUnreachable;
    }
    out(source, source) = 0.0;
}

// Penalty-aware variant: the search itself minimizes the full cost.
inline void penalty_aware_row(const std::vector<std::vector<TimeEdge>>& adj, int source,
                              const TravelParams& p, SquareMatrix& out) {
    const int n = static_cast<int>(adj.size());
    std::vector<double> dist(n, kUnreachable);
    std::vector<std::uint8_t> done(n, 0);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
    dist[source] = 0.0;
    queue.push({0.0, source});
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (const TimeEdge& e : adj[u]) {
            const double nd = d + e.minutes + p.stop_time_min +
                              (e.line_change ? p.transfer_time_min : 0.0);
            if (nd < dist[e.to]) {
                dist[e.to] = nd;
                queue.push({nd, e.to});
            }
        }
    }
    for (int v = 0; v < n; ++v) out(source, v) = done[v] ? dist[v] : kUnreachable;
    out(source, source) = 0.0;
}

// Runs f(i) for i in [0, count), chunked over a few threads. Each call must
// touch disjoint state.
template <typename F>
inline void parallel_for(std::size_t count, F&& f) {
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1 || count < 64) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// Builds the all-pairs train travel time matrix.
///
/// Edge weight between adjacent stations is haversine meters / train speed.
/// For each pair the minimum-time path is found first; stop time (per stop,
/// destination halt included) and transfer time (per change of line label
/// along the path) are then accumulated on top. Ties on time are broken by
/// fewer transfers, then fewer stops, which pins the accumulated value;
/// which of several equal-valued paths is taken is not observable here.
/// Per-source runs are independent and execute concurrently.
inline TrainTimeMatrix train_time_matrix(const NetworkModel& net, const TravelParams& params = {}) {
    if (params.train_speed_m_per_min <= 0.0)
        throw ContractError("train_speed_m_per_min must be > 0");
    if (params.stop_time_min <= 0.0) throw ContractError("stop_time_min must be > 0");
    if (params.transfer_time_min <= 0.0) throw ContractError("transfer_time_min must be > 0");

    const auto adj = detail::time_adjacency(net, params.train_speed_m_per_min);
    SquareMatrix out(net.size(), kUnreachable);
    detail::parallel_for(net.size(), [&](std::size_t source) {
        if (params.penalty_aware) {
            detail::penalty_aware_row(adj, static_cast<int>(source), params, out);
        } else {
            detail::faithful_row(adj, static_cast<int>(source), params, out);
        }
    });
    return TrainTimeMatrix{std::move(out)};
}

}  // namespace evacsim
