#include "qnr/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <numeric>

#include "qnr/errors.hpp"

namespace qnr {

CapacityState CapacityState::make(const Topology& t, Ratio mu) {
    CapacityState s;
    s.n = t.n;
    s.cap.assign(static_cast<size_t>(t.n) * t.n, -1);
    s.used.assign(s.cap.size(), 0);
    for (int32_t i = 0; i < t.n; ++i) {
        for (int32_t j = 0; j < t.n; ++j) {
            if (t.bw(i, j) > 0) {
                s.cap[static_cast<size_t>(i) * t.n + j] = mu.mul_floor(t.bw(i, j));
            }
        }
    }
    return s;
}

bool CapacityState::admits(std::span<const int32_t> path, int64_t demand) const {
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        size_t id = static_cast<size_t>(path[k]) * n + path[k + 1];
        if (used[id] + demand > cap[id]) return false;
    }
    return true;
}

void CapacityState::commit(std::span<const int32_t> path, int64_t demand) {
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        used[static_cast<size_t>(path[k]) * n + path[k + 1]] += demand;
    }
}

void CapacityState::release(std::span<const int32_t> path, int64_t demand) {
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        used[static_cast<size_t>(path[k]) * n + path[k + 1]] -= demand;
    }
}

std::optional<std::vector<int32_t>> route_new_flow(const Topology& t, const CapacityState& state,
                                                   const Flow& flow) {
    // Hop distance to the destination over links that still admit the demand.
    std::vector<int32_t> dist(t.n, -1);
    std::deque<int32_t> queue{flow.dst};
    dist[flow.dst] = 0;
    auto admissible = [&](int32_t i, int32_t j) {
        size_t id = static_cast<size_t>(i) * t.n + j;
        return state.cap[id] >= 0 && state.used[id] + flow.demand_mbps <= state.cap[id];
    };
    while (!queue.empty()) {
        int32_t v = queue.front();
        queue.pop_front();
        for (int32_t u : t.in_neighbors[v]) {
            if (dist[u] < 0 && admissible(u, v)) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    if (dist[flow.src] < 0) return std::nullopt;

    // Greedy descent by ascending switch id gives the lexicographically
    // smallest minimum-hop path.
    std::vector<int32_t> path{flow.src};
    int32_t cur = flow.src;
    while (cur != flow.dst) {
        int32_t next = -1;
        for (int32_t v : t.out_neighbors[cur]) {
            if (dist[v] == dist[cur] - 1 && admissible(cur, v)) {
                next = v;
                break;
            }
        }
        if (next < 0) return std::nullopt;  // unreachable with consistent dist
        path.push_back(next);
        cur = next;
    }
    return path;
}

Solution reroute_shortest_path(const ReconfigProblem& prob, const BaselineConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    const FlowSet& flows = prob.flows;
    int32_t p = flows.p();

    std::vector<int32_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    if (cfg.order == FlowOrder::largest_demand_first) {
        std::stable_sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
            return flows.by_index(a).demand_mbps > flows.by_index(b).demand_mbps;
        });
    }

    CapacityState state = CapacityState::make(prob.topology, prob.mu);
    RoutingMatrix routing =
        RoutingMatrix::zeros(prob.topology.n, p, prob.current.storage());
    Solution sol;
    for (int32_t idx : order) {
        const Flow& flow = flows.by_index(idx);
        auto path = route_new_flow(prob.topology, state, flow);
        if (!path.has_value()) {
            sol.status = SolveStatus::infeasible;
            sol.stats.wall_ms = std::chrono::duration<double, std::milli>(
                                    std::chrono::steady_clock::now() - start)
                                    .count();
            return sol;
        }
        state.commit(*path, flow.demand_mbps);
        encode_path(*path, flows, idx, prob.topology, routing);
    }
    sol.status = SolveStatus::optimal;
    sol.objective = sftc(routing, prob.current);
    sol.routing = std::move(routing);
    sol.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return sol;
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::timed_out: return "timed_out";
    }
    return "unknown";
}

} // namespace qnr
