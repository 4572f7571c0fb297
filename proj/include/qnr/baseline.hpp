#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qnr/routing.hpp"
#include "qnr/solution.hpp"

namespace qnr {

// Integer residual-capacity book-keeping under the utilization cap mu.
struct CapacityState {
    int32_t n = 0;
    std::vector<int64_t> cap;   // floor(mu * B) per link id, -1 where no link
    std::vector<int64_t> used;

    static CapacityState make(const Topology& t, Ratio mu);
    bool admits(std::span<const int32_t> path, int64_t demand) const;
    void commit(std::span<const int32_t> path, int64_t demand);
    void release(std::span<const int32_t> path, int64_t demand);
    int64_t residual(int32_t i, int32_t j) const {
        size_t id = static_cast<size_t>(i) * n + j;
        return cap[id] - used[id];
    }
};

struct BaselineConfig {
    FlowOrder order = FlowOrder::input_order;
};

// The conventional comparator: clears all commitments, then gives every flow
// the minimum-hop path with enough residual capacity, in processing order,
// with no preference for the flow's previous path. Objective is the SFTC
// against the problem's current routing.
Solution reroute_shortest_path(const ReconfigProblem& prob, const BaselineConfig& cfg = {});

// Primary routing for one newly arrived flow: minimum-hop residual-feasible
// path, lexicographically smallest among ties, or nothing when saturated.
std::optional<std::vector<int32_t>> route_new_flow(const Topology& t, const CapacityState& state,
                                                   const Flow& flow);

} // namespace qnr
