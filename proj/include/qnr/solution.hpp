#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qnr/routing.hpp"

namespace qnr {

enum class SolveStatus { optimal, infeasible, timed_out };

const char* to_string(SolveStatus status);

enum class FlowOrder { input_order, overloaded_first, largest_demand_first };

struct SolveStats {
    uint64_t nodes = 0;
    double wall_ms = 0.0;
    // Time spent checking each constraint id (capacity checks for the
    // branch-and-bound search, full validate sweeps for brute force).
    std::array<double, 10> constraint_check_ms{};
    bool hop_cap_truncated = false;  // path enumeration hit the hop cap
    bool seeded_from_baseline = false;
    std::vector<std::string> warnings;
};

struct Solution {
    SolveStatus status = SolveStatus::infeasible;
    std::optional<RoutingMatrix> routing;
    int64_t objective = -1;  // SFTC against the problem's current routing
    SolveStats stats;
};

struct SolverConfig {
    int32_t max_path_hops = 6;      // per-flow simple-path length cap
    double time_budget_s = 0.0;     // wall-clock cap, 0 = unlimited
    FlowOrder flow_order = FlowOrder::input_order;
    bool seed_with_baseline = true;
};

} // namespace qnr
