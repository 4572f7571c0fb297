#pragma once

#include <vector>

#include "qnr/routing.hpp"
#include "qnr/solution.hpp"

namespace qnr {

// All simple directed paths src -> dst with at most max_hops links, shortest
// first, lexicographic by switch sequence within a length. Deterministic.
std::vector<std::vector<int32_t>> candidate_paths(const Topology& t, const Flow& flow,
                                                  int32_t max_hops);

// Exact minimum-SFTC reconfiguration: depth-first branch and bound over
// per-flow candidate paths with incremental residual capacities. Returns the
// feasible routing with globally minimal SFTC within the hop cap; ties go to
// the lexicographically smallest vector of candidate indices in branch order
// (flow id order under the default input ordering, current path first).
Solution solve_qnr(const ReconfigProblem& prob, const SolverConfig& cfg = {});

// Exhaustive oracle: evaluates every assignment of candidate paths to flows,
// accepting via the full validate sweep. Refuses when the assignment count
// exceeds 1e7. Tie-breaks identically to solve_qnr.
Solution brute_force(const ReconfigProblem& prob, const SolverConfig& cfg = {});

} // namespace qnr
