#include "qnr/solver.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "qnr/baseline.hpp"
#include "qnr/errors.hpp"

namespace qnr {
namespace {

using steady_clock = std::chrono::steady_clock;

// DFS over ascending neighbor ids; emits paths in lexicographic order of the
// vertex sequence. Returns true when a branch was cut by the hop cap, i.e.
// longer paths may exist beyond the enumerated set.
bool enumerate_simple_paths(const Topology& t, int32_t src, int32_t dst, int32_t max_hops,
                            std::vector<std::vector<int32_t>>& out) {
    bool truncated = false;
    std::vector<char> on_path(t.n, 0);
    std::vector<int32_t> path{src};
    on_path[src] = 1;

    auto rec = [&](auto&& self, int32_t u, int32_t depth) -> void {
        for (int32_t v : t.out_neighbors[u]) {
            if (on_path[v]) continue;
            if (v == dst) {
                path.push_back(v);
                out.push_back(path);
                path.pop_back();
                continue;
            }
            if (depth + 1 >= max_hops) {
                truncated = true;  // cannot extend through v within the cap
                continue;
            }
            on_path[v] = 1;
            path.push_back(v);
            self(self, v, depth + 1);
            path.pop_back();
            on_path[v] = 0;
        }
    };
    if (max_hops >= 1) {
        rec(rec, src, 0);
    } else {
        truncated = true;
    }
    // Shortest first; DFS already yields lexicographic order within a length.
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return truncated;
}

std::vector<int32_t> path_links(const Topology& t, const std::vector<int32_t>& path) {
    std::vector<int32_t> links;
    links.reserve(path.size());
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        links.push_back(path[k] * t.n + path[k + 1]);
    }
    std::sort(links.begin(), links.end());
    return links;
}

int64_t symdiff_size(const std::vector<int32_t>& a, const std::vector<int32_t>& b) {
    size_t ia = 0, ib = 0;
    int64_t diff = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] == b[ib]) {
            ++ia, ++ib;
        } else if (a[ia] < b[ib]) {
            ++diff, ++ia;
        } else {
            ++diff, ++ib;
        }
    }
    return diff + static_cast<int64_t>(a.size() - ia) + static_cast<int64_t>(b.size() - ib);
}

struct Candidate {
    std::vector<int32_t> path;
    int64_t move_cost = 0;  // link set difference against the current path
};

struct SearchFlow {
    std::vector<Candidate> candidates;  // current path first, then shortest/lex
    int64_t demand = 0;
};

// Shared candidate construction so the solver and the oracle branch over the
// same ordered search space (identical tie-breaks).
std::vector<SearchFlow> build_search_space(const ReconfigProblem& prob, const SolverConfig& cfg,
                                           SolveStats& stats) {
    const FlowSet& flows = prob.flows;
    std::vector<SearchFlow> space(flows.p());
    for (int32_t f = 0; f < flows.p(); ++f) {
        const Flow& flow = flows.by_index(f);
        auto current = path_of(prob.current, flows, f);

        std::vector<std::vector<int32_t>> paths;
        if (enumerate_simple_paths(prob.topology, flow.src, flow.dst, cfg.max_path_hops, paths)) {
            stats.hop_cap_truncated = true;
        }
        int32_t shortest = prob.topology.hop_distance(flow.src, flow.dst);
        if (shortest < 0 || shortest > cfg.max_path_hops) {
            stats.warnings.push_back("flow " + std::to_string(flow.id) +
                                     ": no path within max_path_hops=" +
                                     std::to_string(cfg.max_path_hops));
        }
        auto it = std::find(paths.begin(), paths.end(), current);
        if (it != paths.end()) {
            std::rotate(paths.begin(), it, it + 1);
        }

        auto current_links = path_links(prob.topology, current);
        SearchFlow sf;
        sf.demand = flow.demand_mbps;
        sf.candidates.reserve(paths.size());
        for (auto& path : paths) {
            Candidate c;
            c.move_cost = symdiff_size(path_links(prob.topology, path), current_links);
            c.path = std::move(path);
            sf.candidates.push_back(std::move(c));
        }
        space[f] = std::move(sf);
    }
    return space;
}

std::vector<int32_t> branch_order(const ReconfigProblem& prob, FlowOrder order) {
    const FlowSet& flows = prob.flows;
    std::vector<int32_t> idx(flows.p());
    std::iota(idx.begin(), idx.end(), 0);
    if (order == FlowOrder::largest_demand_first) {
        std::stable_sort(idx.begin(), idx.end(), [&](int32_t a, int32_t b) {
            return flows.by_index(a).demand_mbps > flows.by_index(b).demand_mbps;
        });
    } else if (order == FlowOrder::overloaded_first) {
        std::vector<int64_t> loads = link_loads(prob.current, flows);
        std::vector<char> overloaded(flows.p(), 0);
        for (int32_t f = 0; f < flows.p(); ++f) {
            for (int32_t link : prob.current.links_of(f)) {
                if (loads[link] > prob.link_cap(link / prob.topology.n, link % prob.topology.n)) {
                    overloaded[f] = 1;
                    break;
                }
            }
        }
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int32_t a, int32_t b) { return overloaded[a] > overloaded[b]; });
    }
    return idx;
}

RoutingMatrix routing_from_choice(const ReconfigProblem& prob,
                                  const std::vector<SearchFlow>& space,
                                  const std::vector<int32_t>& choice) {
    RoutingMatrix m =
        RoutingMatrix::zeros(prob.topology.n, prob.flows.p(), prob.current.storage());
    for (int32_t f = 0; f < prob.flows.p(); ++f) {
        encode_path(space[f].candidates[choice[f]].path, prob.flows, f, prob.topology, m);
    }
    return m;
}

} // namespace

std::vector<std::vector<int32_t>> candidate_paths(const Topology& t, const Flow& flow,
                                                  int32_t max_hops) {
    if (flow.src == flow.dst) {
        throw ParamError("flow source equals destination");
    }
    std::vector<std::vector<int32_t>> paths;
    enumerate_simple_paths(t, flow.src, flow.dst, max_hops, paths);
    return paths;
}

Solution solve_qnr(const ReconfigProblem& prob, const SolverConfig& cfg) {
    auto t_start = steady_clock::now();
    Solution sol;
    const int32_t p = prob.flows.p();

    std::vector<SearchFlow> space = build_search_space(prob, cfg, sol.stats);
    for (int32_t f = 0; f < p; ++f) {
        if (space[f].candidates.empty()) {
            sol.status = SolveStatus::infeasible;
            sol.stats.wall_ms =
                std::chrono::duration<double, std::milli>(steady_clock::now() - t_start).count();
            return sol;
        }
    }

    std::vector<int32_t> order = branch_order(prob, cfg.flow_order);

    // A feasible baseline gives a valid upper bound whenever its paths lie
    // inside the hop cap (otherwise its routing is outside the search space).
    int64_t prune_threshold = INT64_MAX;
    if (cfg.seed_with_baseline && p > 0) {
        Solution base = reroute_shortest_path(prob);
        if (base.status == SolveStatus::optimal) {
            bool within_cap = true;
            for (int32_t f = 0; f < p && within_cap; ++f) {
                within_cap = static_cast<int32_t>(path_of(*base.routing, prob.flows, f).size()) -
                                 1 <=
                             cfg.max_path_hops;
            }
            if (within_cap) {
                prune_threshold = base.objective + 1;
                sol.stats.seeded_from_baseline = true;
            }
        }
    }

    CapacityState state = CapacityState::make(prob.topology, prob.mu);
    std::vector<int32_t> chosen(p, -1);
    std::vector<int32_t> best_choice;
    int64_t best_value = 0;
    bool have_leaf = false;
    bool out_of_time = false;
    const bool budgeted = cfg.time_budget_s > 0.0;
    const auto deadline = t_start + std::chrono::duration_cast<steady_clock::duration>(
                                        std::chrono::duration<double>(cfg.time_budget_s));

    auto dfs = [&](auto&& self, int32_t k, int64_t g) -> void {
        if (out_of_time) return;
        if (k == p) {
            best_value = g;
            best_choice = chosen;
            have_leaf = true;
            prune_threshold = g;  // later equal-cost leaves are lex-greater
            return;
        }
        int32_t f = order[k];
        auto& sf = space[f];
        for (int32_t idx = 0; idx < static_cast<int32_t>(sf.candidates.size()); ++idx) {
            const Candidate& cand = sf.candidates[idx];
            int64_t g2 = g + cand.move_cost;
            if (g2 >= prune_threshold) continue;
            if (!state.admits(cand.path, sf.demand)) continue;

            ++sol.stats.nodes;
            if (budgeted && (sol.stats.nodes & 255) == 0 && steady_clock::now() > deadline) {
                out_of_time = true;
                return;
            }

            state.commit(cand.path, sf.demand);
            chosen[f] = idx;

            // Admissible bound: each unfixed flow pays at least its cheapest
            // candidate that still fits the shrinking residuals. A flow with
            // no fitting candidate kills the subtree.
            auto sweep_start = steady_clock::now();
            int64_t h = 0;
            bool dead = false;
            for (int32_t m = k + 1; m < p && !dead; ++m) {
                auto& rest = space[order[m]];
                int64_t min_cost = -1;
                for (const Candidate& c : rest.candidates) {
                    if (min_cost >= 0 && c.move_cost >= min_cost) continue;
                    if (state.admits(c.path, rest.demand)) {
                        min_cost = c.move_cost;
                        if (min_cost == 0) break;
                    }
                }
                if (min_cost < 0) {
                    dead = true;
                } else {
                    h += min_cost;
                }
            }
            sol.stats.constraint_check_ms[static_cast<size_t>(ConstraintId::capacity)] +=
                std::chrono::duration<double, std::milli>(steady_clock::now() - sweep_start)
                    .count();

            if (!dead && g2 + h < prune_threshold) {
                self(self, k + 1, g2);
            }
            state.release(cand.path, sf.demand);
            chosen[f] = -1;
            if (out_of_time) return;
        }
    };
    dfs(dfs, 0, 0);

    if (have_leaf) {
        sol.status = out_of_time ? SolveStatus::timed_out : SolveStatus::optimal;
        sol.objective = best_value;
        sol.routing = routing_from_choice(prob, space, best_choice);
    } else {
        sol.status = out_of_time ? SolveStatus::timed_out : SolveStatus::infeasible;
    }
    sol.stats.wall_ms =
        std::chrono::duration<double, std::milli>(steady_clock::now() - t_start).count();
    return sol;
}

Solution brute_force(const ReconfigProblem& prob, const SolverConfig& cfg) {
    auto t_start = steady_clock::now();
    Solution sol;
    const int32_t p = prob.flows.p();

    std::vector<SearchFlow> space = build_search_space(prob, cfg, sol.stats);
    __int128 assignments = 1;
    for (int32_t f = 0; f < p; ++f) {
        if (space[f].candidates.empty()) {
            sol.status = SolveStatus::infeasible;
            return sol;
        }
        assignments *= static_cast<int64_t>(space[f].candidates.size());
        if (assignments > 10'000'000) {
            std::string sizes;
            for (int32_t g2 = 0; g2 < p; ++g2) {
                sizes += (g2 ? " x " : "") + std::to_string(space[g2].candidates.size());
            }
            throw GuardError("brute force refused: candidate product " + sizes + " exceeds 1e7");
        }
    }

    std::vector<int32_t> idx(p, 0);
    std::vector<int32_t> best_choice;
    int64_t best_value = 0;
    bool have_best = false;
    ValidateOptions vopts;
    vopts.timings_ms = &sol.stats.constraint_check_ms;

    while (true) {
        ++sol.stats.nodes;
        RoutingMatrix m = routing_from_choice(prob, space, idx);
        if (validate(m, prob, vopts).empty()) {
            int64_t obj = sftc(m, prob.current);
            if (!have_best || obj < best_value) {
                best_value = obj;
                best_choice = idx;
                have_best = true;
            }
        }
        // Odometer, rightmost flow fastest: lexicographic over flow ids.
        int32_t pos = p - 1;
        while (pos >= 0 && idx[pos] + 1 >= static_cast<int32_t>(space[pos].candidates.size())) {
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++idx[pos];
    }

    if (have_best) {
        sol.status = SolveStatus::optimal;
        sol.objective = best_value;
        sol.routing = routing_from_choice(prob, space, best_choice);
    } else {
        sol.status = SolveStatus::infeasible;
    }
    sol.stats.wall_ms =
        std::chrono::duration<double, std::milli>(steady_clock::now() - t_start).count();
    return sol;
}

} // namespace qnr
