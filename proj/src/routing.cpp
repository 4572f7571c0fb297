#include "qnr/routing.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>
#include <unordered_map>

#include "qnr/errors.hpp"
#include "qnr/kernels.hpp"

namespace qnr {
namespace {

// Dense below ~16M entries, sparse above.
constexpr int64_t kDenseEntryLimit = int64_t{1} << 24;

void check_same_shape(const RoutingMatrix& a, const RoutingMatrix& b) {
    if (a.n() != b.n() || a.p() != b.p()) {
        throw ParamError("routing matrices have different shapes");
    }
}

int64_t symmetric_difference_size(const std::vector<int32_t>& a, const std::vector<int32_t>& b) {
    size_t ia = 0, ib = 0;
    int64_t diff = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] == b[ib]) {
            ++ia;
            ++ib;
        } else if (a[ia] < b[ib]) {
            ++diff;
            ++ia;
        } else {
            ++diff;
            ++ib;
        }
    }
    return diff + static_cast<int64_t>(a.size() - ia) + static_cast<int64_t>(b.size() - ib);
}

int64_t intersection_size(const std::vector<int32_t>& a, const std::vector<int32_t>& b) {
    size_t ia = 0, ib = 0;
    int64_t common = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] == b[ib]) {
            ++common;
            ++ia;
            ++ib;
        } else if (a[ia] < b[ib]) {
            ++ia;
        } else {
            ++ib;
        }
    }
    return common;
}

} // namespace

RoutingMatrix RoutingMatrix::zeros(int32_t n, int32_t p, Storage storage) {
    if (n <= 0 || p < 0) {
        throw ParamError("routing matrix needs n > 0 and p >= 0");
    }
    RoutingMatrix m;
    m.n_ = n;
    m.p_ = p;
    m.storage_ = storage;
    if (storage == Storage::dense) {
        m.words_per_link_ = static_cast<size_t>((p + 63) / 64);
        m.words_.assign(static_cast<size_t>(n) * n * m.words_per_link_, 0);
    } else {
        m.flow_links_.assign(p, {});
    }
    return m;
}

RoutingMatrix RoutingMatrix::zeros_auto(int32_t n, int32_t p) {
    int64_t entries = static_cast<int64_t>(n) * n * std::max(p, 1);
    return zeros(n, p, entries <= kDenseEntryLimit ? Storage::dense : Storage::sparse);
}

bool RoutingMatrix::at(int32_t i, int32_t j, int32_t f) const {
    if (storage_ == Storage::dense) {
        size_t base = (static_cast<size_t>(i) * n_ + j) * words_per_link_;
        return (words_[base + static_cast<size_t>(f) / 64] >> (f % 64)) & 1;
    }
    const auto& links = flow_links_[f];
    return std::binary_search(links.begin(), links.end(), i * n_ + j);
}

void RoutingMatrix::set(int32_t i, int32_t j, int32_t f, bool value) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_ || f < 0 || f >= p_) {
        throw ParamError("routing matrix index out of range");
    }
    if (storage_ == Storage::dense) {
        size_t base = (static_cast<size_t>(i) * n_ + j) * words_per_link_;
        uint64_t& word = words_[base + static_cast<size_t>(f) / 64];
        uint64_t bit = uint64_t{1} << (f % 64);
        if (value) {
            word |= bit;
        } else {
            word &= ~bit;
        }
        return;
    }
    auto& links = flow_links_[f];
    int32_t id = i * n_ + j;
    auto it = std::lower_bound(links.begin(), links.end(), id);
    if (value) {
        if (it == links.end() || *it != id) links.insert(it, id);
    } else {
        if (it != links.end() && *it == id) links.erase(it);
    }
}

void RoutingMatrix::clear_flow(int32_t f) {
    if (storage_ == Storage::sparse) {
        flow_links_[f].clear();
        return;
    }
    uint64_t bit = uint64_t{1} << (f % 64);
    size_t word_idx = static_cast<size_t>(f) / 64;
    for (size_t link = 0; link < static_cast<size_t>(n_) * n_; ++link) {
        words_[link * words_per_link_ + word_idx] &= ~bit;
    }
}

std::vector<int32_t> RoutingMatrix::links_of(int32_t f) const {
    if (storage_ == Storage::sparse) {
        return flow_links_[f];
    }
    std::vector<int32_t> out;
    uint64_t bit = uint64_t{1} << (f % 64);
    size_t word_idx = static_cast<size_t>(f) / 64;
    for (size_t link = 0; link < static_cast<size_t>(n_) * n_; ++link) {
        if (words_[link * words_per_link_ + word_idx] & bit) {
            out.push_back(static_cast<int32_t>(link));
        }
    }
    return out;
}

int64_t RoutingMatrix::entry_count() const {
    if (storage_ == Storage::dense) {
        return static_cast<int64_t>(
            kernels::active_ops().popcount(words_.data(), words_.size()));
    }
    int64_t sum = 0;
    for (const auto& links : flow_links_) sum += static_cast<int64_t>(links.size());
    return sum;
}

RoutingMatrix RoutingMatrix::converted(Storage target) const {
    RoutingMatrix out = zeros(n_, p_, target);
    for (int32_t f = 0; f < p_; ++f) {
        for (int32_t link : links_of(f)) {
            out.set(link / n_, link % n_, f, true);
        }
    }
    return out;
}

std::span<const uint64_t> RoutingMatrix::link_mask(int32_t i, int32_t j) const {
    size_t base = (static_cast<size_t>(i) * n_ + j) * words_per_link_;
    return {words_.data() + base, words_per_link_};
}

bool operator==(const RoutingMatrix& a, const RoutingMatrix& b) {
    if (a.n_ != b.n_ || a.p_ != b.p_) return false;
    if (a.storage_ == Storage::dense && b.storage_ == Storage::dense) {
        return a.words_ == b.words_;
    }
    if (a.storage_ == Storage::sparse && b.storage_ == Storage::sparse) {
        return a.flow_links_ == b.flow_links_;
    }
    for (int32_t f = 0; f < a.p_; ++f) {
        if (a.links_of(f) != b.links_of(f)) return false;
    }
    return true;
}

int64_t sftc(const RoutingMatrix& a, const RoutingMatrix& a0) {
    check_same_shape(a, a0);
    if (a.storage() == Storage::dense && a0.storage() == Storage::dense) {
        return static_cast<int64_t>(kernels::active_ops().xor_popcount(
            a.dense_words().data(), a0.dense_words().data(), a.dense_words().size()));
    }
    int64_t total = 0;
    for (int32_t f = 0; f < a.p(); ++f) {
        total += symmetric_difference_size(a.links_of(f), a0.links_of(f));
    }
    return total;
}

int64_t sftc_linear(const RoutingMatrix& a, const RoutingMatrix& a0) {
    check_same_shape(a, a0);
    if (a.storage() == Storage::dense && a0.storage() == Storage::dense) {
        const auto& ops = kernels::active_ops();
        const uint64_t* wa = a.dense_words().data();
        const uint64_t* wb = a0.dense_words().data();
        size_t nw = a.dense_words().size();
        return static_cast<int64_t>(ops.popcount(wa, nw)) +
               static_cast<int64_t>(ops.popcount(wb, nw)) -
               2 * static_cast<int64_t>(ops.and_popcount(wa, wb, nw));
    }
    int64_t total = 0;
    for (int32_t f = 0; f < a.p(); ++f) {
        auto la = a.links_of(f);
        auto lb = a0.links_of(f);
        total += static_cast<int64_t>(la.size()) + static_cast<int64_t>(lb.size()) -
                 2 * intersection_size(la, lb);
    }
    return total;
}

std::string ViolationReport::str() const {
    std::ostringstream out;
    for (const Violation& v : items) {
        out << "constraint " << static_cast<int>(v.id) << ": " << v.detail << "\n";
    }
    return out.str();
}

std::vector<int64_t> link_loads(const RoutingMatrix& a, const FlowSet& flows) {
    int32_t n = a.n();
    std::vector<int64_t> loads(static_cast<size_t>(n) * n, 0);
    if (a.storage() == Storage::dense) {
        std::vector<int64_t> demands(a.p());
        for (int32_t f = 0; f < a.p(); ++f) demands[f] = flows.by_index(f).demand_mbps;
        const auto& ops = kernels::active_ops();
        for (int32_t i = 0; i < n; ++i) {
            for (int32_t j = 0; j < n; ++j) {
                loads[static_cast<size_t>(i) * n + j] = ops.masked_sum(
                    a.link_mask(i, j).data(), demands.data(), static_cast<size_t>(a.p()));
            }
        }
    } else {
        for (int32_t f = 0; f < a.p(); ++f) {
            int64_t demand = flows.by_index(f).demand_mbps;
            for (int32_t link : a.links_of(f)) {
                loads[link] += demand;
            }
        }
    }
    return loads;
}

ReconfigProblem make_problem(Topology topology, FlowSet flows, RoutingMatrix current, Ratio mu) {
    if (mu <= Ratio(0) || mu > Ratio(1)) {
        throw ParamError("link utilization ratio must be in (0,1]");
    }
    if (current.n() != topology.n || current.p() != flows.p()) {
        throw ParamError("routing matrix shape does not match topology/flows");
    }
    std::unordered_map<int64_t, int32_t> ids;
    for (int32_t idx = 0; idx < flows.p(); ++idx) {
        const Flow& f = flows.by_index(idx);
        if (f.src < 0 || f.src >= topology.n || f.dst < 0 || f.dst >= topology.n) {
            throw ValidationError("flow " + std::to_string(f.id) + " has an unknown endpoint");
        }
        if (f.src == f.dst) {
            throw ValidationError("flow " + std::to_string(f.id) + " has src == dst");
        }
        if (f.demand_mbps <= 0) {
            throw ValidationError("flow " + std::to_string(f.id) + " has non-positive demand");
        }
        if (!ids.emplace(f.id, idx).second) {
            throw ValidationError("duplicate flow id " + std::to_string(f.id));
        }
    }
    ReconfigProblem prob{std::move(topology), std::move(flows), std::move(current), mu};
    // A0 must be a structurally valid routing; capacity overload is allowed.
    ValidateOptions opts;
    opts.skip_mask = uint32_t{1} << static_cast<int>(ConstraintId::capacity);
    ViolationReport report = validate(prob.current, prob, opts);
    if (!report.empty()) {
        throw ValidationError("current routing is structurally invalid:\n" + report.str());
    }
    return prob;
}

ViolationReport validate(const RoutingMatrix& a, const ReconfigProblem& prob,
                         const ValidateOptions& opts) {
    using clock = std::chrono::steady_clock;
    const Topology& t = prob.topology;
    const FlowSet& flows = prob.flows;
    int32_t n = a.n();
    int32_t p = a.p();
    if (n != t.n || p != flows.p()) {
        throw ParamError("routing matrix shape does not match problem");
    }
    ViolationReport report;

    auto skipped = [&](ConstraintId id) {
        return (opts.skip_mask >> static_cast<int>(id)) & 1;
    };
    auto timed = [&](ConstraintId id, auto&& sweep) {
        if (skipped(id)) return;
        auto start = clock::now();
        sweep();
        if (opts.timings_ms != nullptr) {
            (*opts.timings_ms)[static_cast<size_t>(id)] +=
                std::chrono::duration<double, std::milli>(clock::now() - start).count();
        }
    };

    timed(ConstraintId::ghost_link, [&] {
        for (int32_t f = 0; f < p; ++f) {
            for (int32_t link : a.links_of(f)) {
                int32_t i = link / n, j = link % n;
                if (t.bw(i, j) <= 0) {
                    report.items.push_back({ConstraintId::ghost_link, i, j, f,
                                            "flow " + std::to_string(flows.by_index(f).id) +
                                                " routed on nonexistent link " +
                                                std::to_string(i) + "->" + std::to_string(j)});
                }
            }
        }
    });

    timed(ConstraintId::capacity, [&] {
        std::vector<int64_t> loads = link_loads(a, flows);
        for (int32_t i = 0; i < n; ++i) {
            for (int32_t j = 0; j < n; ++j) {
                if (t.bw(i, j) <= 0) continue;
                int64_t load = loads[static_cast<size_t>(i) * n + j];
                int64_t cap = prob.link_cap(i, j);
                if (load > cap) {
                    report.items.push_back({ConstraintId::capacity, i, j, -1,
                                            "link " + std::to_string(i) + "->" +
                                                std::to_string(j) + " load " +
                                                std::to_string(load) + " exceeds cap " +
                                                std::to_string(cap)});
                }
            }
        }
    });

    timed(ConstraintId::source_no_return, [&] {
        for (int32_t f = 0; f < p; ++f) {
            int32_t src = flows.by_index(f).src;
            int count = 0;
            for (int32_t i = 0; i < n; ++i) count += a.at(i, src, f);
            if (count != 0) {
                report.items.push_back({ConstraintId::source_no_return, -1, -1, f,
                                        "flow " + std::to_string(flows.by_index(f).id) +
                                            " re-enters its source switch"});
            }
        }
    });

    timed(ConstraintId::dest_no_exit, [&] {
        for (int32_t f = 0; f < p; ++f) {
            int32_t dst = flows.by_index(f).dst;
            int count = 0;
            for (int32_t j = 0; j < n; ++j) count += a.at(dst, j, f);
            if (count != 0) {
                report.items.push_back({ConstraintId::dest_no_exit, -1, -1, f,
                                        "flow " + std::to_string(flows.by_index(f).id) +
                                            " leaves its destination switch"});
            }
        }
    });

    timed(ConstraintId::source_out_one, [&] {
        for (int32_t f = 0; f < p; ++f) {
            int32_t src = flows.by_index(f).src;
            int count = 0;
            for (int32_t j = 0; j < n; ++j) count += a.at(src, j, f);
            if (count != 1) {
                report.items.push_back({ConstraintId::source_out_one, -1, -1, f,
                                        "flow " + std::to_string(flows.by_index(f).id) + " has " +
                                            std::to_string(count) +
                                            " outgoing links at its source, needs 1"});
            }
        }
    });

    timed(ConstraintId::dest_in_one, [&] {
        for (int32_t f = 0; f < p; ++f) {
            int32_t dst = flows.by_index(f).dst;
            int count = 0;
            for (int32_t i = 0; i < n; ++i) count += a.at(i, dst, f);
            if (count != 1) {
                report.items.push_back({ConstraintId::dest_in_one, -1, -1, f,
                                        "flow " + std::to_string(flows.by_index(f).id) + " has " +
                                            std::to_string(count) +
                                            " incoming links at its destination, needs 1"});
            }
        }
    });

    timed(ConstraintId::conservation, [&] {
        std::vector<int32_t> indeg(n), outdeg(n);
        for (int32_t f = 0; f < p; ++f) {
            std::fill(indeg.begin(), indeg.end(), 0);
            std::fill(outdeg.begin(), outdeg.end(), 0);
            for (int32_t link : a.links_of(f)) {
                ++outdeg[link / n];
                ++indeg[link % n];
            }
            const Flow& flow = flows.by_index(f);
            for (int32_t i = 0; i < n; ++i) {
                if (i == flow.src || i == flow.dst) continue;
                if (indeg[i] != outdeg[i]) {
                    report.items.push_back({ConstraintId::conservation, i, -1, f,
                                            "flow " + std::to_string(flow.id) + " unbalanced at " +
                                                "switch " + std::to_string(i) + " (in " +
                                                std::to_string(indeg[i]) + ", out " +
                                                std::to_string(outdeg[i]) + ")"});
                }
            }
        }
    });

    timed(ConstraintId::no_branch, [&] {
        std::vector<int32_t> outdeg(n);
        for (int32_t f = 0; f < p; ++f) {
            std::fill(outdeg.begin(), outdeg.end(), 0);
            for (int32_t link : a.links_of(f)) ++outdeg[link / n];
            for (int32_t i = 0; i < n; ++i) {
                if (outdeg[i] > 1) {
                    report.items.push_back({ConstraintId::no_branch, i, -1, f,
                                            "flow " + std::to_string(flows.by_index(f).id) +
                                                " branches at switch " + std::to_string(i)});
                }
            }
        }
    });

    // Binarity (9) is structural with bit storage; nothing to sweep.

    return report;
}

std::vector<int32_t> path_of(const RoutingMatrix& a, const FlowSet& flows, int32_t flow_index) {
    const Flow& flow = flows.by_index(flow_index);
    int32_t n = a.n();
    auto links = a.links_of(flow_index);
    if (links.empty()) {
        throw DecodeError("flow " + std::to_string(flow.id) + " has an empty slice", flow.src);
    }
    std::vector<int32_t> next(n, -1);
    for (int32_t link : links) {
        int32_t i = link / n, j = link % n;
        if (next[i] != -1) {
            throw DecodeError("flow " + std::to_string(flow.id) + " branches at switch " +
                                  std::to_string(i),
                              i);
        }
        next[i] = j;
    }
    std::vector<char> visited(n, 0);
    std::vector<int32_t> path{flow.src};
    visited[flow.src] = 1;
    int32_t cur = flow.src;
    while (cur != flow.dst) {
        int32_t nxt = next[cur];
        if (nxt == -1) {
            throw DecodeError("flow " + std::to_string(flow.id) + " dead-ends at switch " +
                                  std::to_string(cur),
                              cur);
        }
        if (visited[nxt]) {
            throw DecodeError("flow " + std::to_string(flow.id) + " revisits switch " +
                                  std::to_string(nxt),
                              nxt);
        }
        visited[nxt] = 1;
        path.push_back(nxt);
        cur = nxt;
    }
    if (path.size() - 1 != links.size()) {
        // Entries disconnected from the src->dst walk.
        std::vector<int32_t> walked;
        for (size_t k = 0; k + 1 < path.size(); ++k) {
            walked.push_back(path[k] * n + path[k + 1]);
        }
        std::sort(walked.begin(), walked.end());
        for (int32_t link : links) {
            if (!std::binary_search(walked.begin(), walked.end(), link)) {
                throw DecodeError("flow " + std::to_string(flow.id) +
                                      " has entries off its path at switch " +
                                      std::to_string(link / n),
                                  link / n);
            }
        }
    }
    return path;
}

void encode_path(std::span<const int32_t> path, const FlowSet& flows, int32_t flow_index,
                 const Topology& t, RoutingMatrix& into) {
    const Flow& flow = flows.by_index(flow_index);
    if (path.size() < 2) {
        throw ParamError("path needs at least two switches");
    }
    if (path.front() != flow.src || path.back() != flow.dst) {
        throw ParamError("path endpoints do not match flow " + std::to_string(flow.id));
    }
    std::vector<char> seen(t.n, 0);
    for (int32_t v : path) {
        if (v < 0 || v >= t.n) {
            throw ParamError("path switch out of range");
        }
        if (seen[v]) {
            throw ParamError("path repeats switch " + std::to_string(v));
        }
        seen[v] = 1;
    }
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        if (!t.has_link(path[k], path[k + 1])) {
            throw ParamError("no link " + std::to_string(path[k]) + "->" +
                             std::to_string(path[k + 1]));
        }
    }
    into.clear_flow(flow_index);
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        into.set(path[k], path[k + 1], flow_index, true);
    }
}

std::string serialize_routing(const RoutingMatrix& a, const FlowSet& flows) {
    std::ostringstream out;
    for (int32_t f = 0; f < a.p(); ++f) {
        auto path = path_of(a, flows, f);
        out << flows.by_index(f).id << ":";
        for (size_t k = 0; k < path.size(); ++k) {
            out << (k == 0 ? " " : " -> ") << path[k];
        }
        out << "\n";
    }
    return out.str();
}

RoutingMatrix load_routing(std::string_view text, const Topology& t, const FlowSet& flows,
                           std::optional<Storage> storage) {
    RoutingMatrix m = storage.has_value() ? RoutingMatrix::zeros(t.n, flows.p(), *storage)
                                          : RoutingMatrix::zeros_auto(t.n, flows.p());
    std::unordered_map<int64_t, int32_t> index_of;
    for (int32_t idx = 0; idx < flows.p(); ++idx) {
        index_of[flows.by_index(idx).id] = idx;
    }
    std::vector<char> seen(flows.p(), 0);

    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        size_t colon = line.find(':');
        if (colon == std::string::npos) {
            throw ParseError("expected 'id: s -> ... -> d'", line_no);
        }
        int64_t id;
        try {
            id = std::stoll(line.substr(0, colon));
        } catch (const std::exception&) {
            throw ParseError("bad flow id", line_no);
        }
        auto it = index_of.find(id);
        if (it == index_of.end()) {
            throw ParseError("unknown flow id " + std::to_string(id), line_no);
        }
        if (seen[it->second]) {
            throw ParseError("duplicate routing for flow " + std::to_string(id), line_no);
        }
        seen[it->second] = 1;

        std::vector<int32_t> path;
        std::string rest = line.substr(colon + 1);
        size_t pos = 0;
        while ((pos = rest.find("->")) != std::string::npos) {
            rest.replace(pos, 2, " ");
        }
        std::istringstream tok(rest);
        int32_t v;
        while (tok >> v) path.push_back(v);
        try {
            encode_path(path, flows, it->second, t, m);
        } catch (const ParamError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    for (int32_t f = 0; f < flows.p(); ++f) {
        if (!seen[f]) {
            throw ParseError("missing routing for flow " +
                             std::to_string(flows.by_index(f).id));
        }
    }
    return m;
}

} // namespace qnr
