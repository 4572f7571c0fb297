#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qnr/topology.hpp"
#include "qnr/workload.hpp"

namespace qnr {

enum class Storage { dense, sparse };

// Binary routing tensor: entry (i,j,f) = 1 iff flow f crosses directed link
// i->j. Dense storage packs per-link flow bitmasks into 64-bit words so the
// objective and capacity sweeps run on the word kernels; sparse storage keeps
// a sorted link-id list per flow. Both answer the same queries bit-for-bit.
class RoutingMatrix {
public:
    RoutingMatrix() = default;
    static RoutingMatrix zeros(int32_t n, int32_t p, Storage storage);
    // Picks dense below a size threshold, sparse above it.
    static RoutingMatrix zeros_auto(int32_t n, int32_t p);

    int32_t n() const { return n_; }
    int32_t p() const { return p_; }
    Storage storage() const { return storage_; }

    bool at(int32_t i, int32_t j, int32_t f) const;
    void set(int32_t i, int32_t j, int32_t f, bool value);
    void clear_flow(int32_t f);

    // Sorted link ids (i*n+j) used by flow f.
    std::vector<int32_t> links_of(int32_t f) const;
    int64_t entry_count() const;  // number of set entries

    RoutingMatrix converted(Storage target) const;

    // Dense internals for the kernels. Valid only for dense storage.
    size_t words_per_link() const { return words_per_link_; }
    std::span<const uint64_t> dense_words() const { return words_; }
    std::span<const uint64_t> link_mask(int32_t i, int32_t j) const;

    // Logical equality, independent of storage.
    friend bool operator==(const RoutingMatrix& a, const RoutingMatrix& b);

private:
    int32_t n_ = 0;
    int32_t p_ = 0;
    Storage storage_ = Storage::dense;
    size_t words_per_link_ = 0;
    std::vector<uint64_t> words_;               // dense: (n*n) * words_per_link
    std::vector<std::vector<int32_t>> flow_links_;  // sparse: per flow, sorted
};

// Total entrywise difference |A - A0|: the reconfiguration overhead (SFTC).
int64_t sftc(const RoutingMatrix& a, const RoutingMatrix& a0);

// Same quantity through the product form sum(A + A0 - 2*A*A0), evaluated as
// |A| + |A0| - 2*|A and A0|. Kept as an independent route for equivalence
// checks against sftc.
int64_t sftc_linear(const RoutingMatrix& a, const RoutingMatrix& a0);

enum class ConstraintId : int32_t {
    ghost_link = 0,      // entry on a link with zero bandwidth
    capacity = 2,        // sum_f A_ijf * C_f <= mu * B_ij
    source_no_return = 3,  // no link entering the source
    dest_no_exit = 4,      // no link leaving the destination
    source_out_one = 5,    // exactly one link out of the source
    dest_in_one = 6,       // exactly one link into the destination
    conservation = 7,      // in-degree equals out-degree at transit switches
    no_branch = 8,         // at most one outgoing link per (switch, flow)
    binary = 9,            // entries in {0,1}; structural with bit storage
};

struct Violation {
    ConstraintId id;
    int32_t i = -1;
    int32_t j = -1;
    int32_t f = -1;
    std::string detail;
};

struct ViolationReport {
    std::vector<Violation> items;
    bool empty() const { return items.empty(); }
    std::string str() const;
};

// Reconfiguration instance: topology + flows + current routing A0 + cap mu.
// A0 must be structurally valid (constraints 3-8, links exist); it may violate
// capacity, which is what triggers reconfiguration.
struct ReconfigProblem {
    Topology topology;
    FlowSet flows;
    RoutingMatrix current;
    Ratio mu{1};

    // floor(mu * B_ij): the largest integer load the link admits.
    int64_t link_cap(int32_t i, int32_t j) const { return mu.mul_floor(topology.bw(i, j)); }
};

ReconfigProblem make_problem(Topology topology, FlowSet flows, RoutingMatrix current, Ratio mu);

struct ValidateOptions {
    uint32_t skip_mask = 0;  // bit k set => skip constraint id k
    std::array<double, 10>* timings_ms = nullptr;  // per-constraint sweep time
};

// Reports every violated constraint instance of routing A against prob.
ViolationReport validate(const RoutingMatrix& a, const ReconfigProblem& prob,
                         const ValidateOptions& opts = {});

// Per-link loads sum_f A_ijf * C_f, as an n*n vector.
std::vector<int64_t> link_loads(const RoutingMatrix& a, const FlowSet& flows);

// Decodes the slice of the flow at `flow_index` into its switch sequence
// src -> ... -> dst. Requires a structurally valid slice; throws DecodeError
// naming the offending switch otherwise. The tensor's flow axis follows
// FlowSet order.
std::vector<int32_t> path_of(const RoutingMatrix& a, const FlowSet& flows, int32_t flow_index);

// Writes a simple path as the flow's slice (replacing any previous entries).
// Consecutive switches must be linked in the topology and the endpoints must
// match the flow.
void encode_path(std::span<const int32_t> path, const FlowSet& flows, int32_t flow_index,
                 const Topology& t, RoutingMatrix& into);

// Text format: one line per flow, "f: s -> v1 -> ... -> d".
std::string serialize_routing(const RoutingMatrix& a, const FlowSet& flows);
RoutingMatrix load_routing(std::string_view text, const Topology& t, const FlowSet& flows,
                           std::optional<Storage> storage = {});

} // namespace qnr
