#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qnr/ratio.hpp"

namespace qnr {

enum class Layer : uint8_t { unspecified, core, aggregation, edge };

// Switch-level directed network. Immutable after construction; link (i,j)
// exists iff bandwidth[i*n+j] > 0. Capacities are exact integers in Mb/s.
struct Topology {
    int32_t n = 0;
    std::vector<int64_t> bandwidth;       // n*n, Mb/s, diagonal zero
    std::vector<Ratio> controller_delay;  // n, seconds from controller to switch
    std::vector<int32_t> rack_of;         // n, -1 when the switch heads no rack
    std::vector<Layer> layer_of;          // n

    // Adjacency caches, ascending neighbor ids.
    std::vector<std::vector<int32_t>> out_neighbors;
    std::vector<std::vector<int32_t>> in_neighbors;

    int64_t bw(int32_t i, int32_t j) const { return bandwidth[static_cast<size_t>(i) * n + j]; }
    bool has_link(int32_t i, int32_t j) const { return bw(i, j) > 0; }
    int32_t link_id(int32_t i, int32_t j) const { return i * n + j; }

    // Flow endpoint candidates: edge-layer switches when layers are tagged,
    // every switch otherwise.
    std::vector<int32_t> edge_switches() const;
    int32_t rack_count() const;

    // Minimum hop count i -> j over existing links, -1 if unreachable.
    int32_t hop_distance(int32_t from, int32_t to) const;
};

struct LinkSpec {
    int32_t i;
    int32_t j;
    int64_t capacity_mbps;
};

struct FatTreeParams {
    int32_t k = 4;                     // fat-tree order, even, >= 2
    int64_t link_capacity_mbps = 100;  // uniform on every inter-switch link
    Ratio controller_delay_s = Ratio(1, 1000);
};

// Standard 3-layer fat-tree: (K/2)^2 cores, K pods of K/2 aggregation and K/2
// edge switches, every inter-switch link present in both directions. Hosts are
// not modeled; edge switches act as flow endpoints and each heads its own rack.
Topology generate_fat_tree(const FatTreeParams& params);

// Assembles and validates a topology from explicit links (test fixtures, the
// loader). Delays default to a uniform value; racks default to one per switch.
Topology make_topology(int32_t n, std::span<const LinkSpec> links,
                       std::vector<Ratio> delays = {}, std::vector<int32_t> racks = {},
                       std::vector<Layer> layers = {});

// Line-oriented text format:
//   line 1:            n
//   optional:          delays d_1 ... d_n      (seconds, decimal)
//   optional:          racks r_1 ... r_n
//   remaining lines:   i j capacity_mbps       (0-based, directed)
// '#' starts a comment. Duplicate links, self-links and disconnected graphs
// are rejected with the offending line number where applicable.
Topology load_topology(std::string_view text);

std::string serialize(const Topology& t);

// Number of (i,j) pairs with bandwidth > 0. K^3 on an order-K fat-tree.
int64_t directed_link_count(const Topology& t);

} // namespace qnr
