#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qnr/ratio.hpp"
#include "qnr/topology.hpp"

namespace qnr {

struct Flow {
    int64_t id = 0;
    int32_t src = 0;
    int32_t dst = 0;
    int64_t demand_mbps = 0;  // guaranteed bandwidth, positive
    int32_t class_id = 0;     // reporting metadata only
};

struct FlowSet {
    std::vector<Flow> flows;

    int32_t p() const { return static_cast<int32_t>(flows.size()); }
    int64_t total_demand() const;
    const Flow& by_index(int32_t idx) const { return flows[idx]; }
};

// Demand generator. The default mixture models many small flows plus a few
// large ones; every draw is an integer Mb/s value.
struct SizeDistribution {
    enum class Kind { mixture, uniform };
    Kind kind = Kind::mixture;
    // mixture
    int64_t small_lo = 1, small_hi = 10;
    int64_t big_lo = 50, big_hi = 200;
    double big_fraction = 0.10;
    // uniform
    int64_t lo = 1, hi = 10;

    // "mixture", "mixture:smallLo,smallHi,bigLo,bigHi,bigPct", "uniform:lo,hi"
    static SizeDistribution parse(std::string_view text);
    std::string str() const;
};

struct WorkloadParams {
    int32_t p = 100;       // flow count
    double pl = 0.25;      // probability the destination leaves the source rack
    SizeDistribution dist;
    uint64_t seed = 1;
};

// Draws p flows between edge switches. With probability pl the destination is
// picked from a different rack; otherwise from the same rack, falling back to
// inter-rack when the rack has a single edge switch. Bit-deterministic for a
// fixed seed.
FlowSet generate_workload(const Topology& t, const WorkloadParams& params);

// Text format: line 1 = p, then p lines "id src dst demand_mbps class_id".
// '#' starts a comment.
FlowSet load_flows(std::string_view text, const Topology& t);
std::string serialize(const FlowSet& fs);

// Appends `count` flows of the given demand with endpoints drawn like
// generate_workload and fresh ids. Existing flows are untouched.
FlowSet inject_big_flows(const FlowSet& fs, const Topology& t, int32_t count,
                         int64_t big_demand_mbps, double pl, uint64_t seed);

// Multiplies every demand by an exact rational, rounding half up, min 1 Mb/s.
FlowSet scale_demands(const FlowSet& fs, Ratio scale);

} // namespace qnr
