#include "qnr/workload.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "qnr/errors.hpp"
#include "qnr/rng.hpp"

namespace qnr {
namespace {

int64_t draw_demand(const SizeDistribution& dist, rng::Engine& eng, int32_t& class_out) {
    if (dist.kind == SizeDistribution::Kind::uniform) {
        class_out = 0;
        return rng::uniform_int(eng, dist.lo, dist.hi);
    }
    if (rng::bernoulli(eng, dist.big_fraction)) {
        class_out = 1;
        return rng::uniform_int(eng, dist.big_lo, dist.big_hi);
    }
    class_out = 0;
    return rng::uniform_int(eng, dist.small_lo, dist.small_hi);
}

// Draws one src/dst pair over edge switches honoring the leave-rack
// probability. Rack groups are prebuilt, sorted by switch id.
struct EndpointDrawer {
    const Topology& t;
    std::vector<int32_t> edges;

    explicit EndpointDrawer(const Topology& topo) : t(topo), edges(topo.edge_switches()) {}

    std::pair<int32_t, int32_t> draw(rng::Engine& eng, double pl) const {
        int32_t src = edges[rng::bounded(eng, edges.size())];
        bool inter_rack = rng::bernoulli(eng, pl);
        std::vector<int32_t> candidates;
        if (!inter_rack) {
            for (int32_t e : edges) {
                if (e != src && t.rack_of[e] == t.rack_of[src]) candidates.push_back(e);
            }
        }
        if (candidates.empty()) {
            // Leaving the rack, or a single-edge rack forcing the inter-rack redraw.
            for (int32_t e : edges) {
                if (t.rack_of[e] != t.rack_of[src]) candidates.push_back(e);
            }
        }
        if (candidates.empty()) {
            // Degenerate single-rack topology: any other edge switch.
            for (int32_t e : edges) {
                if (e != src) candidates.push_back(e);
            }
        }
        if (candidates.empty()) {
            throw ParamError("topology has no usable destination edge switch");
        }
        int32_t dst = candidates[rng::bounded(eng, candidates.size())];
        return {src, dst};
    }
};

} // namespace

int64_t FlowSet::total_demand() const {
    int64_t sum = 0;
    for (const Flow& f : flows) sum += f.demand_mbps;
    return sum;
}

SizeDistribution SizeDistribution::parse(std::string_view text) {
    SizeDistribution d;
    std::string s(text);
    auto split_args = [](const std::string& spec) {
        std::vector<std::string> out;
        std::istringstream in(spec);
        std::string item;
        while (std::getline(in, item, ',')) out.push_back(item);
        return out;
    };
    if (s == "mixture") return d;
    if (s.rfind("mixture:", 0) == 0) {
        auto args = split_args(s.substr(8));
        if (args.size() != 5) throw ParseError("mixture needs 5 parameters: " + s);
        d.small_lo = std::stoll(args[0]);
        d.small_hi = std::stoll(args[1]);
        d.big_lo = std::stoll(args[2]);
        d.big_hi = std::stoll(args[3]);
        d.big_fraction = std::stod(args[4]);
        return d;
    }
    if (s.rfind("uniform:", 0) == 0) {
        auto args = split_args(s.substr(8));
        if (args.size() != 2) throw ParseError("uniform needs 2 parameters: " + s);
        d.kind = Kind::uniform;
        d.lo = std::stoll(args[0]);
        d.hi = std::stoll(args[1]);
        return d;
    }
    throw ParseError("unknown size distribution '" + s + "'");
}

std::string SizeDistribution::str() const {
    std::ostringstream out;
    if (kind == Kind::uniform) {
        out << "uniform:" << lo << "," << hi;
    } else {
        out << "mixture:" << small_lo << "," << small_hi << "," << big_lo << "," << big_hi << ","
            << big_fraction;
    }
    return out.str();
}

FlowSet generate_workload(const Topology& t, const WorkloadParams& params) {
    if (params.p < 1) {
        throw ParamError("flow count must be at least 1");
    }
    if (params.pl < 0.0 || params.pl > 1.0) {
        throw ParamError("leave-rack probability must be in [0,1]");
    }
    EndpointDrawer drawer(t);
    if (drawer.edges.size() < 2) {
        throw ParamError("workload generation needs at least 2 edge switches");
    }
    if (params.pl > 0.0 && t.rack_count() < 2) {
        throw ParamError("leave-rack probability > 0 needs at least 2 racks");
    }

    rng::Engine eng(params.seed);
    FlowSet fs;
    fs.flows.reserve(params.p);
    for (int32_t i = 0; i < params.p; ++i) {
        auto [src, dst] = drawer.draw(eng, params.pl);
        int32_t class_id = 0;
        int64_t demand = draw_demand(params.dist, eng, class_id);
        fs.flows.push_back(Flow{i, src, dst, demand, class_id});
    }
    return fs;
}

FlowSet load_flows(std::string_view text, const Topology& t) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    int32_t expected = -1;
    FlowSet fs;
    std::unordered_set<int64_t> ids;

    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream tok(line);
        std::string first;
        if (!(tok >> first)) continue;

        if (expected < 0) {
            try {
                expected = std::stoi(first);
            } catch (const std::exception&) {
                throw ParseError("expected flow count, got '" + first + "'", line_no);
            }
            if (expected < 0) throw ParseError("flow count must be non-negative", line_no);
            continue;
        }

        Flow f{};
        std::string s_src, s_dst, s_dem, s_cls, extra;
        if (!(tok >> s_src >> s_dst >> s_dem >> s_cls) || (tok >> extra)) {
            throw ParseError("expected 'id src dst demand_mbps class_id'", line_no);
        }
        try {
            f.id = std::stoll(first);
            f.src = std::stoi(s_src);
            f.dst = std::stoi(s_dst);
            f.demand_mbps = std::stoll(s_dem);
            f.class_id = std::stoi(s_cls);
        } catch (const std::exception&) {
            throw ParseError("expected 'id src dst demand_mbps class_id'", line_no);
        }
        if (f.src < 0 || f.src >= t.n || f.dst < 0 || f.dst >= t.n) {
            throw ParseError("unknown switch index", line_no);
        }
        if (f.src == f.dst) {
            throw ParseError("flow source equals destination", line_no);
        }
        if (f.demand_mbps <= 0) {
            throw ParseError("flow demand must be positive", line_no);
        }
        if (!ids.insert(f.id).second) {
            throw ParseError("duplicate flow id " + std::to_string(f.id), line_no);
        }
        fs.flows.push_back(f);
    }
    if (expected < 0) {
        throw ParseError("empty flow file");
    }
    if (expected != fs.p()) {
        throw ParseError("declared " + std::to_string(expected) + " flows, found " +
                         std::to_string(fs.p()));
    }
    return fs;
}

std::string serialize(const FlowSet& fs) {
    std::ostringstream out;
    out << fs.p() << "\n";
    for (const Flow& f : fs.flows) {
        out << f.id << " " << f.src << " " << f.dst << " " << f.demand_mbps << " " << f.class_id
            << "\n";
    }
    return out.str();
}

FlowSet inject_big_flows(const FlowSet& fs, const Topology& t, int32_t count,
                         int64_t big_demand_mbps, double pl, uint64_t seed) {
    if (count < 0) {
        throw ParamError("big-flow count must be non-negative");
    }
    if (count > 0 && big_demand_mbps <= 0) {
        throw ParamError("big-flow demand must be positive");
    }
    FlowSet out = fs;
    if (count == 0) return out;

    int64_t next_id = 0;
    for (const Flow& f : fs.flows) next_id = std::max(next_id, f.id + 1);

    EndpointDrawer drawer(t);
    rng::Engine eng(seed);
    for (int32_t i = 0; i < count; ++i) {
        auto [src, dst] = drawer.draw(eng, pl);
        out.flows.push_back(Flow{next_id++, src, dst, big_demand_mbps, 2});
    }
    return out;
}

FlowSet scale_demands(const FlowSet& fs, Ratio scale) {
    if (scale <= Ratio(0)) {
        throw ParamError("demand scale must be positive");
    }
    FlowSet out = fs;
    for (Flow& f : out.flows) {
        __int128 num = static_cast<__int128>(f.demand_mbps) * scale.num();
        int64_t scaled = static_cast<int64_t>((num + scale.den() / 2) / scale.den());
        f.demand_mbps = std::max<int64_t>(1, scaled);
    }
    return out;
}

} // namespace qnr
