#include "qnr/topology.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "qnr/errors.hpp"

namespace qnr {
namespace {

void build_adjacency(Topology& t) {
    t.out_neighbors.assign(t.n, {});
    t.in_neighbors.assign(t.n, {});
    for (int32_t i = 0; i < t.n; ++i) {
        for (int32_t j = 0; j < t.n; ++j) {
            if (t.bw(i, j) > 0) {
                t.out_neighbors[i].push_back(j);
                t.in_neighbors[j].push_back(i);
            }
        }
    }
}

// Reachability sweep from node 0 along out- or in-links.
int count_reachable(const Topology& t, bool forward) {
    std::vector<char> seen(t.n, 0);
    std::deque<int32_t> queue{0};
    seen[0] = 1;
    int count = 1;
    while (!queue.empty()) {
        int32_t u = queue.front();
        queue.pop_front();
        const auto& next = forward ? t.out_neighbors[u] : t.in_neighbors[u];
        for (int32_t v : next) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                queue.push_back(v);
            }
        }
    }
    return count;
}

void check_invariants(Topology& t) {
    if (t.n <= 0) {
        throw ValidationError("topology must have at least one switch");
    }
    for (int32_t i = 0; i < t.n; ++i) {
        if (t.bw(i, i) != 0) {
            throw ValidationError("self-link at switch " + std::to_string(i));
        }
        for (int32_t j = 0; j < t.n; ++j) {
            if (t.bw(i, j) < 0) {
                throw ValidationError("negative capacity on link " + std::to_string(i) + "->" +
                                      std::to_string(j));
            }
        }
        if (t.controller_delay[i] < Ratio(0)) {
            throw ValidationError("negative controller delay at switch " + std::to_string(i));
        }
    }
    build_adjacency(t);
    if (t.n > 1) {
        if (count_reachable(t, true) != t.n || count_reachable(t, false) != t.n) {
            throw ValidationError("topology is not connected");
        }
    }
}

} // namespace

std::vector<int32_t> Topology::edge_switches() const {
    bool any_tagged = std::any_of(layer_of.begin(), layer_of.end(),
                                  [](Layer l) { return l != Layer::unspecified; });
    std::vector<int32_t> out;
    for (int32_t i = 0; i < n; ++i) {
        if (!any_tagged || layer_of[i] == Layer::edge) {
            out.push_back(i);
        }
    }
    return out;
}

int32_t Topology::rack_count() const {
    std::vector<int32_t> ids;
    for (int32_t s : edge_switches()) {
        if (rack_of[s] >= 0) ids.push_back(rack_of[s]);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return static_cast<int32_t>(ids.size());
}

int32_t Topology::hop_distance(int32_t from, int32_t to) const {
    if (from == to) return 0;
    std::vector<int32_t> dist(n, -1);
    std::deque<int32_t> queue{from};
    dist[from] = 0;
    while (!queue.empty()) {
        int32_t u = queue.front();
        queue.pop_front();
        for (int32_t v : out_neighbors[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                if (v == to) return dist[v];
                queue.push_back(v);
            }
        }
    }
    return dist[to];
}

Topology generate_fat_tree(const FatTreeParams& params) {
    int32_t k = params.k;
    if (k < 2 || k % 2 != 0) {
        throw ParamError("fat-tree order must be a positive even integer, got " +
                         std::to_string(k));
    }
    if (params.link_capacity_mbps <= 0) {
        throw ParamError("fat-tree link capacity must be positive");
    }

    int32_t half = k / 2;
    int32_t cores = half * half;
    int32_t n = cores + k * k;  // 5k^2/4

    Topology t;
    t.n = n;
    t.bandwidth.assign(static_cast<size_t>(n) * n, 0);
    t.controller_delay.assign(n, params.controller_delay_s);
    t.rack_of.assign(n, -1);
    t.layer_of.assign(n, Layer::unspecified);

    auto connect = [&](int32_t a, int32_t b) {
        t.bandwidth[static_cast<size_t>(a) * n + b] = params.link_capacity_mbps;
        t.bandwidth[static_cast<size_t>(b) * n + a] = params.link_capacity_mbps;
    };

    for (int32_t c = 0; c < cores; ++c) {
        t.layer_of[c] = Layer::core;
    }
    int32_t rack = 0;
    for (int32_t pod = 0; pod < k; ++pod) {
        int32_t agg_base = cores + pod * k;
        int32_t edge_base = agg_base + half;
        for (int32_t a = 0; a < half; ++a) {
            int32_t agg = agg_base + a;
            t.layer_of[agg] = Layer::aggregation;
            // Aggregation switch a serves core group a.
            for (int32_t c = 0; c < half; ++c) {
                connect(agg, a * half + c);
            }
        }
        for (int32_t e = 0; e < half; ++e) {
            int32_t edge = edge_base + e;
            t.layer_of[edge] = Layer::edge;
            t.rack_of[edge] = rack++;
            for (int32_t a = 0; a < half; ++a) {
                connect(edge, agg_base + a);
            }
        }
    }

    check_invariants(t);
    return t;
}

Topology make_topology(int32_t n, std::span<const LinkSpec> links, std::vector<Ratio> delays,
                       std::vector<int32_t> racks, std::vector<Layer> layers) {
    Topology t;
    t.n = n;
    t.bandwidth.assign(static_cast<size_t>(n) * n, 0);
    for (const LinkSpec& l : links) {
        if (l.i < 0 || l.i >= n || l.j < 0 || l.j >= n) {
            throw ValidationError("link endpoint out of range: " + std::to_string(l.i) + "->" +
                                  std::to_string(l.j));
        }
        if (l.i == l.j) {
            throw ValidationError("self-link at switch " + std::to_string(l.i));
        }
        if (l.capacity_mbps <= 0) {
            throw ValidationError("non-positive capacity on link " + std::to_string(l.i) + "->" +
                                  std::to_string(l.j));
        }
        int64_t& slot = t.bandwidth[static_cast<size_t>(l.i) * n + l.j];
        if (slot != 0) {
            throw ValidationError("duplicate link " + std::to_string(l.i) + "->" +
                                  std::to_string(l.j));
        }
        slot = l.capacity_mbps;
    }
    t.controller_delay = delays.empty() ? std::vector<Ratio>(n, Ratio(0)) : std::move(delays);
    if (racks.empty()) {
        t.rack_of.resize(n);
        for (int32_t i = 0; i < n; ++i) t.rack_of[i] = i;
    } else {
        t.rack_of = std::move(racks);
    }
    t.layer_of = layers.empty() ? std::vector<Layer>(n, Layer::unspecified) : std::move(layers);
    if (static_cast<int32_t>(t.controller_delay.size()) != n ||
        static_cast<int32_t>(t.rack_of.size()) != n ||
        static_cast<int32_t>(t.layer_of.size()) != n) {
        throw ValidationError("per-switch vector length does not match switch count");
    }
    check_invariants(t);
    return t;
}

Topology load_topology(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;

    int32_t n = -1;
    std::vector<LinkSpec> links;
    std::vector<Ratio> delays;
    std::vector<int32_t> racks;
    std::vector<std::vector<char>> seen;

    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream tok(line);
        std::string first;
        if (!(tok >> first)) continue;  // blank or comment-only

        if (n < 0) {
            try {
                n = std::stoi(first);
            } catch (const std::exception&) {
                throw ParseError("expected switch count, got '" + first + "'", line_no);
            }
            if (n <= 0) throw ParseError("switch count must be positive", line_no);
            std::string extra;
            if (tok >> extra) throw ParseError("unexpected token '" + extra + "'", line_no);
            seen.assign(n, std::vector<char>(n, 0));
            continue;
        }

        if (first == "delays" || first == "racks") {
            std::vector<std::string> vals;
            std::string v;
            while (tok >> v) vals.push_back(v);
            if (static_cast<int32_t>(vals.size()) != n) {
                throw ParseError(first + " line needs " + std::to_string(n) + " values, got " +
                                     std::to_string(vals.size()),
                                 line_no);
            }
            try {
                if (first == "delays") {
                    delays.clear();
                    for (const auto& s : vals) delays.push_back(Ratio::parse(s));
                } else {
                    racks.clear();
                    for (const auto& s : vals) racks.push_back(std::stoi(s));
                }
            } catch (const std::exception& e) {
                throw ParseError(std::string("bad ") + first + ": " + e.what(), line_no);
            }
            continue;
        }

        LinkSpec l{};
        std::string js, caps, extra;
        if (!(tok >> js >> caps) || (tok >> extra)) {
            throw ParseError("expected 'i j capacity_mbps'", line_no);
        }
        try {
            l.i = std::stoi(first);
            l.j = std::stoi(js);
            l.capacity_mbps = std::stoll(caps);
        } catch (const std::exception&) {
            throw ParseError("expected 'i j capacity_mbps'", line_no);
        }
        if (l.i < 0 || l.i >= n || l.j < 0 || l.j >= n) {
            throw ParseError("switch index out of range", line_no);
        }
        if (l.i == l.j) {
            throw ParseError("self-link at switch " + std::to_string(l.i), line_no);
        }
        if (l.capacity_mbps <= 0) {
            throw ParseError("capacity must be positive", line_no);
        }
        if (seen[l.i][l.j]) {
            throw ParseError("duplicate link " + std::to_string(l.i) + "->" + std::to_string(l.j),
                             line_no);
        }
        seen[l.i][l.j] = 1;
        links.push_back(l);
    }
    if (n < 0) {
        throw ParseError("empty topology file");
    }
    return make_topology(n, links, std::move(delays), std::move(racks));
}

std::string serialize(const Topology& t) {
    std::ostringstream out;
    out << t.n << "\n";
    out << "delays";
    for (int32_t i = 0; i < t.n; ++i) out << " " << t.controller_delay[i].str();
    out << "\n";
    out << "racks";
    for (int32_t i = 0; i < t.n; ++i) out << " " << t.rack_of[i];
    out << "\n";
    for (int32_t i = 0; i < t.n; ++i) {
        for (int32_t j = 0; j < t.n; ++j) {
            if (t.bw(i, j) > 0) {
                out << i << " " << j << " " << t.bw(i, j) << "\n";
            }
        }
    }
    return out.str();
}

int64_t directed_link_count(const Topology& t) {
    int64_t count = 0;
    for (int64_t v : t.bandwidth) {
        if (v > 0) ++count;
    }
    return count;
}

} // namespace qnr
