#include "pgather/family.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "pgather/hash.hpp"

namespace pgather {

namespace {

PortGraph generate(const std::string& kind, std::size_t size) {
    if (kind == "ring") return make_ring(size);
    if (kind == "line") return make_line(size);
    if (kind == "star") return make_star(size);
    if (kind == "clique") return make_clique(size);
    throw GraphError(GraphErrc::parse_error, "unknown graph kind '" + kind + "'");
}

std::size_t parse_size(const std::string& s, const std::string& item) {
    try {
        std::size_t used = 0;
        const auto v = std::stoul(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::logic_error&) {
        throw GraphError(GraphErrc::parse_error, "bad size in family item '" + item + "'");
    }
}

}  // namespace

GraphFamily::GraphFamily(std::string description, std::vector<PortGraph> graphs)
    : description_(std::move(description)), graphs_(std::move(graphs)) {}

const char* GraphFamily::bundled_spec() { return "ring:4-6,line:4-6,star:3-5,clique:4"; }

GraphFamily GraphFamily::bundled() { return parse(bundled_spec()); }

GraphFamily GraphFamily::parse(const std::string& spec) {
    if (spec == "bundled") {
        return bundled();
    }
    std::vector<PortGraph> graphs;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw GraphError(GraphErrc::parse_error, "family item '" + item + "' lacks kind:size");
        }
        const std::string kind = item.substr(0, colon);
        const std::string range = item.substr(colon + 1);
        const auto dash = range.find('-');
        const std::size_t lo = parse_size(range.substr(0, dash), item);
        const std::size_t hi = dash == std::string::npos ? lo : parse_size(range.substr(dash + 1), item);
        if (hi < lo) {
            throw GraphError(GraphErrc::parse_error, "empty range in family item '" + item + "'");
        }
        for (std::size_t s = lo; s <= hi; ++s) {
            graphs.push_back(generate(kind, s));
        }
    }
    if (graphs.empty()) {
        throw GraphError(GraphErrc::parse_error, "family spec names no graphs");
    }
    return GraphFamily(spec, std::move(graphs));
}

std::size_t GraphFamily::max_nodes() const {
    std::size_t m = 0;
    for (const auto& g : graphs_) {
        m = std::max(m, g.node_count());
    }
    return m;
}

std::string GraphFamily::hash() const {
    Fnv1a h;
    for (const auto& g : graphs_) {
        h.bytes(to_text(g)).bytes("|");
    }
    return h.hex();
}

bool GraphFamily::contains(const PortGraph& g) const {
    return std::any_of(graphs_.begin(), graphs_.end(), [&](const PortGraph& m) { return port_isomorphic(m, g); });
}

bool port_isomorphic(const PortGraph& a, const PortGraph& b) {
    const std::size_t n = a.node_count();
    if (n != b.node_count() || a.edge_count() != b.edge_count()) {
        return false;
    }
    constexpr auto unset = static_cast<NodeIndex>(-1);
    for (NodeIndex target = 0; target < n; ++target) {
        std::vector<NodeIndex> map(n, unset);
        std::vector<char> used(n, 0);
        std::queue<NodeIndex> frontier;
        map[0] = target;
        used[target] = 1;
        frontier.push(0);
        bool ok = true;
        while (ok && !frontier.empty()) {
            const NodeIndex v = frontier.front();
            frontier.pop();
            const NodeIndex w = map[v];
            if (a.degree(v) != b.degree(w)) {
                ok = false;
                break;
            }
            for (Port p = 1; p <= a.degree(v); ++p) {
                const auto ha = a.follow(v, p);
                const auto hb = b.follow(w, p);
                if (ha.reverse != hb.reverse) {
                    ok = false;
                    break;
                }
                if (map[ha.to] == unset) {
                    if (used[hb.to]) {
                        ok = false;
                        break;
                    }
                    map[ha.to] = hb.to;
                    used[hb.to] = 1;
                    frontier.push(ha.to);
                } else if (map[ha.to] != hb.to) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            return true;
        }
    }
    return false;
}

}  // namespace pgather
