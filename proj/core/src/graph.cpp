#include "pgather/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <utility>

namespace pgather {

ValidationReport validate(const PortGraph::Adjacency& adj) {
    auto fail = [](std::string msg) { return ValidationReport{false, std::move(msg)}; };
    const std::size_t n = adj.size();
    if (n == 0) {
        return fail("graph has no nodes");
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::set<NodeIndex> seen;
        for (std::size_t i = 0; i < adj[v].size(); ++i) {
            const auto& h = adj[v][i];
            const Port p = static_cast<Port>(i + 1);
            if (h.to >= n) {
                return fail("node " + std::to_string(v) + " port " + std::to_string(p) + " leads outside the graph");
            }
            if (h.to == v) {
                return fail("self-loop at node " + std::to_string(v));
            }
            if (!seen.insert(h.to).second) {
                return fail("multi-edge between " + std::to_string(v) + " and " + std::to_string(h.to));
            }
            const auto& back = adj[h.to];
            if (h.reverse < 1 || h.reverse > back.size()) {
                return fail("node " + std::to_string(v) + " port " + std::to_string(p) + " has out-of-range reverse port");
            }
            const auto& r = back[h.reverse - 1];
            if (r.to != v || r.reverse != p) {
                return fail("asymmetric edge at node " + std::to_string(v) + " port " + std::to_string(p));
            }
        }
    }
    std::vector<char> reached(n, 0);
    std::queue<NodeIndex> frontier;
    frontier.push(0);
    reached[0] = 1;
    std::size_t count = 1;
    while (!frontier.empty()) {
        const NodeIndex v = frontier.front();
        frontier.pop();
        for (const auto& h : adj[v]) {
            if (!reached[h.to]) {
                reached[h.to] = 1;
                ++count;
                frontier.push(h.to);
            }
        }
    }
    if (count != n) {
        return fail("graph is disconnected");
    }
    return {};
}

PortGraph::PortGraph(Adjacency adjacency) : adj_(std::move(adjacency)) {
    if (auto report = validate(adj_); !report.ok) {
        throw GraphError(GraphErrc::invalid_structure, report.problem);
    }
}

std::size_t PortGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& ports : adj_) {
        twice += ports.size();
    }
    return twice / 2;
}

std::uint32_t PortGraph::degree(NodeIndex v) const {
    if (v >= adj_.size()) {
        throw GraphError(GraphErrc::invalid_node, "node " + std::to_string(v) + " out of range");
    }
    return static_cast<std::uint32_t>(adj_[v].size());
}

PortGraph::HalfEdge PortGraph::follow(NodeIndex v, Port p) const {
    const auto d = degree(v);
    if (p < 1 || p > d) {
        throw GraphError(GraphErrc::invalid_port,
                         "port " + std::to_string(p) + " invalid at node " + std::to_string(v));
    }
    return adj_[v][p - 1];
}

GraphBuilder::GraphBuilder(std::size_t nodes) : adj_(nodes) {}

GraphBuilder& GraphBuilder::add_edge(NodeIndex u, NodeIndex v) {
    if (u >= adj_.size() || v >= adj_.size()) {
        throw GraphError(GraphErrc::invalid_node, "edge endpoint out of range");
    }
    const auto pu = static_cast<Port>(adj_[u].size() + 1);
    const auto pv = static_cast<Port>(adj_[v].size() + 1);
    adj_[u].push_back({v, pv});
    adj_[v].push_back({u, pu});
    return *this;
}

PortGraph GraphBuilder::build() const { return PortGraph(adj_); }

PortGraph make_ring(std::size_t n, bool clockwise) {
    if (n < 3) {
        throw GraphError(GraphErrc::invalid_size, "ring needs at least 3 nodes");
    }
    if (!clockwise) {
        GraphBuilder b(n);
        for (std::size_t i = 0; i < n; ++i) {
            b.add_edge(static_cast<NodeIndex>(i), static_cast<NodeIndex>((i + 1) % n));
        }
        return b.build();
    }
    PortGraph::Adjacency adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto next = static_cast<NodeIndex>((i + 1) % n);
        const auto prev = static_cast<NodeIndex>((i + n - 1) % n);
        adj[i] = {{next, 2}, {prev, 1}};
    }
    return PortGraph(std::move(adj));
}

PortGraph make_line(std::size_t n) {
    if (n < 1) {
        throw GraphError(GraphErrc::invalid_size, "line needs at least 1 node");
    }
    GraphBuilder b(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        b.add_edge(static_cast<NodeIndex>(i), static_cast<NodeIndex>(i + 1));
    }
    return b.build();
}

PortGraph make_star(std::size_t leaves) {
    if (leaves < 1) {
        throw GraphError(GraphErrc::invalid_size, "star needs at least 1 leaf");
    }
    GraphBuilder b(leaves + 1);
    for (std::size_t i = 1; i <= leaves; ++i) {
        b.add_edge(0, static_cast<NodeIndex>(i));
    }
    return b.build();
}

PortGraph make_clique(std::size_t n) {
    if (n < 1) {
        throw GraphError(GraphErrc::invalid_size, "clique needs at least 1 node");
    }
    GraphBuilder b(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            b.add_edge(static_cast<NodeIndex>(i), static_cast<NodeIndex>(j));
        }
    }
    return b.build();
}

PortGraph make_tree(const std::vector<std::int64_t>& parent) {
    const std::size_t n = parent.size();
    if (n < 1) {
        throw GraphError(GraphErrc::invalid_size, "tree needs at least 1 node");
    }
    std::size_t roots = 0;
    for (std::size_t v = 0; v < n; ++v) {
        const auto p = parent[v];
        if (p == -1) {
            ++roots;
        } else if (p < 0 || static_cast<std::size_t>(p) >= n || static_cast<std::size_t>(p) == v) {
            throw GraphError(GraphErrc::invalid_structure, "parent of node " + std::to_string(v) + " is invalid");
        }
    }
    if (roots != 1) {
        throw GraphError(GraphErrc::invalid_structure, "parent list must have exactly one root");
    }
    GraphBuilder b(n);
    for (std::size_t v = 0; v < n; ++v) {
        if (parent[v] >= 0) {
            b.add_edge(static_cast<NodeIndex>(parent[v]), static_cast<NodeIndex>(v));
        }
    }
    try {
        return b.build();
    } catch (const GraphError&) {
        // n-1 edges that fail to connect all nodes means the parent pointers form a cycle.
        throw GraphError(GraphErrc::invalid_structure, "parent list contains a cycle");
    }
}

PortGraph glue(const PortGraph& g1, NodeIndex v1, const PortGraph& g2, NodeIndex v2) {
    if (v1 >= g1.node_count() || v2 >= g2.node_count()) {
        throw GraphError(GraphErrc::invalid_node, "glue endpoint out of range");
    }
    const auto offset = static_cast<NodeIndex>(g1.node_count());
    PortGraph::Adjacency adj = g1.adjacency();
    for (const auto& ports : g2.adjacency()) {
        auto& row = adj.emplace_back();
        for (const auto& h : ports) {
            row.push_back({h.to + offset, h.reverse});
        }
    }
    const NodeIndex u = v1;
    const NodeIndex w = v2 + offset;
    const auto pu = static_cast<Port>(adj[u].size() + 1);
    const auto pw = static_cast<Port>(adj[w].size() + 1);
    adj[u].push_back({w, pw});
    adj[w].push_back({u, pu});
    return PortGraph(std::move(adj));
}

T3Graph make_t3(std::size_t d1, std::size_t d2, std::size_t n) {
    if (n % 2 != 0 || d1 < 1 || d2 < 1 || n / 2 < d1 + 2 || n / 2 < d2 + 2) {
        throw GraphError(GraphErrc::invalid_size, "T3 sizes unsatisfiable: need even n and n/2 >= d+2 for both stars");
    }
    const std::size_t half = n / 2;
    const std::size_t l1 = half - d1 - 1;
    const std::size_t l2 = half - d2 - 1;
    GraphBuilder b(n);

    const NodeIndex c1 = 0;
    for (std::size_t i = 1; i <= d1; ++i) {
        b.add_edge(c1, static_cast<NodeIndex>(i));
    }
    const auto l1_first = static_cast<NodeIndex>(d1 + 1);
    for (std::size_t i = 0; i + 1 < l1; ++i) {
        b.add_edge(static_cast<NodeIndex>(l1_first + i), static_cast<NodeIndex>(l1_first + i + 1));
    }

    const auto c2 = static_cast<NodeIndex>(half);
    for (std::size_t i = 1; i <= d2; ++i) {
        b.add_edge(c2, static_cast<NodeIndex>(c2 + i));
    }
    const auto l2_first = static_cast<NodeIndex>(c2 + d2 + 1);
    for (std::size_t i = 0; i + 1 < l2; ++i) {
        b.add_edge(static_cast<NodeIndex>(l2_first + i), static_cast<NodeIndex>(l2_first + i + 1));
    }

    const NodeIndex leaf1 = c1 + 1;
    const NodeIndex leaf2 = c2 + 1;
    b.add_edge(leaf1, leaf2);
    b.add_edge(leaf1, l1_first);
    b.add_edge(leaf2, l2_first);
    return T3Graph{b.build(), c1, c2};
}

}  // namespace pgather
