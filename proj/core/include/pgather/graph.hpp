#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgather/types.hpp"

namespace pgather {

enum class GraphErrc { invalid_size, invalid_structure, invalid_node, invalid_port, parse_error };

class GraphError : public std::invalid_argument {
public:
    GraphError(GraphErrc code, const std::string& what) : std::invalid_argument(what), code_(code) {}
    GraphErrc code() const noexcept { return code_; }

private:
    GraphErrc code_;
};

/// Anonymous undirected graph with local port numbering.
///
/// Port p at node v (1 <= p <= degree(v)) leads to `follow(v, p).to`, where the
/// agent arrives through `follow(v, p).reverse`. Instances are immutable and
/// always satisfy the validator; construction from raw adjacency throws
/// GraphError otherwise.
class PortGraph {
public:
    struct HalfEdge {
        NodeIndex to = 0;
        Port reverse = 0;
        bool operator==(const HalfEdge&) const = default;
    };
    using Adjacency = std::vector<std::vector<HalfEdge>>;

    explicit PortGraph(Adjacency adjacency);

    std::size_t node_count() const { return adj_.size(); }
    std::size_t edge_count() const;
    std::uint32_t degree(NodeIndex v) const;
    HalfEdge follow(NodeIndex v, Port p) const;
    const Adjacency& adjacency() const { return adj_; }

    bool operator==(const PortGraph&) const = default;

private:
    Adjacency adj_;
};

/// Outcome of the structural validator. `problem` is empty iff `ok`.
struct ValidationReport {
    bool ok = true;
    std::string problem;
};

/// Checks port completeness, edge symmetry, simplicity and connectivity.
ValidationReport validate(const PortGraph::Adjacency& adjacency);

/// Incremental builder that hands out the next free port at each endpoint.
class GraphBuilder {
public:
    explicit GraphBuilder(std::size_t nodes);
    GraphBuilder& add_edge(NodeIndex u, NodeIndex v);
    PortGraph build() const;

private:
    PortGraph::Adjacency adj_;
};

/// n-cycle. With `clockwise`, port 1 at node i leads to i+1 and port 2 to i-1
/// everywhere. Otherwise ports follow edge construction order
/// (0-1, 1-2, ..., (n-1)-0), which flips the orientation at node 0.
PortGraph make_ring(std::size_t n, bool clockwise = true);
PortGraph make_line(std::size_t n);
/// Star with centre 0 and leaves 1..leaves.
PortGraph make_star(std::size_t leaves);
PortGraph make_clique(std::size_t n);
/// Tree from a parent list; exactly one entry must be -1 (the root).
PortGraph make_tree(const std::vector<std::int64_t>& parent);

/// Disjoint union plus the bridge (v1, v2). Nodes of g1 keep their indices;
/// node u of g2 becomes g1.node_count() + u.
PortGraph glue(const PortGraph& g1, NodeIndex v1, const PortGraph& g2, NodeIndex v2);

/// Two stars and two lines joined into the tree used for the frozen-groups
/// construction. Layout of the node indices:
///   [S1 centre, S1 leaves..., L1..., S2 centre, S2 leaves..., L2...]
/// Leaf 1 of S1 is joined to leaf 1 of S2 and to the first node of L1;
/// leaf 1 of S2 is also joined to the first node of L2.
struct T3Graph {
    PortGraph graph;
    NodeIndex center1;
    NodeIndex center2;
};
T3Graph make_t3(std::size_t d1, std::size_t d2, std::size_t n);

/// Plain-text format: line 1 `n`, then per node `d nbr rport ...`.
std::string to_text(const PortGraph& g);
PortGraph parse_graph(const std::string& text);
PortGraph load_graph_file(const std::string& path);

}  // namespace pgather
