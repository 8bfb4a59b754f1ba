#pragma once

#include <string>
#include <vector>

#include "pgather/graph.hpp"

namespace pgather {

/// An ordered list of graphs that certificates are issued against.
///
/// The textual spec is a comma-separated list of `kind:range` items, where kind
/// is ring, line, star or clique and range is `a` or `a-b`; star sizes count
/// leaves. `bundled` expands to the default desk-scale family.
class GraphFamily {
public:
    GraphFamily() = default;
    GraphFamily(std::string description, std::vector<PortGraph> graphs);

    static GraphFamily parse(const std::string& spec);
    static GraphFamily bundled();
    static const char* bundled_spec();

    const std::string& description() const { return description_; }
    const std::vector<PortGraph>& graphs() const { return graphs_; }
    bool empty() const { return graphs_.empty(); }
    std::size_t max_nodes() const;

    /// FNV-1a over the serialized graphs, in order, as 16 hex digits.
    std::string hash() const;

    /// True if the graph is isomorphic as a port graph to a member, with the
    /// node relabelling left free.
    bool contains(const PortGraph& g) const;

private:
    std::string description_;
    std::vector<PortGraph> graphs_;
};

/// Port-preserving isomorphism test. Port numbering makes the map from one
/// node determined, so this is n BFS attempts.
bool port_isomorphic(const PortGraph& a, const PortGraph& b);

}  // namespace pgather
