#include <fstream>
#include <sstream>

#include "pgather/graph.hpp"

namespace pgather {

std::string to_text(const PortGraph& g) {
    std::ostringstream out;
    out << g.node_count() << '\n';
    for (const auto& ports : g.adjacency()) {
        out << ports.size();
        for (const auto& h : ports) {
            out << ' ' << h.to << ' ' << h.reverse;
        }
        out << '\n';
    }
    return out.str();
}

PortGraph parse_graph(const std::string& text) {
    std::istringstream in(text);
    auto bad = [](const std::string& msg) { return GraphError(GraphErrc::parse_error, "graph text: " + msg); };
    long long n = 0;
    if (!(in >> n) || n < 1) {
        throw bad("missing or invalid node count");
    }
    PortGraph::Adjacency adj(static_cast<std::size_t>(n));
    for (auto& row : adj) {
        long long d = 0;
        if (!(in >> d) || d < 0 || d >= n) {
            throw bad("missing or invalid degree");
        }
        for (long long i = 0; i < d; ++i) {
            long long to = 0;
            long long rp = 0;
            if (!(in >> to >> rp) || to < 0 || rp < 1) {
                throw bad("missing or invalid neighbour/port pair");
            }
            row.push_back({static_cast<NodeIndex>(to), static_cast<Port>(rp)});
        }
    }
    std::string trailing;
    if (in >> trailing) {
        throw bad("unexpected trailing content '" + trailing + "'");
    }
    return PortGraph(std::move(adj));
}

PortGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw GraphError(GraphErrc::parse_error, "cannot open graph file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

}  // namespace pgather
