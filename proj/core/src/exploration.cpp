#include "pgather/exploration.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace pgather {

Port next_port(const std::vector<std::uint32_t>& offsets, std::size_t step, std::uint32_t degree,
               std::optional<Port> incoming) {
    if (step >= offsets.size()) {
        throw ExplorationError("exploration step " + std::to_string(step) + " out of range");
    }
    if (degree == 0) {
        throw ExplorationError("next_port called on an isolated node");
    }
    const std::uint64_t base = incoming ? (*incoming - 1) : 0;
    return static_cast<Port>((base + offsets[step]) % degree + 1);
}

std::string CoverageFailure::describe() const {
    std::ostringstream out;
    out << "graph #" << walk.graph << " start " << walk.start << " incoming "
        << (walk.incoming ? std::to_string(*walk.incoming) : std::string("none")) << ": node " << uncovered
        << " unvisited after " << steps << " steps";
    return out.str();
}

namespace {

struct Walk {
    NodeIndex at;
    std::optional<Port> incoming;
    std::vector<char> visited;
    std::size_t remaining;
};

Walk start_walk(const PortGraph& g, NodeIndex start, std::optional<Port> incoming) {
    Walk w{start, incoming, std::vector<char>(g.node_count(), 0), g.node_count() - 1};
    w.visited[start] = 1;
    return w;
}

void advance(Walk& w, const PortGraph& g, std::uint32_t offset) {
    const auto d = g.degree(w.at);
    const std::uint64_t base = w.incoming ? (*w.incoming - 1) : 0;
    const auto h = g.follow(w.at, static_cast<Port>((base + offset) % d + 1));
    w.at = h.to;
    w.incoming = h.reverse;
    if (!w.visited[h.to]) {
        w.visited[h.to] = 1;
        --w.remaining;
    }
}

std::vector<WalkStart> all_starts(const GraphFamily& family) {
    std::vector<WalkStart> starts;
    for (std::size_t gi = 0; gi < family.graphs().size(); ++gi) {
        const auto& g = family.graphs()[gi];
        for (NodeIndex v = 0; v < g.node_count(); ++v) {
            starts.push_back({gi, v, std::nullopt});
            for (Port p = 1; p <= g.degree(v); ++p) {
                starts.push_back({gi, v, p});
            }
        }
    }
    return starts;
}

}  // namespace

std::optional<std::size_t> cover_time(const std::vector<std::uint32_t>& offsets, const PortGraph& g, NodeIndex start,
                                      std::optional<Port> incoming, std::size_t limit) {
    if (start >= g.node_count()) {
        throw ExplorationError("start node out of range");
    }
    Walk w = start_walk(g, start, incoming);
    limit = std::min(limit, offsets.size());
    std::size_t step = 0;
    while (w.remaining > 0 && step < limit) {
        advance(w, g, offsets[step]);
        ++step;
    }
    if (w.remaining > 0) {
        return std::nullopt;
    }
    return step;
}

std::variant<ExplorationSequence, CoverageFailure> certify(const std::vector<std::uint32_t>& offsets,
                                                           const GraphFamily& family, std::size_t bound) {
    if (family.empty()) {
        throw ExplorationError("cannot certify against an empty family");
    }
    if (bound > offsets.size()) {
        throw ExplorationError("bound " + std::to_string(bound) + " exceeds sequence length " +
                               std::to_string(offsets.size()));
    }
    for (const auto& ws : all_starts(family)) {
        const auto& g = family.graphs()[ws.graph];
        if (!cover_time(offsets, g, ws.start, ws.incoming, bound)) {
            Walk w = start_walk(g, ws.start, ws.incoming);
            for (std::size_t s = 0; s < bound; ++s) {
                advance(w, g, offsets[s]);
            }
            const auto it = std::find(w.visited.begin(), w.visited.end(), 0);
            return CoverageFailure{ws, static_cast<NodeIndex>(it - w.visited.begin()), bound};
        }
    }
    return ExplorationSequence{offsets, bound, family.max_nodes(), family.hash(), family.description()};
}

namespace {

std::optional<std::vector<std::uint32_t>> greedy_draw(const GraphFamily& family, std::uint32_t alphabet,
                                                      std::size_t max_len, std::mt19937_64& rng) {
    std::vector<Walk> walks;
    std::vector<const PortGraph*> graph_of;
    for (const auto& ws : all_starts(family)) {
        const auto& g = family.graphs()[ws.graph];
        walks.push_back(start_walk(g, ws.start, ws.incoming));
        graph_of.push_back(&g);
    }
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> best;
    while (offsets.size() < max_len) {
        std::size_t open = 0;
        for (const auto& w : walks) {
            open += w.remaining > 0 ? 1 : 0;
        }
        if (open == 0) {
            return offsets;
        }
        long best_gain = -1;
        best.clear();
        for (std::uint32_t o = 0; o < alphabet; ++o) {
            long gain = 0;
            for (std::size_t i = 0; i < walks.size(); ++i) {
                const auto& w = walks[i];
                if (w.remaining == 0) {
                    continue;
                }
                const auto& g = *graph_of[i];
                const auto d = g.degree(w.at);
                const std::uint64_t base = w.incoming ? (*w.incoming - 1) : 0;
                const auto to = g.follow(w.at, static_cast<Port>((base + o) % d + 1)).to;
                if (!w.visited[to]) {
                    // Finishing a walk is worth more than progress on a long one.
                    gain += w.remaining == 1 ? 4 : 1;
                }
            }
            if (gain > best_gain) {
                best_gain = gain;
                best.assign(1, o);
            } else if (gain == best_gain) {
                best.push_back(o);
            }
        }
        const auto pick = best[rng() % best.size()];
        offsets.push_back(pick);
        for (std::size_t i = 0; i < walks.size(); ++i) {
            if (walks[i].remaining > 0) {
                advance(walks[i], *graph_of[i], pick);
            }
        }
    }
    for (const auto& w : walks) {
        if (w.remaining > 0) {
            return std::nullopt;
        }
    }
    return offsets;
}

}  // namespace

ExplorationSequence search_sequence(const GraphFamily& family, std::size_t max_nodes, std::size_t max_len,
                                    SearchOptions options) {
    if (family.empty()) {
        throw ExplorationError("cannot search against an empty family");
    }
    if (family.max_nodes() > max_nodes) {
        throw ExplorationError("family contains a graph with more than N=" + std::to_string(max_nodes) + " nodes");
    }
    // Offsets only matter modulo the degree, so lcm(1..max degree) covers
    // every distinct behaviour.
    std::uint32_t alphabet = 1;
    for (const auto& g : family.graphs()) {
        for (NodeIndex v = 0; v < g.node_count(); ++v) {
            alphabet = std::lcm(alphabet, std::max<std::uint32_t>(1, g.degree(v)));
        }
    }
    std::mt19937_64 rng(options.seed);
    std::optional<std::vector<std::uint32_t>> shortest;
    for (std::size_t draw = 0; draw < std::max<std::size_t>(1, options.draws); ++draw) {
        auto candidate = greedy_draw(family, alphabet, max_len, rng);
        if (candidate && (!shortest || candidate->size() < shortest->size())) {
            shortest = std::move(candidate);
        }
    }
    if (!shortest) {
        throw SequenceNotFound("no sequence of length <= " + std::to_string(max_len) + " covers the family");
    }
    auto result = certify(*shortest, family, shortest->size());
    if (auto* fail = std::get_if<CoverageFailure>(&result)) {
        throw ExplorationError("internal: greedy sequence failed certification: " + fail->describe());
    }
    auto seq = std::get<ExplorationSequence>(std::move(result));
    seq.max_nodes = max_nodes;
    return seq;
}

std::string serialize(const ExplorationSequence& seq) {
    std::ostringstream out;
    out << seq.certified_bound << ' ' << seq.max_nodes << ' ' << seq.family_hash << '\n';
    for (std::size_t i = 0; i < seq.offsets.size(); ++i) {
        out << (i ? " " : "") << seq.offsets[i];
    }
    out << '\n';
    return out.str();
}

ExplorationSequence parse_exploration(const std::string& text) {
    std::istringstream in(text);
    ExplorationSequence seq;
    if (!(in >> seq.certified_bound >> seq.max_nodes >> seq.family_hash)) {
        throw ExplorationError("exploration certificate: malformed header");
    }
    long long o = 0;
    while (in >> o) {
        if (o < 0) {
            throw ExplorationError("exploration certificate: negative offset");
        }
        seq.offsets.push_back(static_cast<std::uint32_t>(o));
    }
    if (!in.eof()) {
        throw ExplorationError("exploration certificate: malformed offset list");
    }
    if (seq.offsets.size() < seq.certified_bound || seq.certified_bound == 0) {
        throw ExplorationError("exploration certificate: bound inconsistent with offset count");
    }
    return seq;
}

}  // namespace pgather
