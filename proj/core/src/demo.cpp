#include "pgather/demo.hpp"

#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pgather/graph.hpp"

namespace pgather {

namespace {

struct Observation {
    std::uint32_t degree;
    std::optional<Port> incoming;
    bool operator==(const Observation&) const = default;
};

struct StrawmanRun {
    std::vector<Observation> seen;
    std::set<NodeIndex> visited;
    NodeIndex final_node = 0;
};

StrawmanRun strawman(const PortGraph& g, NodeIndex start, std::size_t steps) {
    StrawmanRun run;
    NodeIndex at = start;
    std::optional<Port> incoming;
    run.visited.insert(at);
    for (std::size_t s = 0; s < steps; ++s) {
        const auto d = g.degree(at);
        run.seen.push_back({d, incoming});
        const Port p = static_cast<Port>((incoming.value_or(0)) % d + 1);
        const auto h = g.follow(at, p);
        at = h.to;
        incoming = h.reverse;
        run.visited.insert(at);
    }
    run.final_node = at;
    return run;
}

std::string show(const std::vector<Observation>& obs) {
    std::ostringstream out;
    for (const auto& o : obs) {
        out << "(d=" << o.degree << ",in=" << (o.incoming ? std::to_string(*o.incoming) : std::string("-")) << ")";
    }
    return out.str();
}

}  // namespace

DemoReport demo_ring(std::size_t steps) {
    DemoReport rep{"ring", {}, false};
    const auto small = make_ring(3);
    const auto big = make_ring(steps + 2);
    const auto a = strawman(small, 0, steps);
    const auto b = strawman(big, 0, steps);
    rep.narrative.push_back("strawman: explore " + std::to_string(steps) + " steps, then declare gathering done");
    rep.narrative.push_back("ring(3): visited " + std::to_string(a.visited.size()) + "/3 nodes, observations " +
                            show(a.seen));
    rep.narrative.push_back("ring(" + std::to_string(steps + 2) + "): visited " + std::to_string(b.visited.size()) +
                            "/" + std::to_string(steps + 2) + " nodes, observations " + show(b.seen));
    const bool same = a.seen == b.seen;
    rep.narrative.push_back(same ? "observation sequences are identical, so the agent cannot tell the rings apart"
                                 : "observation sequences differ");
    rep.failure_exhibited = same && a.visited.size() == 3 && b.visited.size() < steps + 2;
    if (rep.failure_exhibited) {
        rep.narrative.push_back("premature termination: a node of the larger ring was never visited");
    }
    return rep;
}

DemoReport demo_glued() {
    DemoReport rep{"glued", {}, false};
    constexpr std::size_t steps = 2;
    const auto gi = make_ring(5);
    const auto alone = strawman(gi, 0, steps);
    NodeIndex unvisited = 0;
    while (alone.visited.contains(unvisited)) ++unvisited;
    rep.narrative.push_back("on ring(5) alone the strawman terminates after " + std::to_string(steps) +
                            " steps without visiting node " + std::to_string(unvisited));
    const auto glued = glue(gi, unvisited, gi, unvisited);
    const NodeIndex offset = static_cast<NodeIndex>(gi.node_count());
    const auto ai = strawman(glued, 0, steps);
    const auto aj = strawman(glued, offset, steps);
    rep.narrative.push_back("glued graph: two copies joined by edge (" + std::to_string(unvisited) + ", " +
                            std::to_string(unvisited + offset) + ")");
    rep.narrative.push_back("agent i sees " + show(ai.seen) + " and terminates at node " +
                            std::to_string(ai.final_node));
    rep.narrative.push_back("agent j sees " + show(aj.seen) + " and terminates at node " +
                            std::to_string(aj.final_node));
    const bool indistinguishable = ai.seen == alone.seen && aj.seen == alone.seen;
    rep.failure_exhibited = indistinguishable && ai.final_node != aj.final_node;
    if (rep.failure_exhibited) {
        rep.narrative.push_back("both behave exactly as on ring(5) alone and terminate at different nodes");
    }
    return rep;
}

DemoReport demo_t3(std::size_t rounds) {
    DemoReport rep{"t3", {}, false};
    const auto t3 = make_t3(2, 2, 12);
    rep.narrative.push_back("T3 with 12 nodes; star centres at nodes " + std::to_string(t3.center1) + " and " +
                            std::to_string(t3.center2));
    // Configuration c*: each group already declared termination at its centre.
    NodeIndex group1 = t3.center1;
    NodeIndex group2 = t3.center2;
    std::size_t met = 0;
    for (std::size_t r = 0; r < rounds; ++r) {
        // Terminated agents stay put: every action is WAIT.
        met += group1 == group2 ? 1 : 0;
    }
    rep.narrative.push_back("both groups are terminated, so every round both WAIT");
    rep.narrative.push_back("after " + std::to_string(rounds) + " rounds the groups shared a node " +
                            std::to_string(met) + " times");
    rep.failure_exhibited = met == 0 && group1 != group2;
    if (rep.failure_exhibited) {
        rep.narrative.push_back("frozen split: the groups never merge");
    }
    return rep;
}

DemoReport run_demo(const std::string& which) {
    if (which == "ring") return demo_ring();
    if (which == "glued") return demo_glued();
    if (which == "t3") return demo_t3();
    throw std::invalid_argument("unknown demo '" + which + "' (expected ring, glued or t3)");
}

}  // namespace pgather
