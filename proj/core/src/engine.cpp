#include "pgather/engine.hpp"

#include <algorithm>
#include <random>

namespace pgather {

void validate(const Configuration& c) {
    if (!c.graph) {
        throw ConfigError("configuration has no graph");
    }
    const auto& p = c.params;
    if (p.n != c.graph->node_count()) {
        throw ConfigError("parameters say n=" + std::to_string(p.n) + " but the graph has " +
                          std::to_string(c.graph->node_count()) + " nodes");
    }
    if (c.agents.size() != p.k) {
        throw ConfigError("parameters say k=" + std::to_string(p.k) + " but " + std::to_string(c.agents.size()) +
                          " agents are placed");
    }
    if (c.good_count() != p.k - p.f) {
        throw ConfigError("good-agent count must equal k - f");
    }
    bool someone_starts = false;
    for (std::size_t i = 0; i < c.agents.size(); ++i) {
        const auto& a = c.agents[i];
        if (i > 0 && !(c.agents[i - 1].id < a.id)) {
            throw ConfigError("agent ids must be unique and sorted");
        }
        if (a.id.value < 1 || a.id.value > p.top_label()) {
            throw ConfigError("agent id " + std::to_string(a.id.value) + " outside the certified label range 1.." +
                              std::to_string(p.top_label()));
        }
        if (a.good() && bit_length(a.id.value) > p.bounds.lambda_g) {
            throw ConfigError("good agent id " + std::to_string(a.id.value) + " needs more than lambda_g=" +
                              std::to_string(p.bounds.lambda_g) + " bits");
        }
        if (a.location >= c.graph->node_count()) {
            throw ConfigError("agent " + std::to_string(a.id.value) + " placed on a nonexistent node");
        }
        if (!a.good() && a.dormant) {
            throw ConfigError("Byzantine agents are always active");
        }
        if (a.good() && (!a.dormant || a.wake_round)) {
            someone_starts = true;
        }
    }
    if (!someone_starts) {
        throw ConfigError("no good agent is awake or scheduled to wake");
    }
}

void step_in_place(Configuration& c, TraceRecord* record) {
    const PortGraph& g = *c.graph;
    const Parameters& params = c.params;
    const Round r = c.round;
    auto& agents = c.agents;
    const std::size_t count = agents.size();

    // (a) wake-ups and first-round sanitizing.
    std::vector<WakeEvent> woke(count, WakeEvent::none);
    for (std::size_t i = 0; i < count; ++i) {
        auto& a = agents[i];
        if (a.dormant && a.wake_round && *a.wake_round <= r) {
            a.dormant = false;
            a.state = initial_state(a.id);
            woke[i] = a.woken_by_visit ? WakeEvent::visited : WakeEvent::scheduled;
        }
        if (!a.dormant && !a.started) {
            if (a.good()) {
                a.state = sanitize(std::move(a.state), params);
            }
            a.started = true;
        }
    }
    for (auto& a : agents) {
        if (!a.dormant) continue;
        const bool visited = std::any_of(agents.begin(), agents.end(), [&](const AgentSlot& o) {
            return !o.dormant && o.location == a.location;
        });
        if (visited && (!a.wake_round || *a.wake_round > r + 1)) {
            a.wake_round = r + 1;
            a.woken_by_visit = true;
        }
    }

    // (b) announcements, one per active agent, grouped by node.
    std::vector<AgentState> byz_said(count);
    std::vector<std::vector<NodeView::Entry>> at_node(g.node_count());
    for (std::size_t i = 0; i < count; ++i) {
        auto& a = agents[i];
        if (a.dormant) continue;
        const AgentState* said = &a.state;
        if (!a.good()) {
            byz_said[i] = sanitize(a.byzantine->announce(AnnounceContext{c, i}), params);
            said = &byz_said[i];
        }
        at_node[a.location].push_back({a.id, said});
    }
    std::vector<std::optional<NodeView>> views(g.node_count());
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
        if (!at_node[v].empty()) {
            views[v].emplace(NodeView::borrowing(g.degree(v), std::move(at_node[v])));
        }
    }

    // (c) transitions against the fixed snapshots.
    std::vector<std::optional<RoundResult>> results(count);
    std::vector<std::optional<Action>> planned(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto& a = agents[i];
        if (a.dormant || !a.good()) continue;
        results[i] = agent_round(a.id, ObservedSnapshot{*views[a.location], a.incoming}, params);
        planned[i] = results[i]->action;
    }
    std::vector<Action> actions(count, Action::wait());
    for (std::size_t i = 0; i < count; ++i) {
        const auto& a = agents[i];
        if (a.dormant) continue;
        actions[i] = a.good() ? *planned[i] : a.byzantine->act(ActContext{c, i, *views[a.location], planned});
        if (!actions[i].is_wait() && (actions[i].port() < 1 || actions[i].port() > g.degree(a.location))) {
            throw std::logic_error((a.good() ? "engine bug: good agent " : "strategy bug: Byzantine agent ") +
                                   std::to_string(a.id.value) + " chose invalid port " +
                                   std::to_string(actions[i].port()) + " in round " + std::to_string(r));
        }
    }

    if (record) {
        record->round = r;
        record->agents.clear();
        record->agents.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            const auto& a = agents[i];
            AgentRecord& out = record->agents.emplace_back();
            out.id = a.id;
            out.byzantine = !a.good();
            out.active = !a.dormant;
            out.location = a.location;
            out.wake = woke[i];
            out.action = actions[i];
            if (a.dormant) continue;
            if (a.good()) {
                const auto& res = *results[i];
                out.announced = digest(a.state);
                out.num_round = res.state.num_round;
                out.seed = res.state.seed;
                out.group = res.state.group;
                out.reset = res.reset;
                out.anomalies = res.anomalies;
                out.t_wit_digest = digest(res.state.t_wit);
                out.cg_digest = res.cg_digest;
                if (auto it = res.state.t_wit.find(a.id); it != res.state.t_wit.end()) {
                    out.own_row = it->second;
                }
                for (const auto& [id, row] : res.state.t_wit) {
                    out.widest_row = std::max(out.widest_row, row.size());
                }
            } else {
                const auto& s = byz_said[i];
                out.announced = digest(s);
                out.num_round = s.num_round;
                out.seed = s.seed;
                out.group = s.group;
                out.t_wit_digest = digest(s.t_wit);
            }
        }
    }

    // (d) commit.
    for (std::size_t i = 0; i < count; ++i) {
        auto& a = agents[i];
        if (results[i]) {
            a.state = std::move(results[i]->state);
        }
        if (actions[i].is_wait()) {
            a.incoming.reset();
        } else {
            const auto h = g.follow(a.location, actions[i].port());
            a.location = h.to;
            a.incoming = h.reverse;
        }
    }
    ++c.round;
}

Configuration step(Configuration config) {
    step_in_place(config);
    return config;
}

Trace run(Configuration config, Round horizon) {
    validate(config);
    Trace t;
    for (const auto& a : config.agents) {
        if (a.good()) {
            t.goods.push_back(a.id);
            t.staggered = t.staggered || a.dormant;
        }
    }
    t.n = config.params.n;
    t.k = config.params.k;
    t.f = config.params.f;
    t.K = config.params.bounds.K;
    t.tau = config.params.tau;
    t.modulus = config.params.modulus;
    t.cap_twit = config.params.cap_twit;
    if (horizon <= 0) {
        return t;
    }
    t.records.resize(static_cast<std::size_t>(horizon));
    for (auto& rec : t.records) {
        step_in_place(config, &rec);
    }
    return t;
}

namespace {

std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

AgentId random_id(std::mt19937_64& rng, const std::vector<AgentId>& real) {
    // Mostly real ids so stale structures reference agents that exist.
    if (draw(rng, 0, 3) != 0) {
        return real[static_cast<std::size_t>(draw(rng, 0, static_cast<std::int64_t>(real.size()) - 1))];
    }
    return AgentId{static_cast<std::uint32_t>(draw(rng, 0, 40))};
}

}  // namespace

void inject_arbitrary(Configuration& c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<AgentId> real;
    for (const auto& a : c.agents) real.push_back(a.id);
    const auto tau = c.params.tau;
    const auto m = c.params.modulus;
    for (auto& a : c.agents) {
        if (!a.good()) continue;
        AgentState s;
        s.num_round = draw(rng, -3 * m, 5 * m);
        s.seed = AgentId{static_cast<std::uint32_t>(draw(rng, 0, 40))};
        const auto group_size = draw(rng, 0, 5);
        for (std::int64_t i = 0; i < group_size; ++i) s.group.insert(random_id(rng, real));
        const auto rows = draw(rng, 0, 6);
        for (std::int64_t i = 0; i < rows; ++i) {
            auto& row = s.t_wit[random_id(rng, real)];
            const auto entries = draw(rng, 0, 6);
            for (std::int64_t e = 0; e < entries; ++e) {
                row[random_id(rng, real)] = draw(rng, -5, tau + 10);
            }
        }
        const auto seen = draw(rng, 0, 4);
        for (std::int64_t i = 0; i < seen; ++i) s.last_seen[random_id(rng, real)] = draw(rng, -3, tau + 5);
        a.state = std::move(s);
    }
}

void inject_crafted(Configuration& c, CraftedCase which) {
    std::vector<AgentId> goods;
    for (const auto& a : c.agents) {
        if (a.good()) goods.push_back(a.id);
    }
    for (auto& a : c.agents) {
        if (!a.good()) continue;
        AgentState s = initial_state(a.id);
        s.num_round = (17 * static_cast<std::int64_t>(a.id.value)) % c.params.modulus;
        s.group.insert(a.id);
        if (which == CraftedCase::mutual_distrust) {
            for (auto row_owner : goods) {
                auto& row = s.t_wit[row_owner];
                for (auto other : goods) {
                    if (other != row_owner) row[other] = 1;
                }
            }
        } else {
            s.group.insert(AgentId{1000 + a.id.value});
        }
        a.state = std::move(s);
    }
}

CraftedCase parse_crafted(const std::string& name) {
    if (name == "mutual_distrust") return CraftedCase::mutual_distrust;
    if (name == "stale_group") return CraftedCase::stale_group;
    throw ConfigError("unknown crafted case '" + name + "'");
}

std::string to_string(CraftedCase which) {
    return which == CraftedCase::mutual_distrust ? "mutual_distrust" : "stale_group";
}

}  // namespace pgather
