#include "pgather/agent.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "pgather/hash.hpp"

namespace pgather {

bool protocol_equal(const AgentState& a, const AgentState& b) {
    return a.num_round == b.num_round && a.seed == b.seed && a.group == b.group && a.t_wit == b.t_wit;
}

AgentState initial_state(AgentId self) {
    AgentState s;
    s.seed = self;
    return s;
}

namespace {

template <typename Map>
void truncate(Map& m, std::size_t limit) {
    if (m.size() > limit) {
        m.erase(m.begin() + static_cast<std::ptrdiff_t>(limit), m.end());
    }
}

}  // namespace

AgentState sanitize(AgentState s, const Parameters& params) {
    s.num_round %= params.modulus;
    if (s.num_round < 0) {
        s.num_round += params.modulus;
    }
    s.t_wit.erase(AgentId{0});
    truncate(s.t_wit, kMaxAnnouncedIds);
    for (auto& [id, row] : s.t_wit) {
        row.erase(AgentId{0});
        truncate(row, kMaxAnnouncedIds);
        for (auto& [key, value] : row) {
            value = std::clamp<std::int64_t>(value, 1, params.tau);
        }
    }
    s.group.erase(AgentId{0});
    truncate(s.group, kMaxAnnouncedIds);
    if (params.cap_twit) {
        s.last_seen.erase(AgentId{0});
        truncate(s.last_seen, kMaxAnnouncedIds);
        for (auto& [id, age] : s.last_seen) {
            age = std::clamp<std::int64_t>(age, 0, params.tau + 1);
        }
    } else {
        s.last_seen.clear();
    }
    return s;
}

NodeView NodeView::borrowing(std::uint32_t degree, std::vector<Entry> entries) {
    NodeView v;
    v.degree_ = degree;
    v.entries_ = std::move(entries);
    v.finish();
    return v;
}

NodeView NodeView::owning(std::uint32_t degree, std::vector<std::pair<AgentId, AgentState>> announcements) {
    NodeView v;
    v.degree_ = degree;
    v.storage_.reserve(announcements.size());
    for (auto& [id, st] : announcements) {
        v.storage_.push_back(std::move(st));
        v.entries_.push_back({id, nullptr});
    }
    for (std::size_t i = 0; i < v.storage_.size(); ++i) {
        v.entries_[i].state = &v.storage_[i];
    }
    v.finish();
    return v;
}

void NodeView::finish() {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (entries_[i].id == entries_[i - 1].id) {
            throw std::logic_error("duplicate agent id in one snapshot");
        }
    }
    class_.assign(entries_.size(), 0);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        class_[i] = i;
        for (std::size_t j = 0; j < i; ++j) {
            if (class_[j] == j && protocol_equal(*entries_[i].state, *entries_[j].state)) {
                class_[i] = j;
                break;
            }
        }
    }
}

std::optional<std::size_t> NodeView::index_of(AgentId id) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                                     [](const Entry& e, AgentId x) { return e.id < x; });
    if (it == entries_.end() || it->id != id) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - entries_.begin());
}

bool detect_anomaly(const NodeView& view, std::size_t observer, AgentId subject) {
    const auto idx = view.index_of(subject);
    return !idx || !view.same_state(observer, *idx);
}

TrustRow update_value(const NodeView& view, std::size_t simulated, const Parameters& params) {
    const AgentState& sj = view.state_at(simulated);
    const AgentId j = view.id_at(simulated);
    const auto tau = params.tau;
    static const TrustRow empty_row;
    const auto row_it = sj.t_wit.find(j);
    const TrustRow& tracked = row_it == sj.t_wit.end() ? empty_row : row_it->second;

    std::vector<std::pair<AgentId, std::int64_t>> out;
    out.reserve(sj.group.size() + view.size() + tracked.size());
    // Group members: 1 on an anomaly, otherwise keep healing.
    for (const AgentId l : sj.group) {
        if (detect_anomaly(view, simulated, l)) {
            out.emplace_back(l, 1);
        } else if (auto it = tracked.find(l); it != tracked.end() && it->second < tau) {
            out.emplace_back(l, it->second + 1);
        }
    }
    // First meeting with a co-located agent outside the group.
    for (const auto& e : view.entries()) {
        if (!sj.group.contains(e.id) && !tracked.contains(e.id)) {
            out.emplace_back(e.id, tau);
        }
    }
    // Distrusted agents outside the group keep healing.
    for (const auto& [l, value] : tracked) {
        if (!sj.group.contains(l) && value < tau) {
            out.emplace_back(l, value + 1);
        }
    }
    std::sort(out.begin(), out.end());
    TrustRow row(boost::container::ordered_unique_range, out.begin(), out.end());
    if (params.cap_twit) {
        cap_twit(row, params.bounds.K, sj.last_seen, view);
    }
    return row;
}

TrustMatrix update_trust_relationship(const NodeView& view, const Parameters& params) {
    std::vector<std::pair<AgentId, TrustRow>> rows;
    rows.reserve(view.size());
    for (std::size_t j = 0; j < view.size(); ++j) {
        rows.emplace_back(view.id_at(j), update_value(view, j, params));
    }
    return TrustMatrix(boost::container::ordered_unique_range, std::make_move_iterator(rows.begin()),
                       std::make_move_iterator(rows.end()));
}

void cap_twit(TrustRow& row, std::size_t cap, const Recency& recency, const NodeView& view) {
    if (row.size() <= cap) {
        return;
    }
    constexpr auto never = std::numeric_limits<std::int64_t>::max();
    std::vector<std::pair<std::int64_t, AgentId>> order;  // (age, id), evict largest age, then smallest id
    order.reserve(row.size());
    for (const auto& [id, value] : row) {
        std::int64_t age = never;
        if (view.contains(id)) {
            age = 0;
        } else if (auto it = recency.find(id); it != recency.end()) {
            age = it->second + 1;
        }
        order.emplace_back(age, id);
    }
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t i = 0; row.size() > cap; ++i) {
        row.erase(order[i].second);
    }
}

std::uint64_t ConfidenceGraph::digest() const {
    Fnv1a h;
    h.u64(nodes.size());
    for (auto id : nodes) h.u64(id.value);
    for (const auto& [a, b] : edges) h.u64(a.value).u64(b.value);
    return h.value();
}

namespace {

bool trusts(const TrustMatrix& t, AgentId from, AgentId to, std::int64_t tau) {
    const auto row = t.find(from);
    if (row == t.end()) {
        return true;
    }
    const auto it = row->second.find(to);
    return it == row->second.end() || it->second >= tau;
}

}  // namespace

ConfidenceGraph confidence_graph(const NodeView& view, const TrustMatrix& t_wit, const Parameters& params) {
    ConfidenceGraph cg;
    cg.nodes.reserve(view.size());
    for (std::size_t i = 0; i < view.size(); ++i) {
        cg.nodes.push_back(view.id_at(i));
    }
    for (std::size_t i = 0; i < view.size(); ++i) {
        for (std::size_t j = i + 1; j < view.size(); ++j) {
            const AgentId a = view.id_at(i);
            const AgentId b = view.id_at(j);
            if (trusts(t_wit, a, b, params.tau) && trusts(t_wit, b, a, params.tau)) {
                cg.edges.emplace_back(a, b);
            }
        }
    }
    return cg;
}

SeedSelection select_seed(const NodeView& view, std::size_t self, const ConfidenceGraph& cg) {
    const std::size_t n = view.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [a, b] : cg.edges) {
        const auto ia = *view.index_of(a);
        const auto ib = *view.index_of(b);
        adj[ia].push_back(ib);
        adj[ib].push_back(ia);
    }
    std::vector<char> reached(n, 0);
    std::queue<std::size_t> frontier;
    reached[self] = 1;
    frontier.push(self);
    std::vector<AgentId> members;
    while (!frontier.empty()) {
        const auto v = frontier.front();
        frontier.pop();
        members.push_back(view.id_at(v));
        for (auto w : adj[v]) {
            if (!reached[w]) {
                reached[w] = 1;
                frontier.push(w);
            }
        }
    }
    std::sort(members.begin(), members.end());
    SeedSelection sel;
    sel.group = IdSet(boost::container::ordered_unique_range, members.begin(), members.end());
    sel.seed = members.front();
    for (std::size_t i = 0; i < n && !sel.reset; ++i) {
        if (reached[i] && view.state_at(i).group != sel.group) {
            sel.reset = true;
        }
    }
    return sel;
}

RoundResult agent_round(AgentId self, const ObservedSnapshot& snapshot, const Parameters& params) {
    const NodeView& view = snapshot.view;
    const auto me = view.index_of(self);
    if (!me) {
        throw std::logic_error("agent_round: agent is missing from its own snapshot");
    }
    const AgentState& current = view.state_at(*me);

    RoundResult out;
    AgentState& next = out.state;
    next.num_round = (current.num_round + 1) % params.modulus;
    next.t_wit = update_trust_relationship(view, params);

    const TrustRow& own_row = next.t_wit.at(self);
    for (const AgentId l : current.group) {
        if (auto it = own_row.find(l); it != own_row.end() && it->second == 1 && detect_anomaly(view, *me, l)) {
            out.anomalies.push_back(l);
        }
    }

    const auto cg = confidence_graph(view, next.t_wit, params);
    out.cg_digest = cg.digest();
    auto sel = select_seed(view, *me, cg);
    next.seed = sel.seed;
    next.group = std::move(sel.group);
    out.reset = sel.reset;
    if (sel.reset && params.mutation != Mutation::skip_numround_consensus) {
        next.num_round = 0;
    }

    if (params.cap_twit) {
        std::vector<std::pair<AgentId, std::int64_t>> ages;
        for (const auto& [id, age] : current.last_seen) {
            if (!view.contains(id) && own_row.contains(id)) {
                ages.emplace_back(id, std::min(age + 1, params.tau + 1));
            }
        }
        for (const auto& e : view.entries()) {
            ages.emplace_back(e.id, 0);
        }
        std::sort(ages.begin(), ages.end());
        next.last_seen = Recency(boost::container::ordered_unique_range, ages.begin(), ages.end());
    }

    out.action = params.schedule->action(next.seed.value, next.num_round, view.degree(), snapshot.incoming);
    return out;
}

std::uint64_t digest(const TrustMatrix& t_wit) {
    Fnv1a h;
    h.u64(t_wit.size());
    for (const auto& [id, row] : t_wit) {
        h.u64(id.value).u64(row.size());
        for (const auto& [key, value] : row) {
            h.u64(key.value).i64(value);
        }
    }
    return h.value();
}

std::uint64_t digest(const AgentState& s) {
    Fnv1a h;
    h.i64(s.num_round).u64(s.seed.value).u64(digest(s.t_wit)).u64(s.group.size());
    for (auto id : s.group) {
        h.u64(id.value);
    }
    return h.value();
}

}  // namespace pgather
