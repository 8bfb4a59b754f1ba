#pragma once

#include <boost/container/flat_map.hpp>
#include <boost/container/flat_set.hpp>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pgather/parameters.hpp"
#include "pgather/types.hpp"

namespace pgather {

using TrustRow = boost::container::flat_map<AgentId, std::int64_t>;
using TrustMatrix = boost::container::flat_map<AgentId, TrustRow>;
using IdSet = boost::container::flat_set<AgentId>;
/// Rounds since each id was last co-located (memory-capped variant only).
using Recency = boost::container::flat_map<AgentId, std::int64_t>;

/// Protocol variables of one agent. `last_seen` is bookkeeping for the
/// memory-capped variant; it is announced but never compared.
struct AgentState {
    std::int64_t num_round = 0;
    AgentId seed;
    TrustMatrix t_wit;
    IdSet group;  // R
    Recency last_seen;

    bool operator==(const AgentState&) const = default;
};

/// Equality over numRound, seed, T_wit and R: the fields anomaly detection reads.
bool protocol_equal(const AgentState& a, const AgentState& b);

/// The initialized state a dormant agent wakes into.
AgentState initial_state(AgentId self);

/// Upper bound on ids kept per announced structure after sanitizing.
inline constexpr std::size_t kMaxAnnouncedIds = 64;

/// Normalizes arbitrary memory into the protocol's value ranges: numRound
/// wrapped into [0, modulus), trust values clamped into [1, tau], id 0 and
/// entries past kMaxAnnouncedIds dropped. Seed is left alone.
AgentState sanitize(AgentState state, const Parameters& params);

/// Everything shouted at one node in one round, sorted by id, with state
/// equality classes precomputed so anomaly checks are O(1).
///
/// A borrowing view points at states owned elsewhere (the engine keeps them
/// alive for the round); an owning view holds copies. Views are move-only.
class NodeView {
public:
    struct Entry {
        AgentId id;
        const AgentState* state;
    };

    static NodeView borrowing(std::uint32_t degree, std::vector<Entry> entries);
    static NodeView owning(std::uint32_t degree, std::vector<std::pair<AgentId, AgentState>> announcements);

    NodeView(NodeView&&) noexcept = default;
    NodeView& operator=(NodeView&&) noexcept = default;
    NodeView(const NodeView&) = delete;
    NodeView& operator=(const NodeView&) = delete;

    std::uint32_t degree() const { return degree_; }
    std::size_t size() const { return entries_.size(); }
    std::span<const Entry> entries() const { return entries_; }
    AgentId id_at(std::size_t i) const { return entries_[i].id; }
    const AgentState& state_at(std::size_t i) const { return *entries_[i].state; }
    std::optional<std::size_t> index_of(AgentId id) const;
    bool contains(AgentId id) const { return index_of(id).has_value(); }
    bool same_state(std::size_t i, std::size_t j) const { return class_[i] == class_[j]; }

private:
    NodeView() = default;
    void finish();

    std::uint32_t degree_ = 0;
    std::vector<AgentState> storage_;
    std::vector<Entry> entries_;
    std::vector<std::size_t> class_;
};

/// What one agent observes in a round.
struct ObservedSnapshot {
    const NodeView& view;
    std::optional<Port> incoming;
};

/// True iff `subject` is absent or announced a state differing from the
/// observer's in R, numRound, seed or T_wit.
bool detect_anomaly(const NodeView& view, std::size_t observer, AgentId subject);

/// The row agent `simulated` (a view index) would compute for itself,
/// derived from its announced state.
TrustRow update_value(const NodeView& view, std::size_t simulated, const Parameters& params);

/// One row per co-located agent; rows for absent agents vanish.
TrustMatrix update_trust_relationship(const NodeView& view, const Parameters& params);

/// Trims a row to at most `cap` keys, evicting the least recently seen ids
/// first. Ids present in `view` count as seen now, ids missing from `recency`
/// as never seen; ties evict the smaller id.
void cap_twit(TrustRow& row, std::size_t cap, const Recency& recency, const NodeView& view);

struct ConfidenceGraph {
    std::vector<AgentId> nodes;
    std::vector<std::pair<AgentId, AgentId>> edges;  // a < b

    std::uint64_t digest() const;
};

/// Edge iff both directed entries trust (value tau, or no entry at all).
ConfidenceGraph confidence_graph(const NodeView& view, const TrustMatrix& t_wit, const Parameters& params);

struct SeedSelection {
    AgentId seed;
    IdSet group;
    bool reset = false;  // some member announced a different R
};

SeedSelection select_seed(const NodeView& view, std::size_t self, const ConfidenceGraph& cg);

struct RoundResult {
    AgentState state;
    Action action = Action::wait();
    bool reset = false;
    std::vector<AgentId> anomalies;  // ids this agent wrote value 1 for in its own row
    std::uint64_t cg_digest = 0;
};

/// One full round of the protocol for agent `self`, whose round-start state
/// must be its entry in the snapshot.
RoundResult agent_round(AgentId self, const ObservedSnapshot& snapshot, const Parameters& params);

/// Stable digest of a trust matrix, used for cross-agent equality checks.
std::uint64_t digest(const TrustMatrix& t_wit);
/// Digest of the announced protocol fields.
std::uint64_t digest(const AgentState& state);

}  // namespace pgather
