#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "pgather/agent.hpp"
#include "pgather/graph.hpp"
#include "pgather/parameters.hpp"

namespace pgather {

class ByzantineStrategy;

/// Value-semantic owner of a strategy: copying clones the strategy together
/// with its private memory, so whole configurations can be snapshotted.
class StrategyBox {
public:
    StrategyBox() = default;
    explicit StrategyBox(std::unique_ptr<ByzantineStrategy> s);
    StrategyBox(const StrategyBox& other);
    StrategyBox& operator=(const StrategyBox& other);
    StrategyBox(StrategyBox&&) noexcept;
    StrategyBox& operator=(StrategyBox&&) noexcept;
    ~StrategyBox();

    explicit operator bool() const { return static_cast<bool>(ptr_); }
    ByzantineStrategy& operator*() const { return *ptr_; }
    ByzantineStrategy* operator->() const { return ptr_.get(); }

private:
    std::unique_ptr<ByzantineStrategy> ptr_;
};

struct AgentSlot {
    AgentId id;
    NodeIndex location = 0;
    AgentState state;               // good agents only
    std::optional<Port> incoming;   // port of arrival, none after a WAIT
    bool dormant = false;
    std::optional<Round> wake_round;  // first active round if scheduled; visits can wake earlier
    bool started = false;            // has executed at least one round
    bool woken_by_visit = false;
    StrategyBox byzantine;           // empty for good agents

    bool good() const { return !byzantine; }
};

/// Full simulator state between rounds. Agents are kept sorted by id.
struct Configuration {
    std::shared_ptr<const PortGraph> graph;
    Parameters params;
    std::vector<AgentSlot> agents;
    Round round = 1;  // the next round to execute

    std::size_t good_count() const;
    const AgentSlot* find(AgentId id) const;
};

}  // namespace pgather
