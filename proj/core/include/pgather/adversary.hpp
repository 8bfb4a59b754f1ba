#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "pgather/world.hpp"

namespace pgather {

/// Read-only inputs for the announcement phase of a round.
struct AnnounceContext {
    const Configuration& config;
    std::size_t self;  // slot index
};

/// Inputs for the movement phase, after every snapshot is fixed and every
/// good agent's action for this round is known.
struct ActContext {
    const Configuration& config;
    std::size_t self;
    const NodeView& here;
    std::span<const std::optional<Action>> planned;  // by slot index, good agents only
};

/// A weakly Byzantine behaviour. Strategies see the whole configuration but
/// can only choose an announced state and a move; the engine attaches the
/// authentic id and shows one announcement to every co-located observer.
class ByzantineStrategy {
public:
    virtual ~ByzantineStrategy() = default;
    virtual std::string name() const = 0;
    virtual std::unique_ptr<ByzantineStrategy> clone() const = 0;
    virtual AgentState announce(const AnnounceContext& ctx) = 0;
    virtual Action act(const ActContext& ctx) = 0;
};

using StrategyParams = std::map<std::string, std::string>;

/// Runs the real protocol; the control case.
std::unique_ptr<ByzantineStrategy> strategy_honest();

/// Joins a trusting good group by mimicking it, stays for `dwell` rounds,
/// then leaves and hunts the next group that trusts it again.
std::unique_ptr<ByzantineStrategy> strategy_min_id_lure(std::int64_t dwell = 2);

enum class LieField { group, num_round, seed, t_wit, rotate };

/// Shadows a good agent and mimics it, except every `period` rounds it
/// falsifies one field of its announcement.
std::unique_ptr<ByzantineStrategy> strategy_liar(LieField field = LieField::rotate, std::int64_t period = 3);

/// Two cooperating agents: the mediator embeds in a victim group, the
/// mediated one joins through it and departs after `dwell` rounds. Without
/// the partner present this behaves like strategy_min_id_lure.
enum class BridgeRole { automatic, mediator, mediated };
std::unique_ptr<ByzantineStrategy> strategy_bridge(AgentId partner, BridgeRole role = BridgeRole::automatic,
                                                   std::int64_t dwell = 2);

/// Builds a strategy from its scenario name and string parameters. Throws
/// ConfigError on unknown names or malformed parameters.
std::unique_ptr<ByzantineStrategy> make_strategy(const std::string& name, const StrategyParams& params);

}  // namespace pgather
