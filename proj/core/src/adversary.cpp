#include "pgather/adversary.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace pgather {

StrategyBox::StrategyBox(std::unique_ptr<ByzantineStrategy> s) : ptr_(std::move(s)) {}
StrategyBox::StrategyBox(const StrategyBox& other) : ptr_(other.ptr_ ? other.ptr_->clone() : nullptr) {}
StrategyBox& StrategyBox::operator=(const StrategyBox& other) {
    if (this != &other) {
        ptr_ = other.ptr_ ? other.ptr_->clone() : nullptr;
    }
    return *this;
}
StrategyBox::StrategyBox(StrategyBox&&) noexcept = default;
StrategyBox& StrategyBox::operator=(StrategyBox&&) noexcept = default;
StrategyBox::~StrategyBox() = default;

std::size_t Configuration::good_count() const {
    return static_cast<std::size_t>(std::count_if(agents.begin(), agents.end(), [](const AgentSlot& a) { return a.good(); }));
}

const AgentSlot* Configuration::find(AgentId id) const {
    const auto it = std::lower_bound(agents.begin(), agents.end(), id,
                                     [](const AgentSlot& a, AgentId x) { return a.id < x; });
    return it != agents.end() && it->id == id ? &*it : nullptr;
}

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max();

std::vector<int> distances_from(const PortGraph& g, NodeIndex from) {
    std::vector<int> dist(g.node_count(), kUnreachable);
    std::queue<NodeIndex> q;
    dist[from] = 0;
    q.push(from);
    while (!q.empty()) {
        const auto v = q.front();
        q.pop();
        for (Port p = 1; p <= g.degree(v); ++p) {
            const auto to = g.follow(v, p).to;
            if (dist[to] == kUnreachable) {
                dist[to] = dist[v] + 1;
                q.push(to);
            }
        }
    }
    return dist;
}

/// Smallest port on a shortest path from `from` to `to`; WAIT if already there.
Action step_toward(const PortGraph& g, NodeIndex from, NodeIndex to) {
    if (from == to) {
        return Action::wait();
    }
    const auto dist = distances_from(g, to);
    for (Port p = 1; p <= g.degree(from); ++p) {
        if (dist[g.follow(from, p).to] == dist[from] - 1) {
            return Action::move(p);
        }
    }
    return Action::wait();
}

bool trusts_me(const AgentSlot& good, AgentId me, std::int64_t tau) {
    const auto row = good.state.t_wit.find(good.id);
    if (row == good.state.t_wit.end()) {
        return true;
    }
    const auto it = row->second.find(me);
    return it == row->second.end() || it->second >= tau;
}

/// Nearest active good agent satisfying `pred`, ties to the smaller id.
template <typename Pred>
std::optional<std::size_t> nearest_good(const Configuration& c, std::size_t self, Pred pred) {
    const auto dist = distances_from(*c.graph, c.agents[self].location);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < c.agents.size(); ++i) {
        const auto& a = c.agents[i];
        if (!a.good() || a.dormant || !pred(a)) {
            continue;
        }
        if (!best || dist[a.location] < dist[c.agents[*best].location]) {
            best = i;
        }
    }
    return best;
}

std::optional<std::size_t> slot_of(const Configuration& c, AgentId id) {
    for (std::size_t i = 0; i < c.agents.size(); ++i) {
        if (c.agents[i].id == id) return i;
    }
    return std::nullopt;
}

AgentState alone_state(AgentId self) {
    AgentState s = initial_state(self);
    s.group.insert(self);
    return s;
}

Action differing(Action planned, std::uint32_t degree) {
    if (planned.is_wait()) {
        return degree > 0 ? Action::move(1) : Action::wait();
    }
    return Action::wait();
}

class Honest final : public ByzantineStrategy {
public:
    std::string name() const override { return "honest"; }
    std::unique_ptr<ByzantineStrategy> clone() const override { return std::make_unique<Honest>(*this); }

    AgentState announce(const AnnounceContext& ctx) override {
        if (!memory_) {
            memory_ = initial_state(ctx.config.agents[ctx.self].id);
        }
        return *memory_;
    }

    Action act(const ActContext& ctx) override {
        const auto& me = ctx.config.agents[ctx.self];
        auto result = agent_round(me.id, ObservedSnapshot{ctx.here, me.incoming}, ctx.config.params);
        memory_ = std::move(result.state);
        return result.action;
    }

private:
    std::optional<AgentState> memory_;
};

/// Shared chase-mimic-leave machinery for the lure and the mediated bridge
/// role. Subclasses only choose whom to shadow.
class Mimic : public ByzantineStrategy {
public:
    explicit Mimic(std::int64_t dwell) : dwell_(dwell) {}

    AgentState announce(const AnnounceContext& ctx) override {
        const auto& c = ctx.config;
        const auto& me = c.agents[ctx.self];
        target_ = choose_target(ctx.config, ctx.self);
        if (target_) {
            const auto& t = c.agents[*target_];
            if (t.location == me.location) {
                return t.state;
            }
        }
        return alone_state(me.id);
    }

    Action act(const ActContext& ctx) override {
        const auto& c = ctx.config;
        const auto& me = c.agents[ctx.self];
        if (!target_) {
            return Action::wait();
        }
        const auto& t = c.agents[*target_];
        if (t.location != me.location) {
            return step_toward(*c.graph, me.location, t.location);
        }
        const Action follow = ctx.planned[*target_].value_or(Action::wait());
        if (t.state.group.contains(me.id)) {
            ++rounds_inside_;
        }
        if (rounds_inside_ > dwell_) {
            rounds_inside_ = 0;
            departed_from_ = t.id;
            return differing(follow, ctx.here.degree());
        }
        return follow;
    }

protected:
    virtual std::optional<std::size_t> choose_target(const Configuration& c, std::size_t self) = 0;

    std::int64_t dwell_;
    std::int64_t rounds_inside_ = 0;
    std::optional<AgentId> departed_from_;
    std::optional<std::size_t> target_;
};

class MinIdLure final : public Mimic {
public:
    using Mimic::Mimic;
    std::string name() const override { return "min_id_lure"; }
    std::unique_ptr<ByzantineStrategy> clone() const override { return std::make_unique<MinIdLure>(*this); }

protected:
    std::optional<std::size_t> choose_target(const Configuration& c, std::size_t self) override {
        const auto me = c.agents[self].id;
        const auto tau = c.params.tau;
        if (target_) {
            const auto& t = c.agents[*target_];
            if (!t.dormant && (t.state.group.contains(me) || trusts_me(t, me, tau))) {
                return target_;
            }
        }
        auto pick = nearest_good(c, self, [&](const AgentSlot& a) { return trusts_me(a, me, tau); });
        return pick ? pick : nearest_good(c, self, [](const AgentSlot&) { return true; });
    }
};

LieField rotate_field(Round r, std::int64_t period) {
    static constexpr LieField order[] = {LieField::group, LieField::num_round, LieField::seed, LieField::t_wit};
    return order[static_cast<std::size_t>((r / period) % 4)];
}

class Liar final : public ByzantineStrategy {
public:
    Liar(LieField field, std::int64_t period) : field_(field), period_(std::max<std::int64_t>(1, period)) {}
    std::string name() const override { return "liar"; }
    std::unique_ptr<ByzantineStrategy> clone() const override { return std::make_unique<Liar>(*this); }

    AgentState announce(const AnnounceContext& ctx) override {
        const auto& c = ctx.config;
        const auto& me = c.agents[ctx.self];
        if (!target_ || c.agents[*target_].dormant) {
            target_ = nearest_good(c, ctx.self, [](const AgentSlot&) { return true; });
        }
        if (!target_ || c.agents[*target_].location != me.location) {
            return alone_state(me.id);
        }
        AgentState s = c.agents[*target_].state;
        if (c.round % period_ == 0) {
            const auto field = field_ == LieField::rotate ? rotate_field(c.round, period_) : field_;
            falsify(s, field, me.id, c.params);
        }
        return s;
    }

    Action act(const ActContext& ctx) override {
        const auto& c = ctx.config;
        const auto& me = c.agents[ctx.self];
        if (!target_) {
            return Action::wait();
        }
        const auto& t = c.agents[*target_];
        if (t.location != me.location) {
            return step_toward(*c.graph, me.location, t.location);
        }
        return ctx.planned[*target_].value_or(Action::wait());
    }

private:
    static void falsify(AgentState& s, LieField field, AgentId me, const Parameters& p) {
        switch (field) {
            case LieField::group:
                if (!s.group.erase(me)) s.group.insert(me);
                break;
            case LieField::num_round:
                s.num_round = (s.num_round + 1) % p.modulus;
                break;
            case LieField::seed:
                s.seed = AgentId{s.seed.value == me.value ? me.value + 1 : me.value};
                break;
            case LieField::t_wit:
            case LieField::rotate: {
                auto& row = s.t_wit[me];
                if (!row.erase(me)) row[me] = 1;
                break;
            }
        }
    }

    LieField field_;
    std::int64_t period_;
    std::optional<std::size_t> target_;
};

class Bridge final : public Mimic {
public:
    Bridge(AgentId partner, BridgeRole role, std::int64_t dwell) : Mimic(dwell), partner_(partner), role_(role) {}
    std::string name() const override { return "bridge"; }
    std::unique_ptr<ByzantineStrategy> clone() const override { return std::make_unique<Bridge>(*this); }

    Action act(const ActContext& ctx) override {
        if (resolved(ctx.config, ctx.self) != BridgeRole::mediator) {
            return Mimic::act(ctx);
        }
        const auto& c = ctx.config;
        const auto& me = c.agents[ctx.self];
        if (!target_) {
            return Action::wait();
        }
        const auto& t = c.agents[*target_];
        if (t.location != me.location) {
            return step_toward(*c.graph, me.location, t.location);
        }
        return ctx.planned[*target_].value_or(Action::wait());
    }

protected:
    std::optional<std::size_t> choose_target(const Configuration& c, std::size_t self) override {
        const auto me = c.agents[self].id;
        const auto tau = c.params.tau;
        const auto role = resolved(c, self);
        if (role == BridgeRole::mediated) {
            // Shadow whichever good agent currently counts the mediator in its group.
            const auto partner = *slot_of(c, partner_);
            const auto ploc = c.agents[partner].location;
            for (std::size_t i = 0; i < c.agents.size(); ++i) {
                const auto& a = c.agents[i];
                if (a.good() && !a.dormant && a.location == ploc && a.state.group.contains(partner_)) {
                    return i;
                }
            }
        }
        if (target_) {
            const auto& t = c.agents[*target_];
            if (!t.dormant && (t.state.group.contains(me) || trusts_me(t, me, tau))) {
                return target_;
            }
        }
        auto pick = nearest_good(c, self, [&](const AgentSlot& a) { return trusts_me(a, me, tau); });
        return pick ? pick : nearest_good(c, self, [](const AgentSlot&) { return true; });
    }

private:
    BridgeRole resolved(const Configuration& c, std::size_t self) const {
        const auto partner = slot_of(c, partner_);
        if (!partner || c.agents[*partner].good() || partner_ == c.agents[self].id) {
            return BridgeRole::automatic;  // no partner: plain lure
        }
        if (role_ != BridgeRole::automatic) {
            return role_;
        }
        return c.agents[self].id < partner_ ? BridgeRole::mediated : BridgeRole::mediator;
    }

    AgentId partner_;
    BridgeRole role_;
};

std::int64_t int_param(const StrategyParams& params, const std::string& key, std::int64_t fallback) {
    const auto it = params.find(key);
    if (it == params.end()) {
        return fallback;
    }
    try {
        std::size_t used = 0;
        const auto v = std::stoll(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("strategy parameter '" + key + "' must be an integer, got '" + it->second + "'");
    }
}

}  // namespace

std::unique_ptr<ByzantineStrategy> strategy_honest() { return std::make_unique<Honest>(); }

std::unique_ptr<ByzantineStrategy> strategy_min_id_lure(std::int64_t dwell) {
    return std::make_unique<MinIdLure>(dwell);
}

std::unique_ptr<ByzantineStrategy> strategy_liar(LieField field, std::int64_t period) {
    return std::make_unique<Liar>(field, period);
}

std::unique_ptr<ByzantineStrategy> strategy_bridge(AgentId partner, BridgeRole role, std::int64_t dwell) {
    return std::make_unique<Bridge>(partner, role, dwell);
}

std::unique_ptr<ByzantineStrategy> make_strategy(const std::string& name, const StrategyParams& params) {
    auto known = [&](std::initializer_list<const char*> keys) {
        for (const auto& [k, v] : params) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; })) {
                throw ConfigError("strategy '" + name + "' has no parameter '" + k + "'");
            }
        }
    };
    if (name == "honest") {
        known({});
        return strategy_honest();
    }
    if (name == "min_id_lure") {
        known({"dwell"});
        return strategy_min_id_lure(int_param(params, "dwell", 2));
    }
    if (name == "liar") {
        known({"field", "period"});
        LieField field = LieField::rotate;
        if (auto it = params.find("field"); it != params.end()) {
            const auto& f = it->second;
            if (f == "R") field = LieField::group;
            else if (f == "numRound") field = LieField::num_round;
            else if (f == "seed") field = LieField::seed;
            else if (f == "T_wit") field = LieField::t_wit;
            else if (f == "rotate") field = LieField::rotate;
            else throw ConfigError("liar field must be R, numRound, seed, T_wit or rotate");
        }
        const auto period = int_param(params, "period", 3);
        if (period < 1) throw ConfigError("liar period must be positive");
        return strategy_liar(field, period);
    }
    if (name == "bridge") {
        known({"partner", "role", "dwell"});
        const auto partner = int_param(params, "partner", 0);
        if (partner < 0) throw ConfigError("bridge partner must be an agent id");
        BridgeRole role = BridgeRole::automatic;
        if (auto it = params.find("role"); it != params.end()) {
            if (it->second == "mediator") role = BridgeRole::mediator;
            else if (it->second == "mediated") role = BridgeRole::mediated;
            else if (it->second != "auto") throw ConfigError("bridge role must be mediator, mediated or auto");
        }
        return strategy_bridge(AgentId{static_cast<std::uint32_t>(partner)}, role, int_param(params, "dwell", 2));
    }
    throw ConfigError("unknown strategy '" + name + "'");
}

}  // namespace pgather
