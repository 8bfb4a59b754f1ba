#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pgather/engine.hpp"

namespace pgather {
namespace {

using namespace pgather::testing;

class AlwaysWait final : public ByzantineStrategy {
public:
    std::string name() const override { return "always_wait"; }
    std::unique_ptr<ByzantineStrategy> clone() const override { return std::make_unique<AlwaysWait>(*this); }
    AgentState announce(const AnnounceContext& ctx) override { return initial_state(ctx.config.agents[ctx.self].id); }
    Action act(const ActContext&) override { return Action::wait(); }
};

class AlwaysPortOne final : public ByzantineStrategy {
public:
    std::string name() const override { return "port_one"; }
    std::unique_ptr<ByzantineStrategy> clone() const override { return std::make_unique<AlwaysPortOne>(*this); }
    AgentState announce(const AnnounceContext& ctx) override { return initial_state(ctx.config.agents[ctx.self].id); }
    Action act(const ActContext&) override { return Action::move(1); }
};

class BadPort final : public ByzantineStrategy {
public:
    std::string name() const override { return "bad_port"; }
    std::unique_ptr<ByzantineStrategy> clone() const override { return std::make_unique<BadPort>(*this); }
    AgentState announce(const AnnounceContext& ctx) override { return initial_state(ctx.config.agents[ctx.self].id); }
    Action act(const ActContext&) override { return Action::move(7); }
};

std::int64_t waiting_round(const RenSchedule& s, std::uint32_t label) {
    for (std::int64_t t = 0; t < s.period(); ++t) {
        if (!s.explores(label, t + 1)) return t;
    }
    throw std::logic_error("schedule never waits");
}

TEST(Step, AllWaitKeepsLocations) {
    auto s = make_scenario("wait", "ring", 4, Bounds{6, 2, 1, 2}, {good(2, 1), byzantine(1, 3, "honest")});
    auto c = configure(s);
    c.agents[0].byzantine = StrategyBox(std::make_unique<AlwaysWait>());
    c.agents[1].state.num_round = waiting_round(*c.params.schedule, 2);
    c.agents[1].state.group = {AgentId{2}};
    const auto before = c;
    const auto after = step(c);
    EXPECT_EQ(after.round, before.round + 1);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(after.agents[i].location, before.agents[i].location);
}

TEST(Step, OppositeTraversalSwapsWithoutMeeting) {
    auto s = make_scenario("swap2", "line", 4, Bounds{6, 3, 2, 2},
                           {good(2, 3), byzantine(1, 0, "honest"), byzantine(3, 1, "honest")});
    auto c = configure(s);
    c.agents[0].byzantine = StrategyBox(std::make_unique<AlwaysPortOne>());  // 0 -> 1
    c.agents[2].byzantine = StrategyBox(std::make_unique<AlwaysPortOne>());  // 1 -> 0 (port 1 of node 1)
    ASSERT_EQ(c.graph->follow(1, 1).to, 0U);
    TraceRecord rec;
    step_in_place(c, &rec);
    EXPECT_EQ(c.agents[0].location, 1U);
    EXPECT_EQ(c.agents[2].location, 0U);
    EXPECT_NE(c.agents[0].location, c.agents[2].location);
}

TEST(Step, VisitWakesDormantAgentIntoInitialState) {
    auto s = make_scenario("wake", "ring", 4, Bounds{6, 2, 0, 2}, {good(1, 0), good(2, 2)});
    s.agents[1].wake = WakeSpec{WakeSpec::Kind::on_visit, 0};
    s.initial_state = {InitialStateSpec::Mode::arbitrary, 11, ""};
    auto c = configure(s);
    ASSERT_TRUE(c.agents[1].dormant);
    std::optional<Round> woke;
    for (int i = 0; i < 400 && !woke; ++i) {
        TraceRecord rec;
        const bool was_dormant = c.agents[1].dormant;
        const bool met = c.agents[0].location == c.agents[1].location;
        step_in_place(c, &rec);
        if (was_dormant && !record_of(rec, 2).active) {
            EXPECT_EQ(c.agents[1].dormant, true);
            if (met) EXPECT_EQ(c.agents[1].wake_round, rec.round + 1);
        }
        if (record_of(rec, 2).active) {
            woke = rec.round;
            EXPECT_EQ(record_of(rec, 2).wake, WakeEvent::visited);
            for (const auto& [owner, row] : c.agents[1].state.t_wit) {
                for (const auto& [key, value] : row) {
                    EXPECT_TRUE(key == AgentId{1} || key == AgentId{2});
                }
            }
        }
    }
    EXPECT_TRUE(woke.has_value());
}

TEST(Step, InvalidPortIsAStrategyBug) {
    auto s = make_scenario("bad", "ring", 4, Bounds{6, 2, 1, 2}, {good(2, 1), byzantine(1, 3, "honest")});
    auto c = configure(s);
    c.agents[0].byzantine = StrategyBox(std::make_unique<BadPort>());
    EXPECT_THROW(step_in_place(c), std::logic_error);
}

TEST(Run, HorizonZeroIsEmpty) {
    const auto s = make_scenario("z", "ring", 4, Bounds{6, 2, 0, 2}, {good(1, 0), good(2, 2)});
    EXPECT_TRUE(run(configure(s), 0).records.empty());
}

TEST(Run, DeterministicDigest) {
    auto s = make_scenario("d", "ring", 5, Bounds{6, 3, 1, 2},
                           {good(2, 0), good(3, 2), byzantine(1, 4, "min_id_lure")});
    s.initial_state = {InitialStateSpec::Mode::arbitrary, 42, ""};
    EXPECT_EQ(run(configure(s), 2000).digest(), run(configure(s), 2000).digest());
    auto other = s;
    other.initial_state.seed = 43;
    EXPECT_NE(run(configure(s), 2000).digest(), run(configure(other), 2000).digest());
}

TEST(Run, TwoGoodsOnRingGatherWithinBound) {
    const auto s = make_scenario("k2", "ring", 4, Bounds{6, 2, 0, 2}, {good(1, 0), good(2, 2)});
    const auto out = run_bundled(s);
    ASSERT_TRUE(out.convergence.has_value());
    EXPECT_LE(*out.convergence, 2 * out.trace.tau + 1);
    EXPECT_TRUE(out.report.ok());
}

TEST(Corruption, ValidStatesEquivalentToCleanStart) {
    const auto s = make_scenario("c", "ring", 4, Bounds{6, 2, 0, 2}, {good(1, 0), good(2, 2)});
    auto a = configure(s);
    auto b = configure(s);
    for (auto& slot : b.agents) slot.state = sanitize(slot.state, b.params);
    EXPECT_EQ(run(a, 500).digest(), run(b, 500).digest());
}

TEST(Corruption, MutualDistrustStillGathers) {
    auto s = make_scenario("m", "ring", 4, Bounds{6, 3, 1, 2},
                           {good(2, 1), good(3, 3), byzantine(1, 0, "min_id_lure")});
    const auto out = run_bundled(s, RunOptions{.crafted = "mutual_distrust"});
    EXPECT_TRUE(out.success()) << out.summary();
    auto c = configure(s);
    inject_crafted(c, CraftedCase::mutual_distrust);
    EXPECT_EQ(c.agents[1].state.t_wit.at(AgentId{2}).at(AgentId{3}), 1);
    EXPECT_EQ(c.agents[2].state.t_wit.at(AgentId{3}).at(AgentId{2}), 1);
}

TEST(Corruption, FabricatedAbsentIdOnlyAffectsEarlyRounds) {
    auto s = make_scenario("f", "ring", 4, Bounds{6, 3, 1, 2}, {good(2, 1), good(3, 3), byzantine(1, 0, "honest")});
    auto c = configure(s);
    c.agents[1].state.group = {AgentId{2}, AgentId{7}};
    c.agents[1].state.t_wit[AgentId{2}][AgentId{7}] = 4;
    const auto t = run(c, 2 * 3420 + 400);
    std::optional<Round> last_mention;
    for (const auto& rec : t.records) {
        const auto& a = record_of(rec, 2);
        if (std::find(a.anomalies.begin(), a.anomalies.end(), AgentId{7}) != a.anomalies.end()) last_mention = rec.round;
    }
    ASSERT_TRUE(last_mention.has_value());
    EXPECT_EQ(*last_mention, 1);
    const auto clean = run(configure(s), 2 * 3420 + 400);
    EXPECT_TRUE(detect_perpetual_gathering(t, t.modulus).has_value());
    EXPECT_LE(*detect_perpetual_gathering(t, t.modulus), 2 * t.tau + 1);
    EXPECT_TRUE(check_invariants(t).ok());
    EXPECT_TRUE(detect_perpetual_gathering(clean, clean.modulus).has_value());
}

TEST(Corruption, ArbitraryStatesAreSanitizedOnFirstRound) {
    auto s = make_scenario("a", "ring", 4, Bounds{6, 3, 1, 2}, {good(2, 1), good(3, 3), byzantine(1, 0, "honest")});
    auto c = configure(s);
    inject_arbitrary(c, 9);
    step_in_place(c);
    for (const auto& a : c.agents) {
        if (!a.good()) continue;
        EXPECT_GE(a.state.num_round, 0);
        EXPECT_LT(a.state.num_round, c.params.modulus);
        for (const auto& [owner, row] : a.state.t_wit) {
            for (const auto& [key, value] : row) {
                EXPECT_GE(value, 1);
                EXPECT_LE(value, c.params.tau);
            }
        }
    }
}

TEST(ConfigValidate, RejectsBadPlacements) {
    auto s = make_scenario("v", "ring", 4, Bounds{6, 2, 0, 2}, {good(1, 0), good(2, 2)});
    auto c = configure(s);
    c.agents[1].location = 9;
    EXPECT_THROW(validate(c), ConfigError);
    c = configure(s);
    c.agents[1].id = AgentId{1};
    EXPECT_THROW(validate(c), ConfigError);
    c = configure(s);
    for (auto& a : c.agents) a.dormant = true;
    EXPECT_THROW(validate(c), ConfigError);
}

}  // namespace
}  // namespace pgather
