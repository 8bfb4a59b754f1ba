#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pgather/analysis.hpp"

namespace pgather {
namespace {

using namespace pgather::testing;

// Two good agents (1, 2) and one Byzantine (9); `where` gives per-round locations.
Trace synthetic(const std::vector<std::pair<NodeIndex, NodeIndex>>& where, std::int64_t tau = 4,
                std::int64_t modulus = 3) {
    Trace t;
    t.goods = {AgentId{1}, AgentId{2}};
    t.n = 4;
    t.k = 3;
    t.f = 1;
    t.K = 3;
    t.tau = tau;
    t.modulus = modulus;
    Round r = 1;
    for (const auto& [a, b] : where) {
        TraceRecord rec;
        rec.round = r++;
        for (auto [id, loc, byz] : {std::tuple{1U, a, false}, std::tuple{2U, b, false}, std::tuple{9U, NodeIndex{3}, true}}) {
            AgentRecord ar;
            ar.id = AgentId{id};
            ar.active = true;
            ar.byzantine = byz;
            ar.location = loc;
            ar.seed = AgentId{1};
            rec.agents.push_back(ar);
        }
        t.records.push_back(std::move(rec));
    }
    return t;
}

TEST(Detect, GatheredFromRoundOne) {
    const auto t = synthetic(std::vector<std::pair<NodeIndex, NodeIndex>>(10, {0, 0}));
    EXPECT_EQ(detect_perpetual_gathering(t, 3), 1);
}

TEST(Detect, SplitForeverIsNone) {
    const auto t = synthetic(std::vector<std::pair<NodeIndex, NodeIndex>>(10, {0, 1}));
    EXPECT_FALSE(detect_perpetual_gathering(t, 3).has_value());
}

TEST(Detect, LastSplitDecides) {
    std::vector<std::pair<NodeIndex, NodeIndex>> w(12, {2, 2});
    w[0] = {0, 1};
    w[4] = {1, 0};
    EXPECT_EQ(detect_perpetual_gathering(synthetic(w), 3), 6);
    EXPECT_FALSE(detect_perpetual_gathering(synthetic(w), 7).has_value());
}

TEST(Detect, TailWindowPreconditions) {
    const auto t = synthetic(std::vector<std::pair<NodeIndex, NodeIndex>>(10, {0, 0}), 4, 3);
    EXPECT_THROW(detect_perpetual_gathering(t, 2), std::invalid_argument);
    EXPECT_THROW(detect_perpetual_gathering(t, 11), InsufficientHorizon);
}

TEST(Checkers, CleanSyntheticTracePasses) {
    const auto t = synthetic(std::vector<std::pair<NodeIndex, NodeIndex>>(10, {0, 0}));
    EXPECT_TRUE(check_invariants(t).ok());
}

TEST(Checkers, MeetingWindowCatchesLongSeparation) {
    std::vector<std::pair<NodeIndex, NodeIndex>> w(12, {0, 0});
    for (int i = 2; i < 8; ++i) w[i] = {0, 1};
    const auto report = check_invariants(synthetic(w, 4));
    ASSERT_TRUE(report.violated(Invariant::meeting_window));
    EXPECT_EQ(report.first.at(Invariant::meeting_window).round, 3);
    EXPECT_EQ(report.max_meeting_gap, 6);
}

TEST(Checkers, GoodDistrustCaughtFromRoundTwo) {
    auto t = synthetic(std::vector<std::pair<NodeIndex, NodeIndex>>(6, {0, 0}));
    t.records[0].agents[0].anomalies = {AgentId{2}};
    t.records[0].agents[0].own_row = {{AgentId{2}, 1}};
    EXPECT_FALSE(check_invariants(t).violated(Invariant::no_good_distrust));
    t.records[3].agents[0].anomalies = {AgentId{2}};
    const auto report = check_invariants(t);
    ASSERT_TRUE(report.violated(Invariant::no_good_distrust));
    EXPECT_EQ(report.first.at(Invariant::no_good_distrust).round, 4);
}

TEST(Checkers, UnequalTwitWhenCoLocated) {
    auto t = synthetic(std::vector<std::pair<NodeIndex, NodeIndex>>(6, {0, 0}));
    t.records[2].agents[1].t_wit_digest = 77;
    EXPECT_TRUE(check_invariants(t).violated(Invariant::equal_t_wit));
    t.records[2].agents[1].t_wit_digest = 0;
    t.records[2].agents[1].cg_digest = 5;
    EXPECT_TRUE(check_invariants(t).violated(Invariant::equal_confidence));
}

TEST(Checkers, GroupConsistency) {
    auto t = synthetic(std::vector<std::pair<NodeIndex, NodeIndex>>(6, {0, 0}));
    t.records[2].agents[0].group = {AgentId{1}, AgentId{2}};
    t.records[3].agents[0].anomalies = {AgentId{2}};
    const auto report = check_invariants(t);
    ASSERT_TRUE(report.violated(Invariant::group_consistency));
    EXPECT_EQ(report.first.at(Invariant::group_consistency).round, 4);
}

TEST(Checkers, TrustHealingTransitions) {
    auto t = synthetic(std::vector<std::pair<NodeIndex, NodeIndex>>(6, {0, 0}));
    t.records[1].agents[0].own_row = {{AgentId{9}, 1}};
    t.records[2].agents[0].own_row = {{AgentId{9}, 2}};
    t.records[3].agents[0].own_row = {{AgentId{9}, 3}};
    t.records[4].agents[0].own_row = {{AgentId{9}, 4}};
    EXPECT_FALSE(check_invariants(t).violated(Invariant::trust_healing));
    t.records[4].agents[0].own_row = {{AgentId{9}, 2}};
    EXPECT_TRUE(check_invariants(t).violated(Invariant::trust_healing));
    t.records[4].agents[0].own_row.clear();
    EXPECT_TRUE(check_invariants(t).violated(Invariant::trust_healing));
    t.records[4].agents[0].own_row = {{AgentId{9}, 1}};
    t.records[5].agents[0].own_row = {{AgentId{9}, 2}};
    EXPECT_FALSE(check_invariants(t).violated(Invariant::trust_healing));
}

TEST(Checkers, InterruptionWindow) {
    auto t = synthetic(std::vector<std::pair<NodeIndex, NodeIndex>>(30, {0, 0}), 20);
    EXPECT_EQ(interruption_bound(3, 1), 9);
    EXPECT_EQ(interruption_bound(2, 0), 1);
    for (std::size_t i = 1; i <= 10; ++i) t.records[i].agents[0].reset = true;
    const auto report = check_invariants(t);
    EXPECT_EQ(report.max_window_events, 10);
    EXPECT_TRUE(report.violated(Invariant::interruption_bound));
}

TEST(Checkers, RowCapOnlyWhenCapped) {
    auto t = synthetic(std::vector<std::pair<NodeIndex, NodeIndex>>(4, {0, 0}));
    t.records[1].agents[0].widest_row = 4;
    EXPECT_FALSE(check_invariants(t).violated(Invariant::row_cap));
    t.cap_twit = true;
    EXPECT_TRUE(check_invariants(t).violated(Invariant::row_cap));
}

TEST(RealRuns, HonestOnlyPassesEverything) {
    auto s = make_scenario("honest", "clique", 4, Bounds{6, 3, 1, 2},
                           {good(2, 0), good(3, 2), byzantine(1, 1, "honest")});
    s.initial_state = {InitialStateSpec::Mode::arbitrary, 7, ""};
    const auto out = run_bundled(s);
    EXPECT_TRUE(out.report.ok()) << out.summary();
    EXPECT_TRUE(out.converged_in_bound());
}

TEST(RealRuns, SkippingRoundConsensusBreaksGroupConsistency) {
    auto s = make_scenario("mut", "ring", 4, Bounds{6, 3, 1, 2},
                           {good(2, 1), good(3, 3), byzantine(1, 0, "min_id_lure")});
    bool caught = false;
    for (std::uint64_t seed = 1; seed <= 10 && !caught; ++seed) {
        RunOptions o;
        o.corrupt_seed = seed;
        o.mutation = Mutation::skip_numround_consensus;
        const auto out = run_bundled(s, o);
        if (out.report.violated(Invariant::group_consistency)) {
            caught = true;
            EXPECT_FALSE(out.report.first.at(Invariant::group_consistency).witness.empty());
        }
    }
    EXPECT_TRUE(caught);
}

TEST(Metrics, CsvColumns) {
    EXPECT_EQ(metrics_csv_header(), "scenario,n,k,f,tau,convergence_round,max_seed_changes_per_window,invariant_status");
    MetricsRow row{"x", 4, 3, 1, 3420, 12, 2, "pass"};
    EXPECT_EQ(to_csv(row), "x,4,3,1,3420,12,2,pass");
    row.convergence.reset();
    EXPECT_EQ(to_csv(row), "x,4,3,1,3420,none,2,pass");
}

}  // namespace
}  // namespace pgather
