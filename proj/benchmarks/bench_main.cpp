#include <benchmark/benchmark.h>

#include "pgather/certificates.hpp"
#include "pgather/engine.hpp"
#include "pgather/harness.hpp"

namespace {

const pgather::CertificateBundle& certs() {
    static const auto bundle = pgather::certify_box(pgather::GraphFamily::bundled(), 6, 8);
    return bundle;
}

pgather::Scenario five_agents() {
    pgather::Scenario s;
    s.name = "bench";
    s.graph = {"ring", 6, ""};
    s.bounds = {6, 5, 2, 2};
    auto agent = [](std::uint32_t id, pgather::NodeIndex at) {
        pgather::AgentSpec a;
        a.id = pgather::AgentId{id};
        a.start = at;
        return a;
    };
    s.agents = {agent(1, 0), agent(2, 2), agent(3, 4), agent(5, 1), agent(8, 5)};
    s.agents[3].byzantine = pgather::ByzantineSpec{"liar", {}};
    s.agents[4].byzantine = pgather::ByzantineSpec{"min_id_lure", {}};
    s.initial_state = {pgather::InitialStateSpec::Mode::arbitrary, 1, ""};
    return s;
}

void BM_AgentRound(benchmark::State& state) {
    using namespace pgather;
    const auto params = Parameters::make({6, 5, 2, 2}, 6, 5, 2, certs().schedule);
    std::vector<std::pair<AgentId, AgentState>> here;
    for (std::uint32_t i = 1; i <= static_cast<std::uint32_t>(state.range(0)); ++i) {
        AgentState s = initial_state(AgentId{i});
        s.num_round = 17;
        here.emplace_back(AgentId{i}, s);
    }
    const auto view = NodeView::owning(3, std::move(here));
    for (auto _ : state) {
        benchmark::DoNotOptimize(agent_round(AgentId{1}, {view, std::nullopt}, params));
    }
}
BENCHMARK(BM_AgentRound)->Arg(1)->Arg(3)->Arg(5);

void BM_EngineStep(benchmark::State& state) {
    const auto s = five_agents();
    auto config = pgather::build_configuration(s, pgather::resolve_graph(s),
                                               pgather::resolve_parameters(s, certs(), false));
    pgather::TraceRecord rec;
    for (auto _ : state) {
        pgather::step_in_place(config, &rec);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EngineStep);

void BM_FullRun(benchmark::State& state) {
    const auto s = five_agents();
    for (auto _ : state) {
        benchmark::DoNotOptimize(pgather::run_scenario(s, certs()));
    }
}
BENCHMARK(BM_FullRun)->Unit(benchmark::kMillisecond);

void BM_CertifyBundled(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(pgather::certify_box(pgather::GraphFamily::bundled(), 6, 8));
    }
}
BENCHMARK(BM_CertifyBundled)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
