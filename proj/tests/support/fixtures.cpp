#include "fixtures.hpp"

namespace pgather::testing {

const CertificateBundle& bundled_certs() {
    static const CertificateBundle bundle = certify_box(GraphFamily::bundled(), 6, 8);
    return bundle;
}

Parameters bare_params(std::int64_t tau, std::int64_t modulus, std::uint32_t K, bool cap) {
    Parameters p;
    p.bounds = Bounds{6, K, 1, 2};
    p.tau = tau;
    p.modulus = modulus;
    p.cap_twit = cap;
    return p;
}

Parameters bundled_params(Bounds bounds, std::uint32_t n, std::uint32_t k, std::uint32_t f, bool cap) {
    return Parameters::make(bounds, n, k, f, bundled_certs().schedule, cap);
}

AgentSpec good(std::uint32_t id, NodeIndex start) {
    AgentSpec a;
    a.id = AgentId{id};
    a.start = start;
    return a;
}

AgentSpec byzantine(std::uint32_t id, NodeIndex start, std::string strategy, StrategyParams params) {
    AgentSpec a = good(id, start);
    a.byzantine = ByzantineSpec{std::move(strategy), std::move(params)};
    return a;
}

Scenario make_scenario(std::string name, std::string generator, std::size_t size, Bounds bounds,
                       std::vector<AgentSpec> agents) {
    Scenario s;
    s.name = std::move(name);
    s.graph.generator = std::move(generator);
    s.graph.size = size;
    s.bounds = bounds;
    s.agents = std::move(agents);
    return s;
}

RunOutcome run_bundled(Scenario s, const RunOptions& options) {
    return run_scenario(std::move(s), bundled_certs(), options);
}

Configuration configure(const Scenario& s, bool cap) {
    return build_configuration(s, resolve_graph(s), resolve_parameters(s, bundled_certs(), cap));
}

const AgentRecord& record_of(const TraceRecord& rec, std::uint32_t id) {
    for (const auto& a : rec.agents) {
        if (a.id.value == id) return a;
    }
    throw std::out_of_range("no agent " + std::to_string(id) + " in record");
}

std::filesystem::path source_dir() { return PGATHER_SOURCE_DIR; }

std::filesystem::path scenario_path(const std::string& name) {
    return source_dir() / "scenarios" / (name + ".json");
}

}  // namespace pgather::testing
