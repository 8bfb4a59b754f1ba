#include "pgather/harness.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

namespace pgather {

std::string RunOutcome::summary() const {
    std::ostringstream out;
    out << scenario.name << ": n=" << trace.n << " k=" << trace.k << " f=" << trace.f << " tau=" << trace.tau
        << " rounds=" << trace.records.size() << " convergence="
        << (convergence ? std::to_string(*convergence) : std::string("none")) << " bound=" << bound
        << " max_window_events=" << report.max_window_events << "/" << report.window_bound;
    if (auto v = report.earliest()) {
        out << " VIOLATION " << to_string(v->which) << " at round " << v->round << ": " << v->witness;
    }
    return out.str();
}

GraphFamily resolve_family(const Scenario& s) {
    auto family = GraphFamily::parse(s.family);
    if (s.family_hash && *s.family_hash != family.hash()) {
        throw CertificateError("stale family hash in scenario: pinned " + *s.family_hash + " but '" + s.family +
                               "' now hashes to " + family.hash() + "; re-certify and update the scenario");
    }
    return family;
}

std::shared_ptr<const PortGraph> resolve_graph(const Scenario& s) {
    const auto& g = s.graph;
    if (g.generator == "file") {
        auto path = std::filesystem::path(g.file);
        if (path.is_relative()) path = s.base_dir / path;
        return std::make_shared<const PortGraph>(load_graph_file(path.string()));
    }
    if (g.generator == "ring") return std::make_shared<const PortGraph>(make_ring(g.size));
    if (g.generator == "line") return std::make_shared<const PortGraph>(make_line(g.size));
    if (g.generator == "star") return std::make_shared<const PortGraph>(make_star(g.size));
    if (g.generator == "clique") return std::make_shared<const PortGraph>(make_clique(g.size));
    throw ConfigError("unknown graph generator '" + g.generator + "'");
}

Parameters resolve_parameters(const Scenario& s, const CertificateBundle& certs, bool cap_twit) {
    const auto graph = resolve_graph(s);
    const auto family = resolve_family(s);
    if (certs.exploration.family_hash != family.hash()) {
        throw CertificateError("certificates were issued for another family");
    }
    if (graph->node_count() > certs.exploration.max_nodes) {
        throw ConfigError("graph has " + std::to_string(graph->node_count()) + " nodes, beyond the certified N=" +
                          std::to_string(certs.exploration.max_nodes));
    }
    if (!family.contains(*graph)) {
        throw ConfigError("graph is not a member of the certified family '" + family.description() + "'");
    }
    const auto k = static_cast<std::uint32_t>(s.agents.size());
    const auto f = static_cast<std::uint32_t>(
        std::count_if(s.agents.begin(), s.agents.end(), [](const AgentSpec& a) { return a.byzantine.has_value(); }));
    return Parameters::make(s.bounds, static_cast<std::uint32_t>(graph->node_count()), k, f, certs.schedule,
                            cap_twit || s.cap_twit);
}

Configuration build_configuration(const Scenario& s, std::shared_ptr<const PortGraph> graph, Parameters params) {
    Configuration c;
    c.graph = std::move(graph);
    c.params = std::move(params);
    for (const auto& a : s.agents) {
        AgentSlot slot;
        slot.id = a.id;
        slot.location = a.start;
        slot.state = initial_state(a.id);
        if (a.byzantine) {
            slot.byzantine = StrategyBox(make_strategy(a.byzantine->strategy, a.byzantine->params));
        }
        switch (a.wake.kind) {
            case WakeSpec::Kind::start: break;
            case WakeSpec::Kind::delay:
                slot.dormant = a.wake.delay > 0;
                if (slot.dormant) slot.wake_round = a.wake.delay + 1;
                break;
            case WakeSpec::Kind::on_visit: slot.dormant = true; break;
        }
        c.agents.push_back(std::move(slot));
    }
    std::sort(c.agents.begin(), c.agents.end(), [](const AgentSlot& x, const AgentSlot& y) { return x.id < y.id; });
    switch (s.initial_state.mode) {
        case InitialStateSpec::Mode::clean: break;
        case InitialStateSpec::Mode::arbitrary: inject_arbitrary(c, s.initial_state.seed); break;
        case InitialStateSpec::Mode::crafted: inject_crafted(c, parse_crafted(s.initial_state.crafted)); break;
    }
    validate(c);
    return c;
}

Round default_horizon(const Parameters& p) { return 3 * p.tau + 1 + 2 * p.modulus; }

RunOutcome run_scenario(Scenario s, const CertificateBundle& certs, const RunOptions& options) {
    if (options.corrupt_seed) {
        s.initial_state = {InitialStateSpec::Mode::arbitrary, *options.corrupt_seed, ""};
    }
    if (options.crafted) {
        s.initial_state = {InitialStateSpec::Mode::crafted, 0, *options.crafted};
    }
    if (options.cap_twit) s.cap_twit = true;
    if (options.horizon) s.horizon = options.horizon;
    auto params = resolve_parameters(s, certs, s.cap_twit);
    params.mutation = options.mutation;
    if (options.wake_schedule) apply_wake_schedule(s, *options.wake_schedule, params.tau);
    for (const auto& a : s.agents) {
        if (a.wake.kind == WakeSpec::Kind::delay && a.wake.delay > params.tau) {
            throw ConfigError("agent " + std::to_string(a.id.value) + " wakes after " + std::to_string(a.wake.delay) +
                              " rounds, beyond tau=" + std::to_string(params.tau));
        }
    }

    RunOutcome out;
    auto config = build_configuration(s, resolve_graph(s), params);
    const bool staggered = std::any_of(config.agents.begin(), config.agents.end(),
                                       [](const AgentSlot& a) { return a.dormant; });
    out.bound = (staggered ? 3 : 2) * params.tau + 1;
    const Round horizon = s.horizon.value_or(default_horizon(params));
    out.trace = run(std::move(config), horizon);
    try {
        out.convergence = detect_perpetual_gathering(out.trace, params.modulus);
    } catch (const InsufficientHorizon&) {
        out.convergence.reset();
    }
    out.report = check_invariants(out.trace);
    out.metrics = MetricsRow{s.name,
                             params.n,
                             params.k,
                             params.f,
                             params.tau,
                             out.convergence,
                             out.report.max_window_events,
                             out.report.ok() ? (out.converged_in_bound() ? "pass" : "not_converged")
                                             : "violation:" + to_string(out.report.earliest()->which)};
    out.scenario = std::move(s);
    return out;
}

std::vector<RunOutcome> run_batch(const Scenario& scenario, const CertificateBundle& certs, RunOptions options,
                                  const std::vector<std::uint64_t>& seeds, unsigned workers) {
    std::vector<RunOutcome> results(seeds.size());
    if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, seeds.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(seeds.size());
    auto work = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            try {
                RunOptions o = options;
                o.corrupt_seed = seeds[i];
                results[i] = run_scenario(scenario, certs, o);
                results[i].metrics.scenario += "#seed" + std::to_string(seeds[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    try {
        if (const auto dots = text.find(".."); dots != std::string::npos) {
            const auto lo = std::stoull(text.substr(0, dots));
            const auto hi = std::stoull(text.substr(dots + 2));
            if (hi < lo) throw ConfigError("empty seed range '" + text + "'");
            for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
        } else {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) seeds.push_back(std::stoull(item));
        }
    } catch (const std::logic_error&) {
        throw ConfigError("malformed seed list '" + text + "'");
    }
    if (seeds.empty()) throw ConfigError("seed list is empty");
    return seeds;
}

}  // namespace pgather
