#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgather/analysis.hpp"
#include "pgather/certificates.hpp"
#include "pgather/engine.hpp"
#include "pgather/scenario.hpp"

namespace pgather {

/// Command-line style overrides applied on top of a scenario file.
struct RunOptions {
    std::optional<Round> horizon;
    std::optional<std::uint64_t> corrupt_seed;  // forces arbitrary initial state
    std::optional<std::string> crafted;         // forces a crafted initial state
    std::optional<std::string> wake_schedule;
    bool cap_twit = false;
    Mutation mutation = Mutation::none;
};

struct RunOutcome {
    Scenario scenario;  // after overrides
    Trace trace;
    std::optional<Round> convergence;
    Round bound = 0;  // 2tau+1, or 3tau+1 when some good agent starts dormant
    InvariantReport report;
    MetricsRow metrics;

    bool converged_in_bound() const { return convergence && *convergence <= bound; }
    bool success() const { return converged_in_bound() && report.ok(); }
    std::string summary() const;
};

/// Resolves the scenario's family and graph, checks them against the
/// certified box and the bounds, and returns the Parameters for it.
Parameters resolve_parameters(const Scenario& s, const CertificateBundle& certs, bool cap_twit);
std::shared_ptr<const PortGraph> resolve_graph(const Scenario& s);
GraphFamily resolve_family(const Scenario& s);

/// Builds the initial configuration, including wake schedule and initial
/// state corruption.
Configuration build_configuration(const Scenario& s, std::shared_ptr<const PortGraph> graph, Parameters params);

/// Default horizon: 3tau + 1 plus two full modulus periods of tail.
Round default_horizon(const Parameters& p);

/// Applies overrides, runs, and evaluates convergence and every invariant.
RunOutcome run_scenario(Scenario scenario, const CertificateBundle& certs, const RunOptions& options = {});

/// One run per corruption seed, executed on a worker pool; rows come back
/// in seed order.
std::vector<RunOutcome> run_batch(const Scenario& scenario, const CertificateBundle& certs, RunOptions options,
                                  const std::vector<std::uint64_t>& seeds, unsigned workers = 0);

/// Parses `a..b` or a comma list into seeds.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace pgather
