#pragma once

#include <filesystem>
#include <string>

#include "pgather/certificates.hpp"
#include "pgather/harness.hpp"

namespace pgather::testing {

// Bundled family certified for N=6 and labels 1..8, computed once per process.
const CertificateBundle& bundled_certs();

// Parameters with the given tau and no schedule, for the pure trust-update functions.
Parameters bare_params(std::int64_t tau, std::int64_t modulus = 180, std::uint32_t K = 5, bool cap = false);

// Parameters::make over the bundled certificates.
Parameters bundled_params(Bounds bounds, std::uint32_t n, std::uint32_t k, std::uint32_t f, bool cap = false);

AgentSpec good(std::uint32_t id, NodeIndex start);
AgentSpec byzantine(std::uint32_t id, NodeIndex start, std::string strategy, StrategyParams params = {});
Scenario make_scenario(std::string name, std::string generator, std::size_t size, Bounds bounds,
                       std::vector<AgentSpec> agents);

RunOutcome run_bundled(Scenario s, const RunOptions& options = {});

// Configuration for `s` over the bundled certificates, before any round runs.
Configuration configure(const Scenario& s, bool cap = false);

const AgentRecord& record_of(const TraceRecord& rec, std::uint32_t id);

std::filesystem::path source_dir();
std::filesystem::path scenario_path(const std::string& name);

}  // namespace pgather::testing
