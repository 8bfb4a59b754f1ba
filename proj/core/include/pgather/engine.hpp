#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pgather/adversary.hpp"
#include "pgather/trace.hpp"
#include "pgather/world.hpp"

namespace pgather {

/// Executes one synchronous round in place: wake-ups, announcements,
/// transitions, then atomic movement. Optionally records the round.
void step_in_place(Configuration& config, TraceRecord* record = nullptr);

/// Functional form of step_in_place.
Configuration step(Configuration config);

/// Runs `horizon` rounds and records each one.
Trace run(Configuration config, Round horizon);

/// Overwrites every good agent's memory with pseudorandom garbage in the raw
/// field shapes: out-of-range numRound, fake ids, stale groups, trust values
/// outside [1, tau], arbitrary seeds.
void inject_arbitrary(Configuration& config, std::uint64_t seed);

/// Hand-made worst cases. `mutual_distrust`: every good agent already holds
/// value 1 for every other good agent in every row. `stale_group`: each good
/// agent's R names an absent fabricated id.
enum class CraftedCase { mutual_distrust, stale_group };
void inject_crafted(Configuration& config, CraftedCase which);
CraftedCase parse_crafted(const std::string& name);
std::string to_string(CraftedCase which);

/// Checks the static configuration invariants; throws ConfigError.
void validate(const Configuration& config);

}  // namespace pgather
