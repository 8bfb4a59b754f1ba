#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pgather/adversary.hpp"
#include "pgather/parameters.hpp"

namespace pgather {

struct GraphSpec {
    std::string generator;  // ring, line, star, clique or file
    std::size_t size = 0;   // nodes; leaves for star
    std::string file;       // for generator == "file", relative to the scenario

    bool operator==(const GraphSpec&) const = default;
};

struct ByzantineSpec {
    std::string strategy;
    StrategyParams params;

    bool operator==(const ByzantineSpec&) const = default;
};

/// When a good agent starts. `delay` d means the adversary activates it in
/// round d, so its first full round is d+1; 0 is awake from the start.
struct WakeSpec {
    enum class Kind { start, delay, on_visit };
    Kind kind = Kind::start;
    Round delay = 0;

    bool operator==(const WakeSpec&) const = default;
};

struct AgentSpec {
    AgentId id;
    NodeIndex start = 0;
    std::optional<ByzantineSpec> byzantine;
    WakeSpec wake;

    bool operator==(const AgentSpec&) const = default;
};

struct InitialStateSpec {
    enum class Mode { clean, arbitrary, crafted };
    Mode mode = Mode::clean;
    std::uint64_t seed = 0;
    std::string crafted;

    bool operator==(const InitialStateSpec&) const = default;
};

/// A reviewable, versioned experiment description (JSON on disk).
struct Scenario {
    static constexpr int kVersion = 1;

    int version = kVersion;
    std::string name;
    std::string family = "bundled";
    std::optional<std::string> family_hash;  // pins the certified family
    GraphSpec graph;
    Bounds bounds;
    std::vector<AgentSpec> agents;
    InitialStateSpec initial_state;
    std::optional<Round> horizon;
    bool cap_twit = false;
    std::filesystem::path base_dir;  // where relative graph files resolve; not serialized

    bool operator==(const Scenario& o) const;
};

/// Parses and validates. Throws ConfigError with the offending field.
Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);
std::string to_json(const Scenario& s);

/// Applies a --wake-schedule value: `simultaneous`, `on_visit` (every good
/// agent except the smallest id sleeps until visited), `staggered:SEED`
/// (pseudorandom delays in [0, tau] with at least one 0 and one tau), or
/// `explicit:ID=D,ID=D`.
void apply_wake_schedule(Scenario& s, const std::string& spec, std::int64_t tau);

}  // namespace pgather
