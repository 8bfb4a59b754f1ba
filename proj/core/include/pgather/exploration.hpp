#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pgather/family.hpp"
#include "pgather/types.hpp"

namespace pgather {

class ExplorationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by search_sequence when the budget runs out.
class SequenceNotFound : public ExplorationError {
public:
    using ExplorationError::ExplorationError;
};

/// An offset sequence together with its coverage certificate.
struct ExplorationSequence {
    std::vector<std::uint32_t> offsets;
    std::size_t certified_bound = 0;  // X
    std::size_t max_nodes = 0;        // N
    std::string family_hash;
    std::string family_description;

    bool operator==(const ExplorationSequence&) const = default;
};

/// The walk rule. Pure in its arguments so a corrupted step index can resume.
Port next_port(const std::vector<std::uint32_t>& offsets, std::size_t step, std::uint32_t degree,
               std::optional<Port> incoming);

/// Identifies one exhaustive walk. Ordered lexicographically with "no incoming
/// port" before port 1.
struct WalkStart {
    std::size_t graph = 0;
    NodeIndex start = 0;
    std::optional<Port> incoming;

    auto operator<=>(const WalkStart&) const = default;
};

struct CoverageFailure {
    WalkStart walk;
    NodeIndex uncovered = 0;  // smallest node not visited within the bound
    std::size_t steps = 0;    // the bound that was checked

    std::string describe() const;
};

/// Steps needed to visit every node of `g` from the given start, or nullopt
/// if the first `limit` offsets do not suffice.
std::optional<std::size_t> cover_time(const std::vector<std::uint32_t>& offsets, const PortGraph& g, NodeIndex start,
                                      std::optional<Port> incoming, std::size_t limit);

/// Exhaustive certification over every (graph, start, incoming) triple.
/// Throws ExplorationError on an empty family or when X exceeds the length.
std::variant<ExplorationSequence, CoverageFailure> certify(const std::vector<std::uint32_t>& offsets,
                                                           const GraphFamily& family, std::size_t bound);

struct SearchOptions {
    std::uint64_t seed = 1;
    std::size_t draws = 32;
};

/// Seeded randomized greedy construction with re-draws; the shortest
/// certified sequence found wins. Throws SequenceNotFound within budget.
ExplorationSequence search_sequence(const GraphFamily& family, std::size_t max_nodes, std::size_t max_len,
                                    SearchOptions options = {});

/// `X N family_hash` header line, then the offsets on one line.
std::string serialize(const ExplorationSequence& seq);
ExplorationSequence parse_exploration(const std::string& text);

}  // namespace pgather
