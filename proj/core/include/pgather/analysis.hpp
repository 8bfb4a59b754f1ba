#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "pgather/trace.hpp"

namespace pgather {

class InsufficientHorizon : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Smallest round from which all good agents share a node in every recorded
/// round, provided at least `tail_window` rounds are recorded after it.
/// Throws std::invalid_argument if tail_window < modulus and
/// InsufficientHorizon if the trace is shorter than tail_window.
std::optional<Round> detect_perpetual_gathering(const Trace& trace, std::int64_t tail_window);

enum class Invariant {
    equal_t_wit,         // co-located good agents hold equal T_wit
    equal_confidence,    // ... and build equal confidence graphs
    group_consistency,   // same group at end of r >= 2 => no anomaly between them in r+1
    no_good_distrust,    // no good agent writes 1 for a good agent at r >= 2
    trust_healing,       // own-row entries move 1, v+1, tau->gone, or gone->tau
    meeting_window,      // every good pair meets within [r, r+tau]
    interruption_bound,  // seed changes plus resets per tau-window
    row_cap,             // memory-capped variant: rows hold <= K keys
};

std::string to_string(Invariant which);

struct Violation {
    Round round = 0;
    Invariant which{};
    std::string witness;
};

struct InvariantReport {
    std::map<Invariant, Violation> first;  // earliest violation per invariant
    std::int64_t max_window_events = 0;
    std::int64_t window_bound = 0;
    std::int64_t max_meeting_gap = 0;  // longest wait for a pair to meet, in rounds

    bool ok() const { return first.empty(); }
    bool violated(Invariant which) const { return first.contains(which); }
    /// Earliest violation over all invariants.
    std::optional<Violation> earliest() const;
};

/// Bound on seed changes plus resets per tau-window: 3kf, or k-1 merges when f = 0.
std::int64_t interruption_bound(std::uint32_t k, std::uint32_t f);

InvariantReport check_invariants(const Trace& trace);

struct MetricsRow {
    std::string scenario;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t f = 0;
    std::int64_t tau = 0;
    std::optional<Round> convergence;
    std::int64_t max_window_events = 0;
    std::string status;
};

std::string metrics_csv_header();
std::string to_csv(const MetricsRow& row);

}  // namespace pgather
