#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "pgather/rendezvous.hpp"

namespace pgather {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Global knowledge handed to every good agent.
struct Bounds {
    std::uint32_t N = 0;
    std::uint32_t K = 0;
    std::uint32_t F = 0;
    std::uint32_t lambda_g = 0;

    bool operator==(const Bounds&) const = default;
};

/// Test-only protocol variants used to show that the invariant checkers bite.
enum class Mutation {
    none,
    skip_numround_consensus,  // never reset numRound on a membership change
};

struct Parameters {
    Bounds bounds;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t f = 0;
    std::int64_t modulus = 0;
    std::int64_t tau = 0;
    std::shared_ptr<const RenSchedule> schedule;
    bool cap_twit = false;
    Mutation mutation = Mutation::none;

    /// Validates n <= N, k <= K, f <= F, a certified schedule whose label
    /// range reaches 2^(lambda_g+1), and derives tau = (6KF+1) * modulus.
    static Parameters make(Bounds bounds, std::uint32_t n, std::uint32_t k, std::uint32_t f,
                           std::shared_ptr<const RenSchedule> schedule, bool cap_twit = false);

    /// Largest label the schedule must handle: 2^(lambda_g+1).
    std::uint32_t top_label() const { return 1U << (bounds.lambda_g + 1); }
};

std::int64_t compute_tau(const Bounds& bounds, std::int64_t modulus);

}  // namespace pgather
