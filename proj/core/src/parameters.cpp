#include "pgather/parameters.hpp"

namespace pgather {

std::int64_t compute_tau(const Bounds& bounds, std::int64_t modulus) {
    return (6LL * bounds.K * bounds.F + 1) * modulus;
}

Parameters Parameters::make(Bounds bounds, std::uint32_t n, std::uint32_t k, std::uint32_t f,
                            std::shared_ptr<const RenSchedule> schedule, bool cap_twit) {
    if (n > bounds.N) {
        throw ConfigError("n=" + std::to_string(n) + " exceeds N=" + std::to_string(bounds.N));
    }
    if (k > bounds.K) {
        throw ConfigError("k=" + std::to_string(k) + " exceeds K=" + std::to_string(bounds.K));
    }
    if (f > bounds.F) {
        throw ConfigError("f=" + std::to_string(f) + " exceeds F=" + std::to_string(bounds.F));
    }
    if (f >= k) {
        throw ConfigError("at least one good agent is required");
    }
    if (bounds.lambda_g < 1 || bounds.lambda_g > 20) {
        throw ConfigError("lambda_g must be in 1..20");
    }
    if (!schedule || !schedule->certified()) {
        throw ConfigError("rendezvous schedule is not certified; run `pgather certify` first");
    }
    const std::uint32_t top = 1U << (bounds.lambda_g + 1);
    if (schedule->max_label() != top) {
        throw ConfigError("certified label range 1.." + std::to_string(schedule->max_label()) +
                          " does not match 2^(lambda_g+1)=" + std::to_string(top));
    }
    if (schedule->exploration().max_nodes < bounds.N) {
        throw ConfigError("exploration certificate covers N=" + std::to_string(schedule->exploration().max_nodes) +
                          " < N=" + std::to_string(bounds.N));
    }
    const auto& table = schedule->table();
    if (!table.covers_modulus()) {
        throw ConfigError("t_ren table certifies offsets up to " + std::to_string(table.max_offset) +
                          " only, below the modulus " + std::to_string(table.modulus));
    }
    Parameters p;
    p.bounds = bounds;
    p.n = n;
    p.k = k;
    p.f = f;
    p.modulus = schedule->t_ren(top);
    p.tau = compute_tau(bounds, p.modulus);
    p.schedule = std::move(schedule);
    p.cap_twit = cap_twit;
    return p;
}

}  // namespace pgather
