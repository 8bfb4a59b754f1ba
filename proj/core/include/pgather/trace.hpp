#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pgather/agent.hpp"

namespace pgather {

enum class WakeEvent : std::uint8_t { none, scheduled, visited };

/// One agent's entry in a round record. Location is where the agent stood
/// while observing (start of the round); state fields are end-of-round values
/// for good agents and the announcement for Byzantine ones.
struct AgentRecord {
    AgentId id;
    bool byzantine = false;
    bool active = false;
    NodeIndex location = 0;
    WakeEvent wake = WakeEvent::none;
    std::uint64_t announced = 0;  // digest of the announced protocol fields
    Action action = Action::wait();
    std::int64_t num_round = 0;
    AgentId seed;
    IdSet group;
    bool reset = false;
    std::vector<AgentId> anomalies;
    std::uint64_t t_wit_digest = 0;
    std::uint64_t cg_digest = 0;
    TrustRow own_row;
    std::size_t widest_row = 0;  // largest second-dimension key count in T_wit
};

struct TraceRecord {
    Round round = 0;
    std::vector<AgentRecord> agents;  // sorted by id
};

/// Run metadata plus one record per executed round.
struct Trace {
    std::vector<AgentId> goods;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t f = 0;
    std::uint32_t K = 0;
    std::int64_t tau = 0;
    std::int64_t modulus = 0;
    bool cap_twit = false;
    bool staggered = false;
    std::vector<TraceRecord> records;

    /// FNV-1a over every field of every record, in order.
    std::uint64_t digest() const;
};

/// Line-delimited JSON: a header object, then one object per round.
/// Keys are sorted, so output is byte-stable.
void write_jsonl(const Trace& trace, std::ostream& out);

}  // namespace pgather
