#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

namespace pgather {

/// Simulator-internal node index. Agents never observe it.
using NodeIndex = std::uint32_t;

/// Local port number, 1-based.
using Port = std::uint32_t;

/// Round counter of the synchronous scheduler, starting at 1.
using Round = std::int64_t;

/// Authentic agent identifier. Byzantine agents cannot forge it, so it is a
/// distinct type that strategies never get to construct for announcements.
struct AgentId {
    std::uint32_t value = 0;

    constexpr AgentId() = default;
    constexpr explicit AgentId(std::uint32_t v) : value(v) {}

    constexpr auto operator<=>(const AgentId&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, AgentId id) { return os << id.value; }

/// Number of bits in the binary expansion of a positive value.
constexpr unsigned bit_length(std::uint64_t v) {
    unsigned n = 0;
    while (v != 0) {
        ++n;
        v >>= 1;
    }
    return n;
}

/// One round's movement decision: WAIT, or MOVE through a local port.
class Action {
public:
    static constexpr Action wait() { return Action{}; }
    static constexpr Action move(Port p) { return Action{p}; }

    constexpr bool is_wait() const { return !port_.has_value(); }
    constexpr Port port() const { return *port_; }

    constexpr bool operator==(const Action&) const = default;

    std::string to_string() const {
        return is_wait() ? std::string("WAIT") : "MOVE(" + std::to_string(*port_) + ")";
    }

private:
    constexpr Action() = default;
    constexpr explicit Action(Port p) : port_(p) {}
    std::optional<Port> port_;
};

}  // namespace pgather

template <>
struct std::hash<pgather::AgentId> {
    std::size_t operator()(pgather::AgentId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
