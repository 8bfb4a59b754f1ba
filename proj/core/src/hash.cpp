#include "pgather/hash.hpp"

#include <array>

namespace pgather {

Fnv1a& Fnv1a::bytes(std::string_view data) {
    for (unsigned char c : data) {
        state_ ^= c;
        state_ *= 0x100000001b3ULL;
    }
    return *this;
}

Fnv1a& Fnv1a::u64(std::uint64_t v) {
    std::array<char, 8> buf{};
    for (std::size_t i = 0; i < buf.size(); ++i) {
        buf[i] = static_cast<char>((v >> (8 * i)) & 0xffU);
    }
    return bytes(std::string_view(buf.data(), buf.size()));
}

std::string Fnv1a::hex() const { return to_hex(state_); }

std::string to_hex(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xfU];
        v >>= 4;
    }
    return out;
}

}  // namespace pgather
