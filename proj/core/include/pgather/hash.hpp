#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pgather {

/// 64-bit FNV-1a, used for content addressing and trace digests. Stable across
/// platforms and runs, unlike std::hash.
class Fnv1a {
public:
    Fnv1a& bytes(std::string_view data);
    Fnv1a& u64(std::uint64_t v);
    Fnv1a& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }

    std::uint64_t value() const { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string to_hex(std::uint64_t v);

}  // namespace pgather
