#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pgather/exploration.hpp"
#include "pgather/family.hpp"
#include "pgather/types.hpp"

namespace pgather {

class RendezvousError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bit-doubled binary expansion of `label` followed by the delimiter 01.
/// `width` left-pads the binary expansion with zeros first (0 = no padding).
std::vector<bool> transform_label(std::uint64_t label, unsigned width = 0);

/// Verified meeting bounds for a label set on a family.
struct TrenTable {
    std::string family_hash;
    std::map<std::uint32_t, std::int64_t> t_ren;  // label -> rounds
    std::int64_t modulus = 0;
    std::int64_t max_offset = 0;    // start offsets 0..max_offset were certified
    std::int64_t cyclic_bound = 0;  // meeting bound from arbitrary joint phases
    std::int64_t worst_measured = 0;

    std::int64_t bound_for(std::uint32_t label) const;
    std::uint32_t max_label() const { return t_ren.empty() ? 0 : t_ren.rbegin()->first; }
    bool covers_modulus() const { return max_offset >= modulus; }
    bool operator==(const TrenTable&) const = default;
};

/// The label-driven schedule. Each transformed bit occupies two consecutive
/// segments of X rounds; 1-bits explore, 0-bits wait. All labels up to
/// max_label are padded to a common width so the schedule has one period Q.
class RenSchedule {
public:
    RenSchedule(ExplorationSequence exploration, std::uint32_t max_label);

    const ExplorationSequence& exploration() const { return exploration_; }
    std::int64_t segment_length() const { return x_; }
    std::uint32_t max_label() const { return max_label_; }
    std::size_t width() const { return width_; }
    std::int64_t period() const { return period_; }

    const std::vector<bool>& pattern(std::uint32_t label) const;
    bool explores(std::uint32_t label, std::int64_t t) const;

    /// REN(label, t). t is taken modulo the period.
    Action action(std::uint32_t label, std::int64_t t, std::uint32_t degree, std::optional<Port> incoming) const;

    /// Worst number of rounds until two distinct labels meet when both run
    /// the periodic schedule from arbitrary joint phases, arbitrary positions
    /// and arbitrary incoming ports. Graph-independent given the coverage
    /// certificate. Throws if some relative shift admits no guaranteed meeting.
    std::int64_t cyclic_meeting_bound() const;

    bool certified() const { return table_.has_value(); }
    const TrenTable& table() const;
    std::int64_t modulus() const { return table().modulus; }
    std::int64_t t_ren(std::uint32_t label) const { return table().bound_for(label); }

    /// Copy of this schedule carrying a table. Throws if the table is for a
    /// different label range or its modulus is not a multiple of the period.
    RenSchedule with_table(TrenTable table) const;

private:
    ExplorationSequence exploration_;
    std::int64_t x_;
    std::uint32_t max_label_;
    unsigned width_bits_;
    std::size_t width_;
    std::int64_t period_;
    std::vector<std::vector<bool>> patterns_;  // index = label
    std::optional<TrenTable> table_;
};

struct RendezvousCounterexample {
    std::size_t graph = 0;
    std::uint32_t label1 = 0;  // starts at round 0
    std::uint32_t label2 = 0;  // starts `offset` rounds later
    std::int64_t offset = 0;
    NodeIndex start1 = 0;
    NodeIndex start2 = 0;
    std::int64_t limit = 0;  // no meeting within this many rounds after both started

    std::string describe() const;
};

/// Exhaustive meeting check: every graph, ordered pair of distinct labels,
/// start offset in 0..max_offset and start-node pair. Builds the table from
/// the measured worst cases plus one segment, made monotone in bit-length,
/// and derives the modulus. Throws RendezvousError if fewer than two labels
/// are given or the family does not match the exploration certificate.
std::variant<TrenTable, RendezvousCounterexample> certify_rendezvous(const RenSchedule& schedule,
                                                                     const std::vector<std::uint32_t>& labels,
                                                                     const GraphFamily& family,
                                                                     std::int64_t max_offset);

/// Re-checks a claimed table. Returns the earliest failing tuple if any.
std::optional<RendezvousCounterexample> verify_rendezvous(const RenSchedule& schedule, const TrenTable& table,
                                                          const GraphFamily& family);

/// Meeting delay for one tuple: rounds after the later start until both
/// agents occupy one node, or nullopt within `limit`.
std::optional<std::int64_t> meeting_delay(const RenSchedule& schedule, const PortGraph& g, std::uint32_t label1,
                                          NodeIndex start1, std::uint32_t label2, NodeIndex start2,
                                          std::int64_t offset, std::int64_t limit);

std::string serialize(const TrenTable& table);
TrenTable parse_tren(const std::string& text);

}  // namespace pgather
