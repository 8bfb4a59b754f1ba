#include "pgather/rendezvous.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace pgather {

std::vector<bool> transform_label(std::uint64_t label, unsigned width) {
    if (label < 1) {
        throw RendezvousError("labels must be positive");
    }
    const unsigned bits = std::max(bit_length(label), width);
    std::vector<bool> out;
    out.reserve(2 * bits + 2);
    for (unsigned i = bits; i-- > 0;) {
        const bool b = ((label >> i) & 1U) != 0;
        out.push_back(b);
        out.push_back(b);
    }
    out.push_back(false);
    out.push_back(true);
    return out;
}

std::int64_t TrenTable::bound_for(std::uint32_t label) const {
    const auto it = t_ren.find(label);
    if (it == t_ren.end()) {
        throw RendezvousError("label " + std::to_string(label) + " is outside the certified label set");
    }
    return it->second;
}

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) {
    const auto r = a % m;
    return r < 0 ? r + m : r;
}

bool rotation_equivalent(const std::vector<bool>& a, const std::vector<bool>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        bool same = true;
        for (std::size_t i = 0; i < a.size() && same; ++i) {
            same = a[(i + k) % a.size()] == b[i];
        }
        if (same) {
            return true;
        }
    }
    return false;
}

}  // namespace

RenSchedule::RenSchedule(ExplorationSequence exploration, std::uint32_t max_label)
    : exploration_(std::move(exploration)),
      x_(static_cast<std::int64_t>(exploration_.certified_bound)),
      max_label_(max_label),
      width_bits_(bit_length(max_label)) {
    if (x_ < 1) {
        throw RendezvousError("exploration sequence has no certified bound");
    }
    if (max_label < 1) {
        throw RendezvousError("schedule needs at least label 1");
    }
    patterns_.resize(static_cast<std::size_t>(max_label) + 1);
    for (std::uint32_t l = 1; l <= max_label; ++l) {
        patterns_[l] = transform_label(l, width_bits_);
    }
    width_ = patterns_[1].size();
    period_ = static_cast<std::int64_t>(width_) * 2 * x_;
    for (std::uint32_t a = 1; a <= max_label; ++a) {
        for (std::uint32_t b = a + 1; b <= max_label; ++b) {
            if (rotation_equivalent(patterns_[a], patterns_[b])) {
                throw RendezvousError("labels " + std::to_string(a) + " and " + std::to_string(b) +
                                      " have rotation-equivalent schedules");
            }
        }
    }
}

const std::vector<bool>& RenSchedule::pattern(std::uint32_t label) const {
    if (label < 1 || label > max_label_) {
        throw RendezvousError("label " + std::to_string(label) + " outside schedule range 1.." +
                              std::to_string(max_label_));
    }
    return patterns_[label];
}

bool RenSchedule::explores(std::uint32_t label, std::int64_t t) const {
    const auto u = mod(t, period_);
    return pattern(label)[static_cast<std::size_t>(u / x_ / 2)];
}

Action RenSchedule::action(std::uint32_t label, std::int64_t t, std::uint32_t degree,
                           std::optional<Port> incoming) const {
    if (degree == 0 || !explores(label, t)) {
        return Action::wait();
    }
    const auto pos = static_cast<std::size_t>(mod(t, period_) % x_);
    return Action::move(next_port(exploration_.offsets, pos, degree, incoming));
}

std::int64_t RenSchedule::cyclic_meeting_bound() const {
    const auto q = static_cast<std::size_t>(period_);
    const auto x = static_cast<std::size_t>(x_);
    // waits[l][u] = number of consecutive waiting phases starting at u (cyclic, capped at q).
    std::vector<std::vector<std::size_t>> waits(max_label_ + 1);
    for (std::uint32_t l = 1; l <= max_label_; ++l) {
        auto& w = waits[l];
        w.assign(q, 0);
        for (std::size_t pass = 0; pass < 2; ++pass) {
            for (std::size_t i = q; i-- > 0;) {
                w[i] = explores(l, static_cast<std::int64_t>(i)) ? 0 : std::min(q, 1 + w[(i + 1) % q]);
            }
        }
    }
    const std::size_t segments = q / x;
    std::int64_t worst = 0;
    std::vector<std::size_t> events;
    for (std::uint32_t a = 1; a <= max_label_; ++a) {
        for (std::uint32_t b = 1; b <= max_label_; ++b) {
            if (a == b) {
                continue;
            }
            for (std::size_t r = 0; r < q; ++r) {
                // Phase of b is phase of a plus r. Event starts are in a-phase.
                events.clear();
                for (std::size_t m = 0; m < segments; ++m) {
                    const std::size_t s = m * x;
                    if (explores(b, static_cast<std::int64_t>(s))) {
                        const std::size_t st = (s + q - r) % q;
                        if (waits[a][st] >= x) {
                            events.push_back(st);
                        }
                    }
                    if (explores(a, static_cast<std::int64_t>(s)) && waits[b][(s + r) % q] >= x) {
                        events.push_back(s);
                    }
                }
                if (events.empty()) {
                    throw RendezvousError("labels " + std::to_string(a) + " and " + std::to_string(b) +
                                          " have no guaranteed meeting at relative shift " + std::to_string(r));
                }
                std::sort(events.begin(), events.end());
                events.erase(std::unique(events.begin(), events.end()), events.end());
                std::size_t gap = 0;
                for (std::size_t i = 0; i < events.size(); ++i) {
                    const std::size_t next = i + 1 < events.size() ? events[i + 1] : events[0] + q;
                    gap = std::max(gap, next - events[i]);
                }
                worst = std::max(worst, static_cast<std::int64_t>(gap - 1 + x));
            }
        }
    }
    return worst;
}

const TrenTable& RenSchedule::table() const {
    if (!table_) {
        throw RendezvousError("schedule has no verified t_ren table");
    }
    return *table_;
}

RenSchedule RenSchedule::with_table(TrenTable table) const {
    if (table.max_label() != max_label_) {
        throw RendezvousError("t_ren table covers labels up to " + std::to_string(table.max_label()) +
                              " but the schedule is built for " + std::to_string(max_label_));
    }
    if (table.modulus <= 0 || table.modulus % period_ != 0) {
        throw RendezvousError("t_ren modulus must be a positive multiple of the schedule period");
    }
    if (table.family_hash != exploration_.family_hash) {
        throw RendezvousError("t_ren table and exploration certificate name different families");
    }
    RenSchedule copy = *this;
    copy.table_ = std::move(table);
    return copy;
}

std::string RendezvousCounterexample::describe() const {
    std::ostringstream out;
    out << "graph #" << graph << ": label " << label1 << " from node " << start1 << " at round 0, label " << label2
        << " from node " << start2 << " at round " << offset << ": no meeting within " << limit << " rounds";
    return out.str();
}

namespace {

using Trajectory = std::vector<NodeIndex>;

Trajectory trajectory(const RenSchedule& s, const PortGraph& g, std::uint32_t label, NodeIndex start,
                      std::int64_t length) {
    Trajectory out;
    out.reserve(static_cast<std::size_t>(length) + 1);
    NodeIndex at = start;
    std::optional<Port> incoming;
    out.push_back(at);
    for (std::int64_t t = 0; t < length; ++t) {
        const auto act = s.action(label, t, g.degree(at), incoming);
        if (act.is_wait()) {
            incoming.reset();
        } else {
            const auto h = g.follow(at, act.port());
            at = h.to;
            incoming = h.reverse;
        }
        out.push_back(at);
    }
    return out;
}

// Delay after the later start, scanning at most `limit` rounds past it.
std::optional<std::int64_t> delay_on(const Trajectory& first, const Trajectory& second, std::int64_t offset,
                                     std::int64_t limit) {
    for (std::int64_t dt = 0; dt <= limit; ++dt) {
        if (first[static_cast<std::size_t>(offset + dt)] == second[static_cast<std::size_t>(dt)]) {
            return dt;
        }
    }
    return std::nullopt;
}

void check_box(const RenSchedule& schedule, const std::vector<std::uint32_t>& labels, const GraphFamily& family,
               std::int64_t max_offset) {
    if (labels.size() < 2) {
        throw RendezvousError("rendezvous certification needs at least two distinct labels");
    }
    for (auto l : labels) {
        if (l < 1 || l > schedule.max_label()) {
            throw RendezvousError("label " + std::to_string(l) + " outside schedule range");
        }
    }
    if (family.hash() != schedule.exploration().family_hash) {
        throw RendezvousError("family hash " + family.hash() + " does not match the exploration certificate " +
                              schedule.exploration().family_hash);
    }
    if (max_offset < 0) {
        throw RendezvousError("max_offset must be non-negative");
    }
}

// Walks the whole box in counterexample order and reports either the worst
// delay per smaller-label bit-length or the first tuple exceeding `limit_of`.
template <typename LimitFn>
std::variant<std::map<unsigned, std::int64_t>, RendezvousCounterexample> sweep(
    const RenSchedule& schedule, const std::vector<std::uint32_t>& labels, const GraphFamily& family,
    std::int64_t max_offset, LimitFn limit_of) {
    std::int64_t longest = 0;
    for (auto a : labels) {
        for (auto b : labels) {
            if (a != b) longest = std::max(longest, limit_of(std::min(a, b)));
        }
    }
    std::map<unsigned, std::int64_t> worst;
    for (std::size_t gi = 0; gi < family.graphs().size(); ++gi) {
        const auto& g = family.graphs()[gi];
        const auto n = static_cast<NodeIndex>(g.node_count());
        std::map<std::uint32_t, std::vector<Trajectory>> traj;
        for (auto l : labels) {
            for (NodeIndex v = 0; v < n; ++v) {
                traj[l].push_back(trajectory(schedule, g, l, v, max_offset + longest));
            }
        }
        for (auto l1 : labels) {
            for (auto l2 : labels) {
                if (l1 == l2) {
                    continue;
                }
                const auto lo = std::min(l1, l2);
                const auto limit = limit_of(lo);
                auto& w = worst[bit_length(lo)];
                for (std::int64_t d = 0; d <= max_offset; ++d) {
                    for (NodeIndex v1 = 0; v1 < n; ++v1) {
                        const auto& t1 = traj[l1][v1];
                        for (NodeIndex v2 = 0; v2 < n; ++v2) {
                            // Before its start the second agent sits at v2; a
                            // meeting counts only once both are running.
                            const auto delay = delay_on(t1, traj[l2][v2], d, limit);
                            if (!delay) {
                                return RendezvousCounterexample{gi, l1, l2, d, v1, v2, limit};
                            }
                            w = std::max(w, *delay);
                        }
                    }
                }
            }
        }
    }
    return worst;
}

}  // namespace

std::optional<std::int64_t> meeting_delay(const RenSchedule& schedule, const PortGraph& g, std::uint32_t label1,
                                          NodeIndex start1, std::uint32_t label2, NodeIndex start2,
                                          std::int64_t offset, std::int64_t limit) {
    const auto t1 = trajectory(schedule, g, label1, start1, offset + limit);
    const auto t2 = trajectory(schedule, g, label2, start2, limit);
    return delay_on(t1, t2, offset, limit);
}

std::variant<TrenTable, RendezvousCounterexample> certify_rendezvous(const RenSchedule& schedule,
                                                                     const std::vector<std::uint32_t>& labels_in,
                                                                     const GraphFamily& family,
                                                                     std::int64_t max_offset) {
    std::vector<std::uint32_t> labels(labels_in);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    check_box(schedule, labels, family, max_offset);

    const std::int64_t search_limit = 3 * schedule.period();
    auto result = sweep(schedule, labels, family, max_offset, [&](std::uint32_t) { return search_limit; });
    if (auto* cx = std::get_if<RendezvousCounterexample>(&result)) {
        return *cx;
    }
    const auto& worst = std::get<std::map<unsigned, std::int64_t>>(result);

    TrenTable table;
    table.family_hash = family.hash();
    table.max_offset = max_offset;
    table.cyclic_bound = schedule.cyclic_meeting_bound();
    std::int64_t running = 0;
    std::int64_t largest = 0;
    for (auto l : labels) {
        for (unsigned bits = 1; bits <= bit_length(l); ++bits) {
            if (auto it = worst.find(bits); it != worst.end()) {
                running = std::max(running, it->second);
            }
        }
        table.worst_measured = std::max(table.worst_measured, running);
        table.t_ren[l] = running + schedule.segment_length();
        largest = std::max(largest, table.t_ren[l]);
    }
    const auto need = std::max(largest, table.cyclic_bound);
    const auto q = schedule.period();
    table.modulus = (need + q - 1) / q * q;
    table.t_ren[labels.back()] = table.modulus;
    return table;
}

std::optional<RendezvousCounterexample> verify_rendezvous(const RenSchedule& schedule, const TrenTable& table,
                                                          const GraphFamily& family) {
    std::vector<std::uint32_t> labels;
    for (const auto& [l, _] : table.t_ren) {
        labels.push_back(l);
    }
    check_box(schedule, labels, family, table.max_offset);
    if (table.family_hash != family.hash()) {
        throw RendezvousError("t_ren table was issued for a different family");
    }
    if (table.modulus % schedule.period() != 0 || table.modulus < schedule.cyclic_meeting_bound()) {
        throw RendezvousError("t_ren modulus " + std::to_string(table.modulus) +
                              " is not a period multiple covering the cyclic meeting bound");
    }
    if (table.bound_for(table.max_label()) != table.modulus) {
        throw RendezvousError("t_ren of the top label must equal the modulus");
    }
    std::int64_t prev = 0;
    for (const auto& [l, t] : table.t_ren) {
        if (t < prev) {
            throw RendezvousError("t_ren table is not monotone at label " + std::to_string(l));
        }
        prev = t;
    }
    auto result = sweep(schedule, labels, family, table.max_offset,
                        [&](std::uint32_t lo) { return table.bound_for(lo); });
    if (auto* cx = std::get_if<RendezvousCounterexample>(&result)) {
        return *cx;
    }
    return std::nullopt;
}

std::string serialize(const TrenTable& table) {
    std::ostringstream out;
    out << "family_hash " << table.family_hash << '\n'
        << "modulus " << table.modulus << '\n'
        << "max_offset " << table.max_offset << '\n'
        << "cyclic_bound " << table.cyclic_bound << '\n'
        << "worst_measured " << table.worst_measured << '\n';
    for (const auto& [l, t] : table.t_ren) {
        out << l << ' ' << t << '\n';
    }
    return out.str();
}

TrenTable parse_tren(const std::string& text) {
    std::istringstream in(text);
    TrenTable table;
    std::string key;
    auto expect = [&](const char* name, auto& field) {
        if (!(in >> key) || key != name || !(in >> field)) {
            throw RendezvousError(std::string("t_ren table: expected '") + name + "'");
        }
    };
    expect("family_hash", table.family_hash);
    expect("modulus", table.modulus);
    expect("max_offset", table.max_offset);
    expect("cyclic_bound", table.cyclic_bound);
    expect("worst_measured", table.worst_measured);
    long long label = 0;
    long long bound = 0;
    while (in >> label) {
        if (!(in >> bound) || label < 1 || bound < 1) {
            throw RendezvousError("t_ren table: malformed label line");
        }
        table.t_ren[static_cast<std::uint32_t>(label)] = bound;
    }
    if (!in.eof()) {
        throw RendezvousError("t_ren table: trailing garbage");
    }
    if (table.t_ren.empty()) {
        throw RendezvousError("t_ren table: no labels");
    }
    return table;
}

}  // namespace pgather
