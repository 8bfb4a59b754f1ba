#include "pgather/analysis.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace pgather {

std::optional<Round> detect_perpetual_gathering(const Trace& trace, std::int64_t tail_window) {
    if (tail_window < trace.modulus) {
        throw std::invalid_argument("tail window " + std::to_string(tail_window) + " is below the modulus " +
                                    std::to_string(trace.modulus));
    }
    const auto len = static_cast<std::int64_t>(trace.records.size());
    if (len < tail_window) {
        throw InsufficientHorizon("trace has " + std::to_string(len) + " rounds, fewer than the tail window " +
                                  std::to_string(tail_window));
    }
    auto gathered = [&](const TraceRecord& rec) {
        std::optional<NodeIndex> where;
        for (const auto& a : rec.agents) {
            if (a.byzantine) continue;
            if (where && *where != a.location) return false;
            where = a.location;
        }
        return true;
    };
    std::int64_t i = len;
    while (i > 0 && gathered(trace.records[static_cast<std::size_t>(i - 1)])) {
        --i;
    }
    if (i == len) {
        return std::nullopt;
    }
    const Round first = trace.records[static_cast<std::size_t>(i)].round;
    const Round last = trace.records.back().round;
    if (last < first + tail_window) {
        return std::nullopt;
    }
    return first;
}

std::string to_string(Invariant which) {
    switch (which) {
        case Invariant::equal_t_wit: return "equal_t_wit";
        case Invariant::equal_confidence: return "equal_confidence_graph";
        case Invariant::group_consistency: return "group_consistency";
        case Invariant::no_good_distrust: return "no_good_distrust";
        case Invariant::trust_healing: return "trust_healing";
        case Invariant::meeting_window: return "meeting_window";
        case Invariant::interruption_bound: return "interruption_bound";
        case Invariant::row_cap: return "row_cap";
    }
    return "unknown";
}

std::optional<Violation> InvariantReport::earliest() const {
    std::optional<Violation> best;
    for (const auto& [which, v] : first) {
        if (!best || v.round < best->round) best = v;
    }
    return best;
}

std::int64_t interruption_bound(std::uint32_t k, std::uint32_t f) {
    if (f == 0) {
        return k > 0 ? static_cast<std::int64_t>(k) - 1 : 0;
    }
    return 3LL * k * f;
}

namespace {

class Checker {
public:
    explicit Checker(const Trace& t) : t_(t) {
        if (!t.records.empty()) {
            const auto& first = t.records.front().agents;
            for (std::size_t i = 0; i < first.size(); ++i) {
                if (!first[i].byzantine) goods_.push_back(i);
            }
        }
    }

    InvariantReport run() {
        report_.window_bound = interruption_bound(t_.k, t_.f);
        per_round();
        meetings();
        interruptions();
        return std::move(report_);
    }

private:
    void fail(Round r, Invariant which, std::string witness) {
        auto [it, inserted] = report_.first.try_emplace(which, Violation{r, which, witness});
        if (!inserted && r < it->second.round) it->second = Violation{r, which, std::move(witness)};
    }

    static std::string pair(AgentId a, AgentId b) {
        return "agents " + std::to_string(a.value) + " and " + std::to_string(b.value);
    }

    bool fresh(const AgentRecord& a) const { return a.wake != WakeEvent::none; }

    // Round index from which every good agent is active.
    std::size_t all_awake_from() const {
        for (std::size_t ri = 0; ri < t_.records.size(); ++ri) {
            const auto& ag = t_.records[ri].agents;
            if (std::all_of(goods_.begin(), goods_.end(), [&](std::size_t g) { return ag[g].active; })) return ri;
        }
        return t_.records.size();
    }

    void per_round() {
        const auto tau = t_.tau;
        for (std::size_t ri = 0; ri < t_.records.size(); ++ri) {
            const auto& rec = t_.records[ri];
            const Round r = rec.round;
            const auto& ag = rec.agents;
            for (std::size_t x = 0; x < goods_.size(); ++x) {
                const auto& a = ag[goods_[x]];
                if (!a.active) continue;
                if (t_.cap_twit && a.widest_row > t_.K) {
                    fail(r, Invariant::row_cap,
                         "agent " + std::to_string(a.id.value) + " holds a row with " + std::to_string(a.widest_row) +
                             " keys");
                }
                if (r >= 2) {
                    for (auto l : a.anomalies) {
                        if (is_good(l)) {
                            fail(r, Invariant::no_good_distrust,
                                 "agent " + std::to_string(a.id.value) + " set value 1 for good agent " +
                                     std::to_string(l.value));
                        }
                    }
                }
                for (std::size_t y = x + 1; y < goods_.size(); ++y) {
                    const auto& b = ag[goods_[y]];
                    if (!b.active || b.location != a.location) continue;
                    if (a.t_wit_digest != b.t_wit_digest) {
                        fail(r, Invariant::equal_t_wit, pair(a.id, b.id) + " co-located with different T_wit");
                    }
                    if (a.cg_digest != b.cg_digest) {
                        fail(r, Invariant::equal_confidence,
                             pair(a.id, b.id) + " co-located with different confidence graphs");
                    }
                }
                if (ri + 1 >= t_.records.size()) continue;
                const auto& next = t_.records[ri + 1].agents[goods_[x]];
                if (!next.active || fresh(next)) continue;
                if (r >= 2) {
                    for (auto m : a.group) {
                        if (m != a.id && is_good(m) &&
                            std::find(next.anomalies.begin(), next.anomalies.end(), m) != next.anomalies.end()) {
                            fail(r + 1, Invariant::group_consistency,
                                 pair(a.id, m) + " grouped at end of round " + std::to_string(r) +
                                     " but anomaly detected next round");
                        }
                    }
                }
                check_healing(r + 1, a, next, tau);
            }
        }
    }

    void check_healing(Round r, const AgentRecord& prev, const AgentRecord& next, std::int64_t tau) {
        auto bad = [&](AgentId l, const std::string& from, const std::string& to) {
            fail(r, Invariant::trust_healing,
                 "agent " + std::to_string(prev.id.value) + " entry for " + std::to_string(l.value) + " went " + from +
                     " -> " + to);
        };
        auto show = [](const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string("absent"); };
        auto lookup = [](const TrustRow& row, AgentId l) -> std::optional<std::int64_t> {
            auto it = row.find(l);
            return it == row.end() ? std::nullopt : std::optional<std::int64_t>(it->second);
        };
        IdSet keys;
        for (const auto& [l, v] : prev.own_row) keys.insert(l);
        for (const auto& [l, v] : next.own_row) keys.insert(l);
        for (auto l : keys) {
            const auto p = lookup(prev.own_row, l);
            const auto q = lookup(next.own_row, l);
            bool ok = false;
            if (!q) {
                ok = !p || *p == tau || t_.cap_twit;
            } else if (*q == 1) {
                ok = true;
            } else if (!p) {
                ok = *q == tau;
            } else {
                ok = *p < tau && *q == *p + 1;
            }
            if (!ok) bad(l, show(p), show(q));
        }
    }

    void meetings() {
        const auto& recs = t_.records;
        if (recs.empty()) return;
        const std::size_t start = t_.staggered ? all_awake_from() : 0;
        const auto tau = t_.tau;
        for (std::size_t x = 0; x < goods_.size(); ++x) {
            for (std::size_t y = x + 1; y < goods_.size(); ++y) {
                // next_meet = index of the next co-location at or after ri.
                std::optional<std::size_t> next_meet;
                for (std::size_t ri = recs.size(); ri-- > start;) {
                    const auto& ag = recs[ri].agents;
                    if (ag[goods_[x]].location == ag[goods_[y]].location) next_meet = ri;
                    const auto r = recs[ri].round;
                    if (r + tau > recs.back().round) continue;  // window not fully recorded
                    const std::int64_t wait =
                        next_meet ? static_cast<std::int64_t>(*next_meet - ri) : recs.back().round - r + 1;
                    report_.max_meeting_gap = std::max(report_.max_meeting_gap, wait);
                    if (wait > tau) {
                        fail(r, Invariant::meeting_window,
                             pair(ag[goods_[x]].id, ag[goods_[y]].id) + " do not meet within [" + std::to_string(r) +
                                 ", " + std::to_string(r + tau) + "]");
                    }
                }
            }
        }
    }

    void interruptions() {
        const auto& recs = t_.records;
        const std::size_t start = t_.staggered ? all_awake_from() : 0;
        const auto width = t_.tau + 1;  // rounds r..r+tau inclusive
        for (auto g : goods_) {
            std::deque<Round> window;
            for (std::size_t ri = std::max<std::size_t>(start, 1); ri < recs.size(); ++ri) {
                const auto& now = recs[ri].agents[g];
                const auto& before = recs[ri - 1].agents[g];
                const Round r = recs[ri].round;
                if (r < 2 || !now.active || !before.active || fresh(now)) continue;
                if (now.seed != before.seed || now.reset) {
                    window.push_back(r);
                    while (window.front() <= r - width) window.pop_front();
                    const auto count = static_cast<std::int64_t>(window.size());
                    report_.max_window_events = std::max(report_.max_window_events, count);
                    if (count > report_.window_bound) {
                        fail(r, Invariant::interruption_bound,
                             "agent " + std::to_string(now.id.value) + " had " + std::to_string(count) +
                                 " seed changes/resets in [" + std::to_string(window.front()) + ", " +
                                 std::to_string(r) + "]");
                    }
                }
            }
        }
    }

    bool is_good(AgentId id) const {
        return std::binary_search(t_.goods.begin(), t_.goods.end(), id);
    }

    const Trace& t_;
    std::vector<std::size_t> goods_;
    InvariantReport report_;
};

}  // namespace

InvariantReport check_invariants(const Trace& trace) { return Checker(trace).run(); }

std::string metrics_csv_header() {
    return "scenario,n,k,f,tau,convergence_round,max_seed_changes_per_window,invariant_status";
}

std::string to_csv(const MetricsRow& row) {
    std::ostringstream out;
    out << row.scenario << ',' << row.n << ',' << row.k << ',' << row.f << ',' << row.tau << ','
        << (row.convergence ? std::to_string(*row.convergence) : std::string("none")) << ','
        << row.max_window_events << ',' << row.status;
    return out.str();
}

}  // namespace pgather
