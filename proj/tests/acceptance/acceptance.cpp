// Acceptance run: one PASS/FAIL line per criterion, exact bounds, no tolerance.

#include <chrono>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "pgather/engine.hpp"

namespace pg = pgather;
using pg::testing::source_dir;

namespace {

constexpr int kSeeds = 50;

struct Line {
    int criterion;
    bool pass;
    std::string detail;
};

std::vector<Line> lines;

void emit(int criterion, bool pass, const std::string& detail) {
    lines.push_back({criterion, pass, detail});
    std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << "  " << detail << std::endl;
}

std::vector<pg::Scenario> bundled_scenarios() {
    std::vector<pg::Scenario> out;
    for (const auto& e : std::filesystem::directory_iterator(source_dir() / "scenarios")) {
        if (e.path().extension() == ".json") out.push_back(pg::load_scenario(e.path()));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return out;
}

// Aggregate over one family of runs (one start mode, one memory variant).
struct Tally {
    std::size_t runs = 0;
    std::size_t late = 0;  // not converged within the bound
    std::int64_t worst_margin = std::numeric_limits<std::int64_t>::max();  // bound - convergence
    std::map<pg::Invariant, std::size_t> violations;
    std::map<pg::Invariant, std::string> first_witness;
    std::int64_t max_window_events = 0;
    std::int64_t max_window_bound = 0;
    std::int64_t max_gap = 0;
    std::set<std::string> strategies;
    std::string first_failure;

    void add(const pg::RunOutcome& o) {
        ++runs;
        if (!o.converged_in_bound()) {
            ++late;
            if (first_failure.empty()) first_failure = o.summary();
        } else {
            worst_margin = std::min(worst_margin, o.bound - *o.convergence);
        }
        for (const auto& [which, v] : o.report.first) {
            if (violations[which]++ == 0) first_witness[which] = o.scenario.name + " round " + std::to_string(v.round) + ": " + v.witness;
        }
        max_window_events = std::max(max_window_events, o.report.max_window_events);
        max_window_bound = std::max(max_window_bound, o.report.window_bound);
        max_gap = std::max(max_gap, o.report.max_meeting_gap);
        for (const auto& a : o.scenario.agents) {
            if (a.byzantine) strategies.insert(a.byzantine->strategy);
        }
    }

    std::size_t count(std::initializer_list<pg::Invariant> which) const {
        std::size_t n = 0;
        for (auto w : which) {
            if (auto it = violations.find(w); it != violations.end()) n += it->second;
        }
        return n;
    }

    std::string witness(std::initializer_list<pg::Invariant> which) const {
        for (auto w : which) {
            if (auto it = first_witness.find(w); it != first_witness.end()) return " first: " + it->second;
        }
        return "";
    }
};

Tally run_suite(const std::vector<pg::Scenario>& scenarios, const pg::CertificateBundle& certs, bool staggered,
                bool cap) {
    Tally t;
    for (const auto& s : scenarios) {
        std::vector<std::uint64_t> seeds(kSeeds);
        std::iota(seeds.begin(), seeds.end(), 1ULL);
        for (auto seed : seeds) {
            pg::RunOptions o;
            o.corrupt_seed = seed;
            o.cap_twit = cap;
            if (staggered) o.wake_schedule = "staggered:" + std::to_string(seed);
            auto out = pg::run_scenario(s, certs, o);
            out.scenario.name += "#seed" + std::to_string(seed);
            t.add(out);
        }
        pg::RunOptions crafted;
        crafted.crafted = "mutual_distrust";
        crafted.cap_twit = cap;
        if (staggered) crafted.wake_schedule = "staggered:1000";
        auto out = pg::run_scenario(s, certs, crafted);
        out.scenario.name += "#mutual_distrust";
        t.add(out);
    }
    return t;
}

std::string describe(const Tally& t, const std::string& bound) {
    std::ostringstream o;
    o << t.runs << " runs, strategies {";
    bool first = true;
    for (const auto& s : t.strategies) {
        o << (first ? "" : ",") << s;
        first = false;
    }
    o << "}, " << t.late << " beyond " << bound;
    if (t.late == 0) o << ", tightest margin " << t.worst_margin << " rounds";
    if (!t.first_failure.empty()) o << "; first failure: " << t.first_failure;
    return o.str();
}

const std::initializer_list<pg::Invariant> kPerRound{pg::Invariant::equal_t_wit, pg::Invariant::equal_confidence,
                                                     pg::Invariant::group_consistency, pg::Invariant::no_good_distrust,
                                                     pg::Invariant::trust_healing};

// Independent walker over a port graph following the schedule's actions.
std::vector<pg::NodeIndex> walk(const pg::RenSchedule& s, const pg::PortGraph& g, std::uint32_t label,
                                pg::NodeIndex start, std::int64_t length) {
    std::vector<pg::NodeIndex> at{start};
    std::optional<pg::Port> in;
    pg::NodeIndex v = start;
    for (std::int64_t t = 0; t < length; ++t) {
        const auto act = s.action(label, t, static_cast<std::uint32_t>(g.adjacency()[v].size()), in);
        if (act.is_wait()) {
            in.reset();
        } else {
            const auto& he = g.adjacency()[v].at(act.port() - 1);
            v = he.to;
            in = he.reverse;
        }
        at.push_back(v);
    }
    return at;
}

void criterion6(const pg::CertificateBundle& certs, const pg::GraphFamily& fam) {
    const auto& s = *certs.schedule;
    const auto& table = certs.tren;
    bool ok = table.max_label() == 8 && table.max_offset >= table.modulus;
    for (std::uint32_t l = 1; l <= 8; ++l) ok = ok && table.t_ren.contains(l);
    std::size_t checked = 0, failures = 0;
    std::string first;
    const std::int64_t limit = table.modulus;
    for (std::size_t gi = 0; gi < fam.graphs().size(); ++gi) {
        const auto& g = fam.graphs()[gi];
        const auto n = static_cast<pg::NodeIndex>(g.node_count());
        std::vector<std::vector<std::vector<pg::NodeIndex>>> tr(9);
        for (std::uint32_t l = 1; l <= 8; ++l) {
            for (pg::NodeIndex v = 0; v < n; ++v) tr[l].push_back(walk(s, g, l, v, table.modulus + limit));
        }
        for (std::uint32_t a = 1; a <= 8; ++a) {
            for (std::uint32_t b = 1; b <= 8; ++b) {
                if (a == b) continue;
                const auto bound = table.bound_for(std::min(a, b));
                for (std::int64_t d = 0; d <= table.modulus; ++d) {
                    for (pg::NodeIndex u = 0; u < n; ++u) {
                        for (pg::NodeIndex v = 0; v < n; ++v) {
                            ++checked;
                            bool met = false;
                            for (std::int64_t dt = 0; dt <= bound && !met; ++dt) {
                                met = tr[a][u][static_cast<std::size_t>(d + dt)] == tr[b][v][static_cast<std::size_t>(dt)];
                            }
                            if (!met && failures++ == 0) {
                                first = "graph " + std::to_string(gi) + " labels " + std::to_string(a) + "/" +
                                        std::to_string(b) + " offset " + std::to_string(d);
                            }
                        }
                    }
                }
            }
        }
    }
    const bool library_ok = !pg::verify_rendezvous(s, table, fam).has_value();
    const pg::Bounds b{6, 3, 1, 2};
    const bool tau_ok = pg::compute_tau(b, table.bound_for(8)) == 19 * table.bound_for(8) &&
                        pg::Parameters::make(b, 4, 3, 1, certs.schedule).tau == 19 * table.bound_for(8);
    std::ostringstream o;
    o << "labels 1..8, " << fam.graphs().size() << " graphs, offsets 0.." << table.modulus << ": " << checked
      << " tuples, " << failures << " misses; library verifier " << (library_ok ? "ok" : "FAILED")
      << "; tau = 19 * T_REN(8) = " << 19 * table.bound_for(8) << (tau_ok ? "" : " MISMATCH");
    if (!first.empty()) o << "; first miss " << first;
    emit(6, ok && failures == 0 && library_ok && tau_ok, o.str());
}

void criterion7(const pg::CertificateBundle& certs, const pg::GraphFamily& fam) {
    const auto& seq = certs.exploration;
    const auto x = seq.certified_bound;
    std::size_t walks = 0, failures = 0;
    for (const auto& g : fam.graphs()) {
        for (pg::NodeIndex s = 0; s < g.node_count(); ++s) {
            std::vector<std::optional<pg::Port>> ins{std::nullopt};
            for (pg::Port p = 1; p <= g.adjacency()[s].size(); ++p) ins.emplace_back(p);
            for (auto in : ins) {
                ++walks;
                std::set<pg::NodeIndex> seen{s};
                pg::NodeIndex v = s;
                std::uint32_t base = in ? *in - 1 : 0;
                for (std::size_t i = 0; i < x; ++i) {
                    const auto d = static_cast<std::uint32_t>(g.adjacency()[v].size());
                    const auto& he = g.adjacency()[v][(base + seq.offsets[i]) % d];
                    v = he.to;
                    base = he.reverse - 1;
                    seen.insert(v);
                }
                failures += seen.size() != g.node_count();
            }
        }
    }
    emit(7, failures == 0 && seq.family_hash == fam.hash(),
         "X=" + std::to_string(x) + ", " + std::to_string(walks) + " (graph, start, incoming) walks, " +
             std::to_string(failures) + " incomplete");
}

void criterion9(const std::vector<pg::Scenario>& scenarios, const pg::CertificateBundle& certs) {
    std::size_t pairs = 0, mismatched = 0;
    for (const auto& s : scenarios) {
        for (bool cap : {false, true}) {
            pg::RunOptions o;
            o.corrupt_seed = 77;
            o.cap_twit = cap;
            o.wake_schedule = "staggered:5";
            const auto a = pg::run_scenario(s, certs, o).trace.digest();
            const auto b = pg::run_scenario(s, certs, o).trace.digest();
            const auto batch = pg::run_batch(s, certs, o, {77}, 1).front().trace.digest();
            ++pairs;
            mismatched += (a != b) || (a != batch);
        }
    }
    emit(9, mismatched == 0,
         std::to_string(pairs) + " repeated configurations, " + std::to_string(mismatched) + " digest mismatches");
}

}  // namespace

int main() {
    const auto started = std::chrono::steady_clock::now();
    try {
        const auto fam = pg::GraphFamily::bundled();
        const auto certs = pg::CertificateStore(source_dir() / "certs").load(fam, 6, 8);
        const auto scenarios = bundled_scenarios();

        for (const auto& s : scenarios) {
            if (s.agents.size() > 5 || s.bounds.F > 2 || s.bounds.N > 6) {
                std::cerr << "scenario " << s.name << " is outside n <= 6, k <= 5, f <= 2\n";
                return 2;
            }
        }

        const auto simultaneous = run_suite(scenarios, certs, false, false);
        emit(1, simultaneous.late == 0, describe(simultaneous, "2tau+1"));
        const auto staggered = run_suite(scenarios, certs, true, false);
        emit(2, staggered.late == 0, describe(staggered, "3tau+1"));

        const std::initializer_list<pg::Invariant> meeting{pg::Invariant::meeting_window};
        const std::initializer_list<pg::Invariant> interrupt{pg::Invariant::interruption_bound};
        const auto meet_bad = simultaneous.count(meeting) + staggered.count(meeting);
        emit(3, meet_bad == 0,
             std::to_string(simultaneous.runs + staggered.runs) + " runs, " + std::to_string(meet_bad) +
                 " runs with a pair apart longer than tau; longest wait " +
                 std::to_string(std::max(simultaneous.max_gap, staggered.max_gap)) + " rounds" +
                 simultaneous.witness(meeting) + staggered.witness(meeting));
        const auto int_bad = simultaneous.count(interrupt) + staggered.count(interrupt);
        emit(4, int_bad == 0,
             std::to_string(int_bad) + " runs over the bound; max events per tau-window " +
                 std::to_string(std::max(simultaneous.max_window_events, staggered.max_window_events)) +
                 " (largest bound 3kf = " + std::to_string(simultaneous.max_window_bound) + ")" +
                 simultaneous.witness(interrupt) + staggered.witness(interrupt));

        // Mutation: the numRound consensus reset removed must trip a checker.
        std::size_t mutated_caught = 0, mutated_runs = 0;
        for (const auto& s : scenarios) {
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                pg::RunOptions o;
                o.corrupt_seed = seed;
                o.mutation = pg::Mutation::skip_numround_consensus;
                const auto out = pg::run_scenario(s, certs, o);
                ++mutated_runs;
                mutated_caught += !out.report.ok();
            }
        }
        const auto per_round_bad = simultaneous.count(kPerRound) + staggered.count(kPerRound);
        emit(5, per_round_bad == 0 && mutated_caught > 0,
             std::to_string(per_round_bad) + " per-round violations in accepted runs; mutation caught in " +
                 std::to_string(mutated_caught) + "/" + std::to_string(mutated_runs) + " runs" +
                 simultaneous.witness(kPerRound) + staggered.witness(kPerRound));

        criterion6(certs, fam);
        criterion7(certs, fam);

        const auto cap_sim = run_suite(scenarios, certs, false, true);
        const auto cap_stag = run_suite(scenarios, certs, true, true);
        const std::initializer_list<pg::Invariant> all{
            pg::Invariant::equal_t_wit,      pg::Invariant::equal_confidence,  pg::Invariant::group_consistency,
            pg::Invariant::no_good_distrust, pg::Invariant::trust_healing,     pg::Invariant::meeting_window,
            pg::Invariant::interruption_bound};
        const std::initializer_list<pg::Invariant> cap{pg::Invariant::row_cap};
        const auto cap_bad = cap_sim.count(all) + cap_stag.count(all);
        const auto rows_bad = cap_sim.count(cap) + cap_stag.count(cap);
        emit(8, cap_sim.late == 0 && cap_stag.late == 0 && cap_bad == 0 && rows_bad == 0,
             std::to_string(cap_sim.runs + cap_stag.runs) + " capped runs: " + std::to_string(cap_sim.late) +
                 " beyond 2tau+1, " + std::to_string(cap_stag.late) + " beyond 3tau+1, " + std::to_string(cap_bad) +
                 " invariant violations, " + std::to_string(rows_bad) + " runs with a row over K" +
                 cap_sim.witness(all) + cap_stag.witness(all) + cap_sim.witness(cap));

        criterion9(scenarios, certs);
    } catch (const std::exception& e) {
        std::cout << "acceptance aborted: " << e.what() << std::endl;
        return 2;
    }
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.criterion < b.criterion; });
    const auto failed = std::count_if(lines.begin(), lines.end(), [](const Line& l) { return !l.pass; });
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::cout << "summary: " << (lines.size() - static_cast<std::size_t>(failed)) << "/" << lines.size()
              << " criteria passed in " << static_cast<int>(secs) << " s" << std::endl;
    return failed == 0 ? 0 : 1;
}
