// pgather: run, certify, batch and demo front end.
//
// Exit status: 0 success, 1 property violation, 2 configuration or
// certification error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <numeric>

#include "pgather/demo.hpp"
#include "pgather/harness.hpp"
#include "pgather/hash.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kConfigError = 2;

struct Common {
    std::optional<pgather::Round> horizon;
    std::optional<std::string> wake_schedule;
    bool cap_twit = false;
    std::string metrics_out;
};

pgather::CertificateBundle load_certs(const pgather::Scenario& s) {
    const auto family = pgather::resolve_family(s);
    return pgather::CertificateStore::from_environment().load(family, s.bounds.N, 1U << (s.bounds.lambda_g + 1));
}

void write_metrics(const std::string& path, const std::vector<pgather::MetricsRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw pgather::ConfigError("cannot write metrics to " + path);
    out << pgather::metrics_csv_header() << '\n';
    for (const auto& r : rows) out << pgather::to_csv(r) << '\n';
}

int cmd_run(const std::string& file, const Common& common, std::optional<std::uint64_t> corrupt_seed,
            const std::string& trace_out) {
    auto scenario = pgather::load_scenario(file);
    const auto certs = load_certs(scenario);
    pgather::RunOptions opts;
    opts.horizon = common.horizon;
    opts.wake_schedule = common.wake_schedule;
    opts.cap_twit = common.cap_twit;
    opts.corrupt_seed = corrupt_seed;
    const auto outcome = pgather::run_scenario(std::move(scenario), certs, opts);
    std::cout << outcome.summary() << '\n';
    std::cout << "trace digest " << pgather::to_hex(outcome.trace.digest()) << '\n';
    if (!trace_out.empty()) {
        std::ofstream out(trace_out, std::ios::trunc);
        if (!out) throw pgather::ConfigError("cannot write trace to " + trace_out);
        pgather::write_jsonl(outcome.trace, out);
    }
    if (!common.metrics_out.empty()) write_metrics(common.metrics_out, {outcome.metrics});
    return outcome.success() ? kOk : kViolation;
}

int cmd_batch(const std::string& file, const Common& common, const std::string& seeds_text, std::size_t repeat) {
    const auto scenario = pgather::load_scenario(file);
    const auto certs = load_certs(scenario);
    std::vector<std::uint64_t> seeds;
    if (!seeds_text.empty()) {
        seeds = pgather::parse_seed_list(seeds_text);
    } else {
        seeds.resize(repeat);
        std::iota(seeds.begin(), seeds.end(), 1ULL);
    }
    if (repeat != 0 && seeds.size() != repeat) {
        throw pgather::ConfigError("--repeat " + std::to_string(repeat) + " disagrees with " +
                                   std::to_string(seeds.size()) + " corrupt seeds");
    }
    pgather::RunOptions opts;
    opts.horizon = common.horizon;
    opts.wake_schedule = common.wake_schedule;
    opts.cap_twit = common.cap_twit;
    const auto outcomes = pgather::run_batch(scenario, certs, opts, seeds);
    std::vector<pgather::MetricsRow> rows;
    bool all_ok = true;
    std::cout << pgather::metrics_csv_header() << '\n';
    for (const auto& o : outcomes) {
        rows.push_back(o.metrics);
        all_ok = all_ok && o.success();
        std::cout << pgather::to_csv(o.metrics) << '\n';
    }
    if (!common.metrics_out.empty()) write_metrics(common.metrics_out, rows);
    return all_ok ? kOk : kViolation;
}

int cmd_certify(const std::string& family_spec, std::uint32_t max_nodes, std::uint32_t labels, std::size_t budget,
                std::uint32_t K, std::uint32_t F, std::uint32_t lambda_g) {
    if (budget == 0) throw pgather::ConfigError("--budget must be positive");
    const auto family = pgather::GraphFamily::parse(family_spec);
    pgather::CertifyOptions opts;
    opts.max_len = budget;
    const auto bundle = pgather::certify_box(family, max_nodes, labels, opts);
    const auto store = pgather::CertificateStore::from_environment();
    store.save(family, bundle);
    std::cout << "family " << family.description() << " hash " << family.hash() << " (" << family.graphs().size()
              << " graphs)\n";
    std::cout << "exploration X=" << bundle.exploration.certified_bound << " N=" << bundle.exploration.max_nodes
              << " -> " << store.exploration_path(family, max_nodes).string() << '\n';
    std::cout << "schedule period " << bundle.schedule->period() << ", cyclic meeting bound "
              << bundle.tren.cyclic_bound << ", offsets 0.." << bundle.tren.max_offset << '\n';
    for (const auto& [l, t] : bundle.tren.t_ren) std::cout << "t_ren(" << l << ") = " << t << '\n';
    std::cout << "modulus " << bundle.tren.modulus << " -> " << store.tren_path(family, max_nodes, labels).string()
              << '\n';
    if (K > 0) {
        const pgather::Bounds b{max_nodes, K, F, lambda_g};
        std::cout << "tau for K=" << K << " F=" << F << ": " << pgather::compute_tau(b, bundle.tren.modulus) << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-stabilizing perpetual gathering simulator with weakly Byzantine agents"};
    app.require_subcommand(1);
    Common common;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--horizon", common.horizon, "Rounds to simulate");
        sub->add_option("--wake-schedule", common.wake_schedule,
                        "simultaneous | on_visit | staggered:SEED | explicit:ID=D,...");
        sub->add_flag("--cap-twit", common.cap_twit, "Enable the memory-capped T_wit variant");
        sub->add_option("--metrics-out", common.metrics_out, "Write metrics CSV here");
    };

    std::string scenario_file;
    std::optional<std::uint64_t> corrupt_seed;
    std::string trace_out;
    auto* run = app.add_subcommand("run", "Run one scenario and check convergence and invariants");
    run->add_option("scenario", scenario_file, "Scenario JSON file")->required();
    run->add_option("--corrupt-seed", corrupt_seed, "Start from pseudorandom corrupted memory");
    run->add_option("--trace-out", trace_out, "Write the JSONL trace here");
    add_common(run);

    std::string seeds_text;
    std::size_t repeat = 0;
    auto* batch = app.add_subcommand("batch", "Run a scenario over many corruption seeds");
    batch->add_option("scenario", scenario_file, "Scenario JSON file")->required();
    batch->add_option("--corrupt-seeds", seeds_text, "Seeds as a..b or a,b,c");
    batch->add_option("--repeat", repeat, "Number of runs (seeds 1..repeat when no seed list is given)");
    add_common(batch);

    std::string family_spec = pgather::GraphFamily::bundled_spec();
    std::uint32_t max_nodes = 6;
    std::uint32_t labels = 8;
    std::size_t budget = 256;
    std::uint32_t K = 0;
    std::uint32_t F = 0;
    std::uint32_t lambda_g = 2;
    auto* certify = app.add_subcommand("certify", "Certify exploration and rendezvous for a parameter box");
    certify->add_option("--family", family_spec, "Family spec, e.g. ring:4-6,line:4-6 or bundled");
    certify->add_option("--max-nodes", max_nodes, "N");
    certify->add_option("--labels", labels, "Certify labels 1..L (L = 2^(lambda_g+1))");
    certify->add_option("--budget", budget, "Maximum exploration sequence length");
    certify->add_option("--K", K, "Print tau for this K");
    certify->add_option("--F", F, "Print tau for this F");
    certify->add_option("--lambda-g", lambda_g, "Only used to report tau");

    std::string which;
    auto* demo = app.add_subcommand("demo", "Impossibility demonstrations with a terminating strawman");
    demo->add_option("which", which, "ring | glued | t3")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(scenario_file, common, corrupt_seed, trace_out);
        if (*batch) return cmd_batch(scenario_file, common, seeds_text, repeat);
        if (*certify) return cmd_certify(family_spec, max_nodes, labels, budget, K, F, lambda_g);
        if (*demo) {
            const auto report = pgather::run_demo(which);
            for (const auto& line : report.narrative) std::cout << line << '\n';
            std::cout << (report.failure_exhibited ? "failure exhibited" : "failure NOT exhibited") << '\n';
            return report.failure_exhibited ? kOk : kViolation;
        }
    } catch (const pgather::CertificateError& e) {
        std::cerr << "certification error: " << e.what() << '\n';
        return kConfigError;
    } catch (const pgather::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const pgather::GraphError& e) {
        std::cerr << "graph error: " << e.what() << '\n';
        return kConfigError;
    } catch (const pgather::ExplorationError& e) {
        std::cerr << "certification error: " << e.what() << '\n';
        return kConfigError;
    } catch (const pgather::RendezvousError& e) {
        std::cerr << "certification error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kOk;
}
