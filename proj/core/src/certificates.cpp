#include "pgather/certificates.hpp"

#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

namespace pgather {

CertificateBundle certify_box(const GraphFamily& family, std::uint32_t max_nodes, std::uint32_t max_label,
                              const CertifyOptions& options) {
    auto seq = search_sequence(family, max_nodes, options.max_len, SearchOptions{options.seed, options.draws});
    RenSchedule schedule(seq, max_label);
    std::vector<std::uint32_t> labels(max_label);
    std::iota(labels.begin(), labels.end(), 1U);

    std::int64_t offsets = 2 * schedule.period();
    for (;;) {
        auto result = certify_rendezvous(schedule, labels, family, offsets);
        if (auto* cx = std::get_if<RendezvousCounterexample>(&result)) {
            throw CertificateError("rendezvous certification failed: " + cx->describe());
        }
        auto table = std::get<TrenTable>(std::move(result));
        if (!table.covers_modulus()) {
            offsets = table.modulus;
            continue;
        }
        if (auto cx = verify_rendezvous(schedule, table, family)) {
            throw CertificateError("rendezvous table failed re-verification: " + cx->describe());
        }
        CertificateBundle bundle{seq, table, nullptr};
        bundle.schedule = std::make_shared<const RenSchedule>(schedule.with_table(std::move(table)));
        return bundle;
    }
}

CertificateStore::CertificateStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

CertificateStore CertificateStore::from_environment() {
    const char* env = std::getenv("PGATHER_CERT_DIR");
    return CertificateStore(env && *env ? std::filesystem::path(env) : std::filesystem::path("certs"));
}

std::filesystem::path CertificateStore::exploration_path(const GraphFamily& family, std::uint32_t max_nodes) const {
    return dir_ / ("explore-" + family.hash() + "-N" + std::to_string(max_nodes) + ".txt");
}

std::filesystem::path CertificateStore::tren_path(const GraphFamily& family, std::uint32_t max_nodes,
                                                  std::uint32_t max_label) const {
    return dir_ / ("tren-" + family.hash() + "-N" + std::to_string(max_nodes) + "-L" + std::to_string(max_label) +
                   ".txt");
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
    // Write-then-rename so concurrent readers never observe a partial file.
    const auto tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw CertificateError("cannot write " + tmp);
        out << text;
    }
    std::filesystem::rename(tmp, p);
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw CertificateError("cannot read " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

void CertificateStore::save(const GraphFamily& family, const CertificateBundle& bundle) const {
    std::filesystem::create_directories(dir_);
    const auto n = static_cast<std::uint32_t>(bundle.exploration.max_nodes);
    write_file(exploration_path(family, n), serialize(bundle.exploration));
    write_file(tren_path(family, n, bundle.tren.max_label()), serialize(bundle.tren));
}

CertificateBundle CertificateStore::load(const GraphFamily& family, std::uint32_t max_nodes,
                                         std::uint32_t max_label) const {
    const std::string hint = " (run `pgather certify --family '" + family.description() + "' --max-nodes " +
                             std::to_string(max_nodes) + " --labels " + std::to_string(max_label) +
                             "` with PGATHER_CERT_DIR=" + dir_.string() + ")";
    const auto ep = exploration_path(family, max_nodes);
    const auto tp = tren_path(family, max_nodes, max_label);
    if (!std::filesystem::exists(ep) || !std::filesystem::exists(tp)) {
        throw CertificateError("no certificate for family '" + family.description() + "' with N=" +
                               std::to_string(max_nodes) + " and labels 1.." + std::to_string(max_label) + hint);
    }
    auto seq = parse_exploration(read_file(ep));
    auto table = parse_tren(read_file(tp));
    if (seq.family_hash != family.hash() || table.family_hash != family.hash()) {
        throw CertificateError("stale certificate: family hash changed from " + seq.family_hash + " to " +
                               family.hash() + "; re-certification required" + hint);
    }
    if (seq.max_nodes != max_nodes) {
        throw CertificateError("exploration certificate is for N=" + std::to_string(seq.max_nodes) + hint);
    }
    auto check = certify(seq.offsets, family, seq.certified_bound);
    if (auto* fail = std::get_if<CoverageFailure>(&check)) {
        throw CertificateError("exploration certificate does not hold: " + fail->describe() + hint);
    }
    seq.family_description = family.description();
    RenSchedule schedule(seq, max_label);
    if (!table.covers_modulus()) {
        throw CertificateError("t_ren table does not cover offsets up to its modulus" + hint);
    }
    if (auto cx = verify_rendezvous(schedule, table, family)) {
        throw CertificateError("t_ren table does not hold: " + cx->describe() + hint);
    }
    CertificateBundle bundle{seq, table, nullptr};
    bundle.schedule = std::make_shared<const RenSchedule>(schedule.with_table(std::move(table)));
    return bundle;
}

}  // namespace pgather
