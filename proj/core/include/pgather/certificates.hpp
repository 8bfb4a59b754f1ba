#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>

#include "pgather/exploration.hpp"
#include "pgather/family.hpp"
#include "pgather/rendezvous.hpp"

namespace pgather {

class CertificateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Certified artifacts for one box (family, N, label range 1..L).
struct CertificateBundle {
    ExplorationSequence exploration;
    TrenTable tren;
    std::shared_ptr<const RenSchedule> schedule;
};

struct CertifyOptions {
    std::size_t max_len = 256;  // exploration search budget
    std::uint64_t seed = 1;
    std::size_t draws = 32;
};

/// Searches an exploration sequence, certifies rendezvous for labels
/// 1..max_label over offsets 0..modulus (growing the offset range until it
/// reaches the modulus) and re-verifies the resulting table.
CertificateBundle certify_box(const GraphFamily& family, std::uint32_t max_nodes, std::uint32_t max_label,
                              const CertifyOptions& options = {});

/// Directory of certificate files, content-addressed by family hash and box.
/// Loading re-checks both certificates before handing out a schedule.
class CertificateStore {
public:
    explicit CertificateStore(std::filesystem::path dir);

    /// PGATHER_CERT_DIR if set, else ./certs.
    static CertificateStore from_environment();

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path exploration_path(const GraphFamily& family, std::uint32_t max_nodes) const;
    std::filesystem::path tren_path(const GraphFamily& family, std::uint32_t max_nodes, std::uint32_t max_label) const;

    void save(const GraphFamily& family, const CertificateBundle& bundle) const;

    /// Throws CertificateError with re-certification instructions when the box
    /// is missing, stale (hash mismatch) or fails re-verification.
    CertificateBundle load(const GraphFamily& family, std::uint32_t max_nodes, std::uint32_t max_label) const;

private:
    std::filesystem::path dir_;
};

}  // namespace pgather
