#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "fixtures.hpp"

namespace pgather {
namespace {

using namespace pgather::testing;

struct Result {
    int code = -1;
    std::string out;
};

Result cli(const std::string& args, const std::string& cert_dir = (source_dir() / "certs").string()) {
    const std::string cmd = "PGATHER_CERT_DIR='" + cert_dir + "' '" PGATHER_CLI_PATH "' " + args + " 2>&1";
    Result r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 512> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string scenario(const std::string& name) { return "'" + scenario_path(name).string() + "'"; }

TEST(Cli, RunBundledScenarioSucceeds) {
    const auto r = cli("run " + scenario("ring4_k3_f1_lure"));
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("convergence="), std::string::npos);
}

TEST(Cli, RunWritesTraceAndMetrics) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto trace = dir / "pgather-cli-trace.jsonl";
    const auto metrics = dir / "pgather-cli-metrics.csv";
    const auto r = cli("run " + scenario("line6_k2_f0_clean") + " --trace-out '" + trace.string() +
                       "' --metrics-out '" + metrics.string() + "'");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_GT(std::filesystem::file_size(trace), 0U);
    EXPECT_GT(std::filesystem::file_size(metrics), 0U);
    std::filesystem::remove(trace);
    std::filesystem::remove(metrics);
}

TEST(Cli, ShortHorizonIsAViolation) {
    EXPECT_EQ(cli("run " + scenario("ring4_k3_f1_lure") + " --horizon 50").code, 1);
}

TEST(Cli, MissingCertificatesIsConfigError) {
    const auto r = cli("run " + scenario("ring4_k3_f1_lure"), "/nonexistent/pgather-certs");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("certify"), std::string::npos) << r.out;
}

TEST(Cli, OversizedGraphRefused) {
    const auto path = std::filesystem::temp_directory_path() / "pgather-ring7.json";
    {
        std::ofstream out(path);
        out << R"({"version":1,"name":"ring7","graph":{"generator":"ring","size":7},
                   "bounds":{"N":6,"K":2,"F":0,"lambda_g":2},"agents":[{"id":1,"start":0},{"id":2,"start":3}]})";
    }
    EXPECT_EQ(cli("run '" + path.string() + "'").code, 2);
    std::filesystem::remove(path);
}

TEST(Cli, BatchIsByteReproducible) {
    const auto a = cli("batch " + scenario("line6_k2_f0_clean") + " --corrupt-seeds 1..4");
    const auto b = cli("batch " + scenario("line6_k2_f0_clean") + " --corrupt-seeds 1..4");
    EXPECT_EQ(a.code, 0) << a.out;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 5);
}

TEST(Cli, CertifyWritesCertificates) {
    const auto dir = std::filesystem::temp_directory_path() / "pgather-cli-certs";
    std::filesystem::remove_all(dir);
    const auto r = cli("certify --family ring:4-5 --max-nodes 5 --labels 4 --K 2 --F 0", dir.string());
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("t_ren(1)"), std::string::npos);
    EXPECT_NE(r.out.find("tau for K=2"), std::string::npos);
    EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}), 2);
    std::filesystem::remove_all(dir);
}

TEST(Cli, DemosSucceed) {
    for (const auto* which : {"ring", "glued", "t3"}) {
        const auto r = cli(std::string("demo ") + which);
        EXPECT_EQ(r.code, 0) << r.out;
        EXPECT_NE(r.out.find("failure exhibited"), std::string::npos);
    }
}

TEST(Cli, UsageErrorsAreNonZero) {
    EXPECT_NE(cli("").code, 0);
    EXPECT_NE(cli("run").code, 0);
}

}  // namespace
}  // namespace pgather
