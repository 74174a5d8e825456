#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mems/cli.hpp"
#include "mems/io.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace mems;

namespace {

struct CliResult {
  int status;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::string dir(const std::string& name) {
  const fs::path d = fs::path(MEMSFB_TEST_DIR) / name;
  fs::remove_all(d);
  return d.string();
}

std::string first_line(const std::string& path) {
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  return line;
}

}  // namespace

TEST(Cli, StationaryAtZeroVoltage) {
  const std::string d = dir("stat0");
  const CliResult r = run({"stationary", "--lambda", "0", "--nr", "32", "--out", d});
  EXPECT_EQ(r.status, cli::kOk) << r.err;
  std::istringstream in(read_file(d + "/u.csv"));
  const auto [rr, u] = read_field_csv(in);
  EXPECT_EQ(rr.size(), 33);
  EXPECT_EQ(u.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(first_line(d + "/phi.csv"), "r,eta,phi");
  EXPECT_TRUE(fs::exists(d + "/summary.json"));
  EXPECT_TRUE(fs::exists(d + "/run.log"));
  EXPECT_NE(read_file(d + "/effective_config.txt").find("lambda"), std::string::npos);
}

TEST(Cli, StationaryAndVerifyRoundTrip) {
  const std::string d = dir("stat");
  ASSERT_EQ(run({"stationary", "--lambda", "0.5", "--nr", "32", "--neta", "16", "--out", d}).status, cli::kOk);
  const std::string v = dir("verify");
  const CliResult r = run({"verify", "--lambda", "0.5", "--neta", "16", "--input", d + "/u.csv", "--out", v});
  EXPECT_EQ(r.status, cli::kOk) << r.out << r.err;
  EXPECT_NE(r.out.find("pass"), std::string::npos);
  const CliResult wrong = run({"verify", "--lambda", "0.7", "--neta", "16", "--input", d + "/u.csv", "--out", v});
  EXPECT_EQ(wrong.status, cli::kViolation);
}

TEST(Cli, NavierEigenvalue) {
  const std::string d = dir("eigen");
  const CliResult r = run({"eigen", "--sigma", "1", "--out", d});
  EXPECT_EQ(r.status, cli::kOk) << r.err;
  const double j = mems::testing::bessel_j01();
  const std::string s = read_file(d + "/summary.json");
  const auto pos = s.find("\"mu1\": ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_NEAR(std::stod(s.substr(pos + 7)) / std::pow(j, 4), 1.0, 1e-3);
  EXPECT_EQ(first_line(d + "/phi1.csv"), "r,phi1");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"bogus"}).status, cli::kUsage);
  EXPECT_EQ(run({}).status, cli::kUsage);
  EXPECT_EQ(run({"stationary", "--nr", "4", "--out", dir("small")}).status, cli::kUsage);
  EXPECT_EQ(run({"stationary", "--beta", "-1", "--out", dir("beta")}).status, cli::kUsage);
  EXPECT_EQ(run({"stationary", "--method", "secant", "--out", dir("method")}).status, cli::kUsage);
  EXPECT_EQ(run({"stationary", "--config", "/nonexistent.cfg", "--out", dir("cfg")}).status, cli::kUsage);
  EXPECT_EQ(run({"verify", "--out", dir("noinput")}).status, cli::kUsage);
  EXPECT_EQ(run({"stationary", "--frobnicate", "1"}).status, cli::kUsage);
}

TEST(Cli, ConfigFileIsOverriddenByFlags) {
  const std::string d = dir("config");
  fs::create_directories(d);
  write_file(d + "/run.cfg", "lambda = 0.3\nnr = 32\nneta = 16\n");
  ASSERT_EQ(run({"stationary", "--config", d + "/run.cfg", "--lambda", "0", "--out", d}).status, cli::kOk);
  const std::string eff = read_file(d + "/effective_config.txt");
  EXPECT_NE(eff.find("lambda=0\n"), std::string::npos);
  EXPECT_NE(eff.find("nr=32\n"), std::string::npos);
  write_file(d + "/bad.cfg", "lambda = abc\n");
  EXPECT_EQ(run({"stationary", "--config", d + "/bad.cfg", "--out", d}).status, cli::kUsage);
}

TEST(Cli, UnwritableOutputDirectory) {
  EXPECT_EQ(run({"eigen", "--nr", "32", "--out", "/proc/memsfb"}).status, cli::kIo);
}

TEST(Cli, DeterministicOutputs) {
  const std::string a = dir("det_a"), b = dir("det_b");
  for (const auto& d : {a, b}) {
    ASSERT_EQ(run({"energy", "--lambda", "0.5", "--nr", "32", "--neta", "16", "--out", d}).status, cli::kOk);
  }
  EXPECT_EQ(read_file(a + "/summary.json"), read_file(b + "/summary.json"));
}

TEST(Cli, EvolveAndMms) {
  const std::string d = dir("evolve");
  ASSERT_EQ(run({"evolve", "--lambda", "0.5", "--nr", "32", "--neta", "16", "--t-final", "0.5", "--out", d}).status,
            cli::kOk);
  EXPECT_EQ(first_line(d + "/evolve.csv"), "t,u_min,error,energy");
  EXPECT_NE(read_file(d + "/summary.json").find("\"outcome\": \"converged\""), std::string::npos);
  const std::string m = dir("mms");
  EXPECT_EQ(run({"mms", "--eps", "0.5", "--nr", "32", "--out", m}).status, cli::kOk);
  EXPECT_EQ(first_line(m + "/mms.csv"), "n,error,order");
}
