#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "bench.hpp"
#include "dynev/io.hpp"

using namespace dynev;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DYNEV_CLI) + " " + args;
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "dynev_tests";
  fs::create_directories(d);
  return d / name;
}

GeneratedStream i2_drain() {
  return {SparseSymMatrix::identity(2), {SparseVector::unit(2, 0), SparseVector::unit(2, 1)}};
}

}  // namespace

TEST(RunTracker, I2DrainGoesToZero) {
  auto r = bench::run_tracker(i2_drain(), {0.2, 1, PowerKernel::kAuto, true, false});
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows.back().lambda, 0.0);
  EXPECT_GE(r.summary.recompute_count, 2u);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_TRUE(r.summary.zero_mode);
}

TEST(RunTracker, SummaryEqualsColumnSums) {
  auto s = generate({StreamMode::kCholeskyDrain, 30, 90, 0.1, 3, 0.1, 0});
  auto r = bench::run_tracker(s, {0.1, 2, PowerKernel::kAuto, true, false});
  ASSERT_EQ(r.rows.size(), 91u);
  std::size_t rc = 0;
  std::uint64_t touched = 0;
  for (const auto& row : r.rows) {
    rc += row.recomputes;
    touched += row.touched;
  }
  EXPECT_EQ(rc, r.summary.recompute_count);
  EXPECT_EQ(touched, r.summary.total_touched_nnz);
  EXPECT_EQ(r.rows.back().epoch, r.summary.epochs);
  EXPECT_EQ(r.violations, 0u);
}

TEST(RunTracker, VerifyRefusesLargeN) {
  GeneratedStream s{SparseSymMatrix::identity(600), {}};
  EXPECT_THROW(bench::run_tracker(s, {0.1, 1, PowerKernel::kAuto, true, false}), std::invalid_argument);
}

TEST(RunTracker, CsvSchema) {
  auto r = bench::run_tracker(i2_drain(), {0.2, 1, PowerKernel::kAuto, false, false});
  std::ostringstream out;
  bench::write_run_csv(out, r);
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, s.find('\n')),
            "t,lambda_t,oracle_lambda_max,witness_quality,recompute_flag,epoch,touched_nnz");
  EXPECT_NE(s.find("nan"), std::string::npos);
  std::ostringstream js;
  bench::write_run_json(js, r);
  auto j = nlohmann::json::parse(js.str());
  EXPECT_EQ(j.at("T").get<std::size_t>(), 2u);
}

TEST(CheckStep, Tolerances) {
  EXPECT_FALSE(bench::check_step(0.1, 0.95, 0.95, 1.0));
  EXPECT_TRUE(bench::check_step(0.1, 0.85, 0.95, 1.0));
  EXPECT_TRUE(bench::check_step(0.1, 1.01, 1.01, 1.0));
  EXPECT_TRUE(bench::check_step(0.1, 0.95, 0.5, 1.0));
  EXPECT_FALSE(bench::check_step(0.1, 1.0 + 5e-10, 1.0, 1.0));
}

TEST(Sweep, ZeroLengthStreamsRecomputeOnce) {
  bench::SweepOptions o;
  o.ns = {16, 32};
  o.epss = {0.2};
  o.trials = 2;
  o.fixed_T = 0;
  for (const auto& row : bench::run_sweep(o)) {
    EXPECT_EQ(row.T, 0u);
    EXPECT_DOUBLE_EQ(row.mean_recompute, 1.0);
    EXPECT_EQ(row.max_recompute, 1u);
  }
}

TEST(Sweep, RatioColumn) {
  bench::SweepOptions o;
  o.ns = {16};
  o.epss = {0.2};
  o.trials = 2;
  auto rows = bench::run_sweep(o);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_DOUBLE_EQ(rows[0].bound, bench::recompute_bound(16, 0.2));
  EXPECT_DOUBLE_EQ(rows[0].ratio, rows[0].mean_recompute / rows[0].bound);
  std::ostringstream out;
  bench::write_sweep_csv(out, rows);
  EXPECT_EQ(out.str().rfind("n,eps,T,", 0), 0u);
}

TEST(DefaultSeed, ReadsEnvironment) {
  ::setenv("DYNEV_SEED", "1234", 1);
  EXPECT_EQ(bench::default_seed(), 1234u);
  ::setenv("DYNEV_SEED", "junk", 1);
  EXPECT_EQ(bench::default_seed(7), 7u);
  ::unsetenv("DYNEV_SEED");
  EXPECT_EQ(bench::default_seed(7), 7u);
}

TEST(Cli, RunVerifyExample) {
  const auto csv = scratch("run_verify.csv");
  const auto js = scratch("run_verify.json");
  EXPECT_EQ(run_cli("run --gen cholesky-drain --n 50 --T 200 --eps 0.1 --seed 7 --verify --csv " +
                    csv.string() + " --json " + js.string()),
            0);
  auto j = nlohmann::json::parse(slurp(js));
  EXPECT_EQ(j.at("violations").get<std::size_t>(), 0u);
}

TEST(Cli, I2DrainFromFiles) {
  const auto m = scratch("i2.mtx");
  const auto s = scratch("i2.jsonl");
  const auto csv = scratch("i2.csv");
  const auto js = scratch("i2.json");
  {
    std::ofstream a(m), b(s);
    auto g = i2_drain();
    write_matrix_market(a, g.a0);
    write_update_stream(b, g.updates);
  }
  ASSERT_EQ(run_cli("run --matrix " + m.string() + " --stream " + s.string() +
                    " --eps 0.2 --seed 1 --csv " + csv.string() + " --json " + js.string()),
            0);
  auto j = nlohmann::json::parse(slurp(js));
  EXPECT_GE(j.at("recompute_count").get<std::size_t>(), 2u);
  const std::string text = slurp(csv);
  const auto last = text.substr(text.rfind('\n', text.size() - 2) + 1);
  EXPECT_EQ(last.rfind("2,0,", 0), 0u) << last;
}

TEST(Cli, ByteIdenticalCsv) {
  const auto a = scratch("det_a.csv");
  const auto b = scratch("det_b.csv");
  const std::string args = "run --gen eig-drain --n 24 --T 96 --eps 0.2 --seed 11 --json /dev/null --csv ";
  ASSERT_EQ(run_cli(args + a.string()), 0);
  ASSERT_EQ(run_cli(args + b.string()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
}

TEST(Cli, SeedFromEnvironment) {
  const auto a = scratch("env_a.csv");
  const auto b = scratch("env_b.csv");
  ASSERT_EQ(run_cli("run --gen cholesky-drain --n 20 --T 40 --eps 0.2 --seed 5 --json /dev/null --csv " +
                    a.string()),
            0);
  ::setenv("DYNEV_SEED", "5", 1);
  ASSERT_EQ(run_cli("run --gen cholesky-drain --n 20 --T 40 --eps 0.2 --json /dev/null --csv " + b.string()), 0);
  ::unsetenv("DYNEV_SEED");
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Cli, CheckPsdExitCodes) {
  const auto good = scratch("psd.mtx");
  const auto bad = scratch("notpsd.mtx");
  const auto x = scratch("x.mtx");
  {
    std::ofstream g(good), b(bad);
    write_matrix_market(g, SparseSymMatrix::identity(5));
    write_matrix_market(b, SparseSymMatrix::diagonal({1, -1}));
  }
  fs::remove(x);
  EXPECT_EQ(run_cli("checkpsd --matrix " + good.string() + " --delta 0.2 --kappa 1 --seed 1 --out " +
                    x.string() + " > /dev/null"),
            0);
  std::ifstream xin(x);
  const DenseMatrix xm = read_matrix_market_dense(xin);
  EXPECT_EQ(xm.rows(), 5);
  EXPECT_LE((DenseMatrix::Identity(5, 5) - xm * xm.transpose()).norm(), 0.2 * std::sqrt(5.0));
  EXPECT_EQ(run_cli("checkpsd --matrix " + bad.string() + " --delta 0.1 --kappa 2 > /dev/null"), 1);
  EXPECT_EQ(run_cli("checkpsd --matrix /nonexistent.mtx > /dev/null 2>&1"), 2);
  EXPECT_EQ(run_cli("checkpsd --matrix " + good.string() + " --delta 2 > /dev/null 2>&1"), 2);
}

TEST(Cli, ParseErrorsExit2) {
  const auto m = scratch("broken.jsonl");
  const auto a = scratch("id3.mtx");
  {
    std::ofstream s(m), am(a);
    s << "{\"t\":1,\"idx\":[0],\"val\":[1]}\n{\"t\":2,\"idx\":[7],\"val\":[1]}\n";
    write_matrix_market(am, SparseSymMatrix::identity(3));
  }
  EXPECT_EQ(run_cli("run --matrix " + a.string() + " --stream " + m.string() + " > /dev/null 2>&1"), 2);
}

TEST(Cli, GenRoundTripAndProfile) {
  const auto m = scratch("gen.mtx");
  const auto s = scratch("gen.jsonl");
  const auto p = scratch("prof.csv");
  ASSERT_EQ(run_cli("gen --mode eig-drain --n 16 --T 64 --seed 3 --matrix-out " + m.string() +
                    " --stream-out " + s.string()),
            0);
  auto g = generate({StreamMode::kEigDrain, 16, 64, 0.1, 3, 0.1, 0});
  std::ifstream min(m), sin(s);
  EXPECT_TRUE(read_matrix_market(min).to_dense().isApprox(g.a0.to_dense(), 1e-15));
  auto ups = read_update_stream(sin, 16);
  ASSERT_EQ(ups.size(), 64u);
  EXPECT_EQ(run_cli("profile --matrix " + m.string() + " --stream " + s.string() + " --eps 0.2 --csv " +
                    p.string() + " > /dev/null"),
            0);
  EXPECT_EQ(slurp(p).rfind("event,j,Phi_j\n", 0), 0u);
}
