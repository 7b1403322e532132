#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparseshare/errors.hpp"
#include "sparseshare/simulator.hpp"

namespace sparseshare {
namespace {

SimConfig small_config(std::uint32_t n, std::uint64_t seed) {
  SimConfig c;
  c.n = n;
  c.q = 89;
  c.rows = 30;
  c.inner = 25;
  c.cols = 20;
  c.seed = seed;
  return c;
}

TEST(Simulator, DecodesAndReportsCosts) {
  const auto r = run_simulation(small_config(5, 3));
  EXPECT_TRUE(r.decode_ok);
  EXPECT_TRUE(r.baseline_decode_ok);
  EXPECT_EQ(r.workers.size(), 5U);
  EXPECT_EQ(r.used_workers.size(), 3U);
  EXPECT_LT(r.cost_sparse, r.cost_dense_baseline);
  EXPECT_NEAR(r.relative_leakage_a, 0.284, 1e-3);
}

TEST(Simulator, InfiniteStragglers) {
  auto c = small_config(5, 8);
  c.stragglers = {0, 3};
  const auto r = run_simulation(c);
  EXPECT_TRUE(r.decode_ok);
  for (std::uint32_t w : r.used_workers) EXPECT_TRUE(w != 0 && w != 3);
  double slowest_fast = 0;
  for (std::uint32_t w : {1U, 2U, 4U}) slowest_fast = std::max(slowest_fast, r.workers[w].finish_time);
  EXPECT_EQ(r.completion_time, slowest_fast);
}

TEST(Simulator, FiniteStragglerDelayStillExcluded) {
  auto c = small_config(4, 2);
  c.stragglers = {1};
  c.straggler_delay = 1e6;
  const auto r = run_simulation(c);
  EXPECT_TRUE(r.decode_ok);
  EXPECT_EQ(r.used_workers.size(), 3U);
  for (std::uint32_t w : r.used_workers) EXPECT_NE(w, 1U);
}

TEST(Simulator, TooManyStragglers) {
  auto c = small_config(4, 2);
  c.stragglers = {0, 1};
  const auto r = run_simulation(c);
  EXPECT_FALSE(r.decode_ok);
  EXPECT_TRUE(std::isinf(r.completion_time));
}

TEST(Simulator, Deterministic) {
  const auto a = run_simulation(small_config(4, 11));
  const auto b = run_simulation(small_config(4, 11));
  EXPECT_EQ(format_report(a), format_report(b));
  EXPECT_EQ(csv_row(a), csv_row(b));
}

TEST(Simulator, Validation) {
  EXPECT_THROW(run_simulation(small_config(2, 1)), std::invalid_argument);
  auto c = small_config(3, 1);
  c.q = 3;
  EXPECT_THROW(run_simulation(c), std::invalid_argument);
  c = small_config(5, 1);
  c.s_d_a = 0.99;
  EXPECT_THROW(run_simulation(c), InfeasibleError);
}

TEST(Simulator, CostDecreasesWithSparsity) {
  double lo = 0, hi = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto c = small_config(3, seed);
    c.s_d_a = c.s_d_b = 0.8;
    lo += run_simulation(c).cost_sparse;
    c.s_d_a = c.s_d_b = 0.9;
    hi += run_simulation(c).cost_sparse;
  }
  EXPECT_LT(hi, lo);
}

TEST(Simulator, CsvShape) {
  EXPECT_EQ(csv_header(),
            "seed,n,q,s,s_d,completion_time,decode_ok,cost_sparse,cost_dense_baseline,"
            "leakage_per_share,relative_leakage");
  const auto row = csv_row(run_simulation(small_config(3, 1)));
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 10);
}

TEST(CompareSchemes, AllDecodeAndOrderLeakage) {
  const auto a = sample_source_matrix(SourceModel(PrimeField(89), 0.95), 40, 30, 1);
  const auto b = sample_source_matrix(SourceModel(PrimeField(89), 0.95), 30, 20, 2);
  CompareConfig cfg;
  cfg.n = 5;
  const std::uint64_t seeds[] = {1, 2, 3};
  const auto rows = compare_schemes(a, b, cfg, seeds);
  ASSERT_EQ(rows.size(), 9U);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.decode_ok) << r.scheme;
    EXPECT_EQ(r.task_costs.size(), r.workers);
  }
  EXPECT_EQ(rows[0].workers, 4U);
  EXPECT_EQ(rows[1].workers, 3U);
  EXPECT_EQ(rows[2].workers, 5U);
  EXPECT_LT(rows[0].relative_leakage_a, rows[1].relative_leakage_a);
}

}  // namespace
}  // namespace sparseshare
