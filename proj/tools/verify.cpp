#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <string>

#include "commands.hpp"
#include "sparseshare/leakage.hpp"
#include "sparseshare/optimizer.hpp"
#include "sparseshare/reference_data.hpp"

namespace sparseshare::cli {

namespace {

struct Tally {
  int failed = 0;

  void check(const std::string& name, double residual, double tol) {
    const bool ok = residual <= tol;
    if (!ok) ++failed;
    std::cout << (ok ? "PASS " : "FAIL ") << name << " residual=" << num(residual)
              << " tol=" << num(tol) << '\n';
  }
};

void oracle_suite(Tally& t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint32_t q : {7U, 11U}) {
    PrimeField f(q);
    for (std::uint32_t n = 2; n <= 6; ++n) {
      double worst = 0.0, worst_alpha = 0.0;
      for (int trial = 0; trial < 10; ++trial) {
        const double s = u(rng);
        const SymmetricSharePMF pmf(f, n, u(rng), u(rng) / n);
        const double analytic = analytic_leakage(pmf, s, share_sparsity(pmf, s));
        const auto canonical = ShareParams::canonical(f, n);
        std::vector<FieldElement> shuffled;
        for (std::uint32_t v = q - 1; shuffled.size() < n; --v) shuffled.push_back(f.element(v));
        const ShareParams other(f, shuffled);
        for (std::size_t i = 0; i < n; ++i) {
          const double bf = brute_force_mi(SourceModel(f, s), pmf, canonical, i);
          worst = std::max(worst, std::abs(bf - analytic));
          worst_alpha =
              std::max(worst_alpha, std::abs(bf - brute_force_mi(SourceModel(f, s), pmf, other, i)));
        }
      }
      const std::string tag = " q=" + std::to_string(q) + " n=" + std::to_string(n);
      t.check("oracle analytic-vs-bruteforce" + tag, worst, 1e-10);
      t.check("oracle alpha-invariance" + tag, worst_alpha, 1e-12);
    }
  }
}

void lemma1_suite(Tally& t) {
  const auto grid = symmetric_grid(0.04, 0.005);
  for (double s : {0.9, 0.95}) {
    for (double s_avg : {0.7, 0.9}) {
      const auto table = verify_lemma1(s, s_avg, 89, grid);
      const std::string tag = " s=" + num(s) + " s_avg=" + num(s_avg);
      t.check("lemma1 argmin-at-zero" + tag, std::abs(table.rows[table.argmin].s_delta), 0.0);
      const double twice = 2 * optimal_tradeoff_point(s, s_avg, 89, 2).leakage;
      const auto zero = std::find_if(table.rows.begin(), table.rows.end(),
                                     [](const Lemma1Row& r) { return r.s_delta == 0.0; });
      t.check("lemma1 zero-delta-equals-2x" + tag, std::abs(zero->total_leakage - twice), 1e-8);
    }
  }
}

void stationarity_suite(Tally& t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::uint32_t qs[] = {7, 11, 89, 5081};
  double worst_res = 0.0, worst_bal = 0.0;
  int count = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::uint32_t q = qs[trial % 4];
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(trial / 4 % 5);
    if (n >= q) continue;
    const double s = 0.02 + 0.96 * u(rng);
    const double lo = 1.0 / q, hi = feasible_sd_range(s, q, n).hi;
    const double s_d = lo + (hi - lo) * (0.001 + 0.998 * u(rng));
    const auto pmf = solve_optimal_pmf(s, s_d, q, n);
    worst_res = std::max(worst_res, stationarity_residual(pmf));
    worst_bal = std::max(worst_bal, balance_error(pmf));
    ++count;
  }
  t.check("stationarity residual (" + std::to_string(count) + " cases)", worst_res, 1e-8);
  t.check("balance relative error (" + std::to_string(count) + " cases)", worst_bal, 1e-8);
}

void figure1_suite(Tally& t) {
  using namespace reference;
  std::vector<double> grid;
  for (const auto& p : kTwoShareCurve) grid.push_back(p.s_d);
  const auto two = sweep_tradeoff(kSparsity, kFieldSize, 2, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(two.points[i].relative - kTwoShareCurve[i].relative_leakage));
  }
  t.check("figure1 two-share curve (95 points)", worst, 1e-6);

  std::vector<double> grid3;
  for (const auto& p : kThreeConstraintCurve) grid3.push_back(p.s_d);
  const auto three = sweep_tradeoff(kSparsity, kFieldSize, 3, grid3);
  double worst3 = 0.0;
  for (std::size_t i = 0; i < grid3.size(); ++i) {
    worst3 = std::max(worst3,
                      std::abs(three.points[i].relative - kThreeConstraintCurve[i].relative_leakage));
  }
  std::cout << "INFO figure1 three-constraint curve vs n=3 optimum: max |diff| = " << num(worst3)
            << " (diagnostic)\n";
}

}  // namespace

int cmd_verify(const VerifyArgs& a) {
  static const std::vector<std::string> suites = {"oracle", "lemma1", "stationarity", "figure1"};
  if (a.suite != "all" && std::find(suites.begin(), suites.end(), a.suite) == suites.end()) {
    throw UsageError("unknown suite '" + a.suite + "'");
  }
  Tally t;
  auto want = [&](const char* name) { return a.suite == "all" || a.suite == name; };
  if (want("oracle")) oracle_suite(t, a.seed);
  if (want("lemma1")) lemma1_suite(t);
  if (want("stationarity")) stationarity_suite(t, a.seed);
  if (want("figure1")) figure1_suite(t);
  std::cout << (t.failed == 0 ? "ALL PASS" : std::to_string(t.failed) + " FAILED") << '\n';
  return t.failed == 0 ? kOk : kVerifyFailed;
}

}  // namespace sparseshare::cli
