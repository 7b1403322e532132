// Acceptance gate: one PASS/FAIL line per criterion.
//   acceptance          run all eight
//   acceptance 3 6      run the listed ones
// Exit status is 0 only if every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sparseshare/leakage.hpp"
#include "sparseshare/optimizer.hpp"
#include "sparseshare/reference_data.hpp"
#include "sparseshare/rng.hpp"
#include "sparseshare/sharing.hpp"

using namespace sparseshare;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string g(double x) { return fmt("%.6g", x); }

// 1. Two-share trade-off curve at s = 0.95, q = 89 against the 95 published points.
Outcome figure_curve() {
  using namespace reference;
  std::vector<double> grid;
  for (const auto& p : kTwoShareCurve) grid.push_back(p.s_d);
  const auto curve = sweep_tradeoff(kSparsity, kFieldSize, 2, grid);
  double worst = 0.0;
  std::size_t where = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = std::abs(curve.points[i].relative - kTwoShareCurve[i].relative_leakage);
    if (d > worst) {
      worst = d;
      where = i;
    }
  }
  return {worst <= 1e-6, "95 points, max |diff| = " + g(worst) + " at s_d = " +
                             fmt("%.14g", grid[where]) + " (tol 1e-6)"};
}

// 2. Relative leakage at s = 0.95, s_d = 0.9 for q in {89, 5081}, n in {2, 5}.
Outcome text_values() {
  struct Target {
    std::uint32_t q, n;
    double expected;
  };
  const Target targets[] = {{89, 2, 0.234}, {89, 5, 0.284}, {5081, 2, 0.199}, {5081, 5, 0.207}};
  bool pass = true;
  std::ostringstream os;
  for (const auto& t : targets) {
    const double e = optimal_tradeoff_point(0.95, 0.9, t.q, t.n).relative;
    const bool ok = std::abs(e - t.expected) <= 1e-3;
    pass = pass && ok;
    os << "q=" << t.q << ",n=" << t.n << ": " << fmt("%.6f", e) << " vs " << t.expected
       << (ok ? " ok" : " MISS") << "; ";
  }
  // Diagnostic only: the same quantities on the reference curve's grid point
  // nearest 0.9 (s_d = 0.9 + 1/5081).
  os << "tol 1e-3; at s_d = 0.9 + 1/5081:";
  for (const auto& t : targets) {
    os << " " << fmt("%.6f", optimal_tradeoff_point(0.95, 0.9 + 1.0 / 5081, t.q, t.n).relative);
  }
  return {pass, os.str()};
}

// 3. Closed-form per-share leakage against enumeration of the joint law.
Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240603);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, worst_share = 0.0, worst_alpha = 0.0;
  int pmfs = 0;
  for (std::uint32_t q : {7U, 11U, 89U}) {
    PrimeField f(q);
    std::vector<std::uint32_t> nonzero(q - 1);
    for (std::uint32_t v = 1; v < q; ++v) nonzero[v - 1] = v;
    for (std::uint32_t n = 2; n <= 6; ++n) {
      for (int trial = 0; trial < 34; ++trial) {
        const double s = u(rng);
        const SymmetricSharePMF pmf(f, n, u(rng), u(rng) / n);
        const SourceModel model(f, s);
        const double analytic = analytic_leakage(pmf, s, share_sparsity(pmf, s));
        std::shuffle(nonzero.begin(), nonzero.end(), rng);
        std::vector<FieldElement> alphas;
        for (std::uint32_t i = 0; i < n; ++i) alphas.push_back(f.element(nonzero[i]));
        const ShareParams canonical = ShareParams::canonical(f, n), random(f, alphas);
        const double first = brute_force_mi(model, pmf, canonical, 0);
        for (std::size_t i = 0; i < n; ++i) {
          const double a = brute_force_mi(model, pmf, canonical, i);
          const double b = brute_force_mi(model, pmf, random, i);
          worst = std::max({worst, std::abs(a - analytic), std::abs(b - analytic)});
          worst_share = std::max(worst_share, std::abs(a - first));
          worst_alpha = std::max(worst_alpha, std::abs(a - b));
        }
        ++pmfs;
      }
    }
  }
  const bool pass = pmfs >= 500 && worst <= 1e-10 && worst_share <= 1e-12 && worst_alpha <= 1e-12;
  return {pass, std::to_string(pmfs) + " pmfs; max |analytic - brute| = " + g(worst) +
                    " (tol 1e-10); share spread = " + g(worst_share) +
                    "; alpha spread = " + g(worst_alpha) + " (tol 1e-12)"};
}

// 4. Optimality of the root against an exhaustive grid, plus first-order conditions.
Outcome optimality() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::uint32_t qs[] = {7, 11, 89};
  double worst_gap = -1.0, worst_res = 0.0, worst_bal = 0.0;
  int cases = 0, beaten = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::uint32_t q = qs[trial % 3];
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(trial / 3 % 5);
    const double s = 0.02 + 0.96 * u(rng);
    const double hi = feasible_sd_range(s, q, n).hi;
    const double s_d = hi * (0.001 + 0.998 * u(rng));
    const auto pmf = solve_optimal_pmf(s, s_d, q, n);
    const double ours = analytic_leakage(pmf, s, share_sparsity(pmf, s));
    const auto grid = grid_search_oracle(s, s_d, q, n, 1e-5);
    const double gap = ours - grid.leakage;  // <= 1e-6 required
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-6) ++beaten;
    worst_res = std::max(worst_res, stationarity_residual(pmf));
    worst_bal = std::max(worst_bal, balance_error(pmf));
    ++cases;
  }
  const bool pass = cases >= 100 && beaten == 0 && worst_res <= 1e-8 && worst_bal <= 1e-8;
  return {pass, std::to_string(cases) + " cases; max (ours - grid) = " + g(worst_gap) +
                    " (tol 1e-6); stationarity residual max = " + g(worst_res) +
                    "; balance rel. error max = " + g(worst_bal) + " (tol 1e-8)"};
}

// 5. Two-share padding is best when both shares are equally sparse.
Outcome equal_split() {
  const auto grid = symmetric_grid(0.04, 0.005);
  bool pass = true;
  std::ostringstream os;
  for (double s : {0.9, 0.95}) {
    for (double s_avg : {0.7, 0.9}) {
      const auto table = verify_lemma1(s, s_avg, 89, grid);
      const auto zero = std::find_if(table.rows.begin(), table.rows.end(),
                                     [](const Lemma1Row& r) { return r.s_delta == 0.0; });
      const double twice = 2 * optimal_tradeoff_point(s, s_avg, 89, 2).leakage;
      const double diff = std::abs(zero->total_leakage - twice);
      const int infeasible = static_cast<int>(std::count_if(
          table.rows.begin(), table.rows.end(), [](const Lemma1Row& r) { return !r.feasible; }));
      const bool ok = table.rows[table.argmin].s_delta == 0.0 && diff <= 1e-8;
      pass = pass && ok;
      os << "(s=" << s << ",avg=" << s_avg << "): argmin " << g(table.rows[table.argmin].s_delta)
         << ", |L0 - 2L| = " << g(diff) << ", " << infeasible << " infeasible rows; ";
    }
  }
  return {pass, os.str()};
}

// 6. Decoding from every 3-subset, and the four- and three-task identities.
Outcome protocol() {
  int configs = 0, failures = 0, subsets = 0;
  for (std::uint32_t q : {89U, 5081U}) {
    const PrimeField f(q);
    for (std::uint32_t n = 3; n <= 5; ++n) {
      const auto pmf_a = solve_optimal_pmf(0.95, 0.9, q, n);
      const auto pmf_b = solve_optimal_pmf(0.9, 0.85, q, n);
      const auto two = solve_optimal_pmf(0.95, 0.9, q, 2);
      const auto three = solve_optimal_pmf(0.95, 0.9, q, 3);
      const AsymmetricSharePMF asym(f, two.p1(), two.p_star(), two.p_star());
      const std::uint32_t kappa[] = {0, 1, 2};
      const double mass[] = {three.p_star(), three.p_star(), three.p_star()};
      const auto params = ShareParams::canonical(f, n);
      for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const std::uint64_t base = seed * 1000 + q * 10 + n;
        const auto a = sample_source_matrix(SourceModel(f, 0.95), 50, 40, derive_seed(base, 0));
        const auto b = sample_source_matrix(SourceModel(f, 0.9), 40, 60, derive_seed(base, 1));
        const auto c = sp_mul(a, b);
        const auto sa = encode(a, pmf_a, params, derive_seed(base, 2));
        const auto sb = encode(b, pmf_b, params, derive_seed(base, 3));
        std::vector<ProductEvaluation> evals;
        for (std::size_t i = 0; i < n; ++i) evals.push_back(evaluate_task(sa, sb, i));
        bool ok = true;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
              const ProductEvaluation pick[] = {evals[i], evals[j], evals[k]};
              ok = ok && reconstruct_product(pick) == c;
              ++subsets;
            }
          }
        }
        const auto r4 = sample_padding_asymmetric(a, asym, derive_seed(base, 4));
        const auto s4 = sample_padding_asymmetric(b, asym, derive_seed(base, 5));
        ok = ok && four_task_scheme(a, b, r4, s4).c == c;
        const auto r3 = sample_padding_special(a, three.p1(), kappa, mass, derive_seed(base, 6));
        const auto s3 = sample_padding_special(b, three.p1(), kappa, mass, derive_seed(base, 7));
        ok = ok && three_task_scheme(a, b, r3, s3).c == c;
        if (!ok) ++failures;
        ++configs;
      }
    }
  }
  return {failures == 0, std::to_string(configs) + " configurations, " + std::to_string(subsets) +
                             " three-subsets decoded; " + std::to_string(failures) + " failures"};
}

// 7. Realized share sparsity of 1000 x 1000 encodings.
Outcome sparsity_realization() {
  const PrimeField f(89);
  const double s = 0.95, s_d = 0.9;
  const double sigma = std::sqrt(s_d * (1 - s_d) / 1e6);
  const auto a = sample_source_matrix(SourceModel(f, s), 1000, 1000, 424242);
  double worst = 0.0;
  bool pass = true;
  for (std::uint32_t n = 2; n <= 5; ++n) {
    const auto set = encode(a, solve_optimal_pmf(s, s_d, 89, n), ShareParams::canonical(f, n),
                            derive_seed(424242, n));
    for (const auto& share : set.shares) {
      const double z = std::abs(empirical_sparsity(share) - s_d) / sigma;
      worst = std::max(worst, z);
      pass = pass && z <= 3.0;
    }
  }
  return {pass, "n = 2..5, 14 shares; max deviation = " + fmt("%.3f", worst) + " sigma (tol 3)"};
}

// 8. Leakage grows with n and shrinks with q.
Outcome monotonicity() {
  const double ss[] = {0.5, 0.8, 0.9, 0.95, 0.99};
  const std::uint32_t qs[] = {89, 307, 1009, 5081, 65521};
  double worst_n = 0.0, worst_q = 0.0;
  int comparisons = 0, bad_n = 0, bad_q = 0;
  std::string where_q;
  std::ostringstream by_s;
  for (double s : ss) {
    const double top = feasible_sd_range(s, 89, 8).hi;
    double lowest_bad = 2.0, highest_bad = -1.0;
    for (int k = 1; k <= 40; ++k) {
      const double s_d = 1.0 / 89 + (top - 1.0 / 89) * k / 41.0;
      std::vector<std::vector<double>> eps(std::size(qs));
      for (std::size_t qi = 0; qi < std::size(qs); ++qi) {
        for (std::uint32_t n = 2; n <= 8; ++n) {
          eps[qi].push_back(optimal_tradeoff_point(s, s_d, qs[qi], n).relative);
        }
        for (std::size_t i = 1; i < eps[qi].size(); ++i) {
          const double d = eps[qi][i - 1] - eps[qi][i];
          worst_n = std::max(worst_n, d);
          if (d > 1e-9) ++bad_n;
          ++comparisons;
        }
      }
      for (std::size_t qi = 1; qi < std::size(qs); ++qi) {
        for (std::size_t i = 0; i < eps[qi].size(); ++i) {
          const double d = eps[qi][i] - eps[qi - 1][i];
          if (d > 1e-9) {
            ++bad_q;
            lowest_bad = std::min(lowest_bad, s_d);
            highest_bad = std::max(highest_bad, s_d);
          }
          if (d > worst_q) {
            worst_q = d;
            where_q = "s=" + g(s) + ",s_d=" + fmt("%.4f", s_d) + ",n=" + std::to_string(i + 2) +
                      ",q=" + std::to_string(qs[qi - 1]) + "->" + std::to_string(qs[qi]);
          }
          ++comparisons;
        }
      }
    }
    by_s << " s=" << s << ":";
    if (highest_bad < 0) {
      by_s << "none";
    } else {
      by_s << fmt("%.4f", lowest_bad) << ".." << fmt("%.4f", highest_bad);
    }
  }
  return {bad_n == 0 && bad_q == 0,
          std::to_string(comparisons) + " comparisons; n: " + std::to_string(bad_n) +
              " violations, max decrease " + g(worst_n) + "; q: " + std::to_string(bad_q) +
              " violations, max increase " + g(worst_q) + " at " + where_q +
              "; q-violating s_d spans" + by_s.str() + " (slack 1e-9)"};
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {"two-share curve reproduces the 95 published points", 5, figure_curve},
      {"relative leakage at s_d = 0.9 for q in {89, 5081}, n in {2, 5}", 10, text_values},
      {"closed-form leakage equals enumerated mutual information", 60, oracle_equivalence},
      {"root beats exhaustive grid; stationarity and balance hold", 60, optimality},
      {"equal share sparsities minimize two-share total leakage", 30, equal_split},
      {"every 3-subset decodes; four- and three-task identities exact", 60, protocol},
      {"share sparsity within 3 sigma on 1000 x 1000 encodings", 30, sparsity_realization},
      {"leakage nondecreasing in n and nonincreasing in q", 60, monotonicity},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(all.size()); ++i) selected.push_back(i);
  }

  int failed = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(all.size())) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const Criterion& c = all[id - 1];
    const auto start = std::chrono::steady_clock::now();
    Outcome out{false, ""};
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = out.pass && in_time;
    if (!pass) ++failed;
    std::printf("criterion %d: %s | %s | %s | %.2fs (budget %.0fs%s)\n", id, pass ? "PASS" : "FAIL",
                c.name, out.detail.c_str(), secs, c.budget_seconds, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
