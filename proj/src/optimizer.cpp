#include "sparseshare/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "sparseshare/errors.hpp"
#include "sparseshare/leakage.hpp"

namespace sparseshare {

namespace {

constexpr int kScanIntervals = 1024;
constexpr double kFeasSlack = 1e-12;
constexpr double kRootMergeTol = 1e-12;
// ln(1e300): beyond this (q-n)^n is not representable with headroom.
constexpr double kLogOverflow = 690.7755278982137;

void validate_qn(std::uint32_t q, std::uint32_t n) {
  if (!is_prime(q)) throw std::invalid_argument("q = " + std::to_string(q) + " is not prime");
  if (n < 2 || n >= q) {
    throw std::invalid_argument("need 2 <= n < q (n = " + std::to_string(n) +
                                ", q = " + std::to_string(q) + ")");
  }
}

void validate_s(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("source sparsity s must lie in [0, 1]");
}

// Clamps s_d into the feasible range if it is within rounding, otherwise throws.
double checked_sd(double s, double s_d, std::uint32_t q, std::uint32_t n) {
  const Interval range = feasible_sd_range(s, q, n);
  if (!std::isfinite(s_d) || !range.contains(s_d, kFeasSlack)) {
    throw InfeasibleError("s_d = " + std::to_string(s_d) + " outside feasible range [" +
                          std::to_string(range.lo) + ", " + std::to_string(range.hi) +
                          "] for s = " + std::to_string(s) + ", n = " + std::to_string(n));
  }
  return std::clamp(s_d, range.lo, range.hi);
}

double binomial(std::uint32_t n, std::uint32_t k) {
  double r = 1.0;
  for (std::uint32_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Bisection on a sign change of f in [lo, hi], down to adjacent doubles.
template <typename F>
double bisect(F&& f, double lo, double hi) {
  double f_lo = f(lo);
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

// Scans f over [lo, hi] and returns every isolated root.
template <typename F>
std::vector<double> scan_roots(F&& f, double lo, double hi) {
  std::vector<double> xs(kScanIntervals + 1);
  std::vector<double> fs(kScanIntervals + 1);
  for (int i = 0; i <= kScanIntervals; ++i) {
    xs[i] = i == kScanIntervals ? hi : lo + (hi - lo) * i / kScanIntervals;
    fs[i] = f(xs[i]);
  }
  std::vector<double> roots;
  auto push = [&](double r) {
    if (roots.empty() || std::abs(roots.back() - r) > kRootMergeTol) roots.push_back(r);
  };
  for (int i = 0; i <= kScanIntervals; ++i) {
    if (fs[i] == 0.0) {
      push(xs[i]);
    } else if (i < kScanIntervals && fs[i + 1] != 0.0 && !std::isnan(fs[i]) &&
               !std::isnan(fs[i + 1]) && (fs[i] < 0.0) != (fs[i + 1] < 0.0)) {
      push(bisect(f, xs[i], xs[i + 1]));
    }
  }
  return roots;
}

std::string describe(const std::vector<double>& roots) {
  std::string out;
  for (double r : roots) {
    if (!out.empty()) out += ", ";
    out += std::to_string(r);
  }
  return out;
}

bool is_boundary(const SymmetricSharePMF& pmf) {
  return pmf.p1() <= 0.0 || pmf.p1_inv() <= 0.0 || pmf.p_star() <= 0.0 ||
         pmf.p_star_inv() <= 0.0;
}

}  // namespace

Theorem1Coefficients theorem1_coefficients(double s, double s_d, std::uint32_t q,
                                           std::uint32_t n) {
  validate_qn(q, n);
  validate_s(s);
  if (s <= 0.0 || s >= 1.0) {
    throw std::invalid_argument("theorem1_coefficients: degenerate source (s must be in (0, 1))");
  }
  s_d = checked_sd(s, s_d, q, n);

  Theorem1Coefficients co{};
  co.s1 = s_d / (1.0 - s);
  co.s2 = (s - s_d) / (1.0 - s);
  co.log_c = std::log(static_cast<double>(q - 1)) - n * std::log(static_cast<double>(q - n));
  co.log_domain = n * std::log(static_cast<double>(q - n)) > kLogOverflow;
  co.c = std::exp(co.log_c);

  const double c = co.c;
  const double m = -static_cast<double>(n);
  co.b.assign(n + 2, 0.0);
  co.b[n + 1] = -1.0 - c * std::pow(m, n);
  co.b[n] = c * (co.s1 * std::pow(m, n) - n * std::pow(m, n - 1)) - co.s2;
  for (std::uint32_t k = 1; k < n; ++k) {
    co.b[k] = c * (co.s1 * binomial(n, k) * std::pow(m, k) -
                   binomial(n, k - 1) * std::pow(m, k - 1));
  }
  co.b[0] = c * co.s1;
  return co;
}

double evaluate_polynomial(std::span<const double> b, double x) noexcept {
  double acc = 0.0;
  for (auto it = b.rbegin(); it != b.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Interval admissible_p_star(double s, double s_d, std::uint32_t n) {
  const double lo = std::max(0.0, (s_d - s) / (1.0 - s));
  const double hi = std::min(s_d / (1.0 - s), 1.0 / n);
  return {lo, hi};
}

namespace {

// The balance equation's four factors at one p_star, each computed without
// cancellation: near an end of the admissible interval the quantity that
// vanishes there is formed from the offset to that end.
struct RootParts {
  double p_star;
  double num;   // s_d - (1-s) p  = s p1
  double den;   // s - s_d + (1-s) p = s (q-1) p1_inv
  double free;  // 1 - n p = (q-n) p_star_inv
};

class BalanceEquation {
 public:
  BalanceEquation(double s, double s_d, std::uint32_t q, std::uint32_t n, Interval range)
      : s_(s), s_d_(s_d), n_(n), range_(range),
        log_q1_(std::log(static_cast<double>(q - 1))),
        log_qn_(std::log(static_cast<double>(q - n))),
        lo_is_den_root_(s_d > s),
        hi_is_num_root_(s_d / (1.0 - s) <= 1.0 / n),
        hi_is_free_root_(1.0 / n <= s_d / (1.0 - s)) {}

  RootParts from_lo(double t) const {
    const double p = range_.lo + t;
    const double den = lo_is_den_root_ ? (1.0 - s_) * t : (s_ - s_d_) + (1.0 - s_) * p;
    return {p, s_d_ - (1.0 - s_) * p, den, 1.0 - n_ * p};
  }

  RootParts from_hi(double u) const {
    const double p = range_.hi - u;
    const double num = hi_is_num_root_ ? (1.0 - s_) * u : s_d_ - (1.0 - s_) * p;
    const double free = hi_is_free_root_ ? n_ * u : 1.0 - n_ * p;
    return {p, num, (s_ - s_d_) + (1.0 - s_) * p, free};
  }

  // ln LHS - ln RHS; strictly decreasing in p, +inf at lo and -inf at hi.
  double g(const RootParts& r) const {
    return log_q1_ + std::log(r.num) - std::log(r.den) -
           n_ * (log_qn_ + std::log(r.p_star) - std::log(r.free));
  }

  RootParts solve() const {
    const double half = 0.5 * (range_.hi - range_.lo);
    if (g(from_lo(half)) > 0.0) {
      const double u = bisect([&](double x) { return -g(from_hi(x)); }, 0.0, half);
      return from_hi(u);
    }
    const double t = bisect([&](double x) { return g(from_lo(x)); }, 0.0, half);
    return from_lo(t);
  }

 private:
  double s_, s_d_;
  double n_;
  Interval range_;
  double log_q1_, log_qn_;
  bool lo_is_den_root_, hi_is_num_root_, hi_is_free_root_;
};

RootParts solve_root(double s, double s_d, std::uint32_t q, std::uint32_t n) {
  const Theorem1Coefficients co = theorem1_coefficients(s, s_d, q, n);
  s_d = checked_sd(s, s_d, q, n);
  Interval range = admissible_p_star(s, s_d, n);
  if (range.lo > range.hi) {
    if (range.lo - range.hi > kFeasSlack) {
      throw InfeasibleError("no admissible p_star for s_d = " + std::to_string(s_d));
    }
    range.hi = range.lo;
  }
  const BalanceEquation eq(s, s_d, q, n, range);
  if (range.hi - range.lo <= 1e-15) return eq.from_lo(0.0);

  // Uniqueness check on the expanded polynomial (or, when its coefficients
  // would overflow, on the log form).
  const std::vector<double> roots =
      co.log_domain
          ? scan_roots([&](double p) { return eq.g(eq.from_lo(p - range.lo)); }, range.lo,
                       range.hi)
          : scan_roots([&](double p) { return evaluate_polynomial(co.b, p); }, range.lo,
                       range.hi);
  if (roots.size() > 1) {
    throw MultipleRootsError("multiple admissible roots: " + describe(roots), roots);
  }
  // The expanded polynomial loses digits to cancellation and can miss a root
  // pressed against an end of the interval; the log form changes sign
  // exactly once, so the root itself always comes from it.
  return eq.solve();
}

}  // namespace

double find_p_star(double s, double s_d, std::uint32_t q, std::uint32_t n) {
  return solve_root(s, s_d, q, n).p_star;
}

double balance_error(const SymmetricSharePMF& pmf) {
  const double n = pmf.n();
  const bool lhs_zero = pmf.p1() <= 0.0;
  const bool rhs_zero = pmf.p_star() <= 0.0;
  if (lhs_zero || rhs_zero || pmf.p1_inv() <= 0.0 || pmf.p_star_inv() <= 0.0) {
    return lhs_zero && rhs_zero ? 0.0 : std::numeric_limits<double>::infinity();
  }
  const double log_lhs = std::log(pmf.p1()) - std::log(pmf.p1_inv());
  const double log_rhs = n * (std::log(pmf.p_star()) - std::log(pmf.p_star_inv()));
  return std::abs(std::expm1(log_lhs - log_rhs));
}

SymmetricSharePMF solve_optimal_pmf(double s, double s_d, std::uint32_t q, std::uint32_t n) {
  validate_qn(q, n);
  validate_s(s);
  s_d = checked_sd(s, s_d, q, n);
  const PrimeField field(q);
  if (s == 1.0) {
    // Every source entry is zero: only p1 matters and must equal s_d.
    return SymmetricSharePMF(field, n, s_d, 1.0 / q);
  }
  if (s == 0.0) {
    // No zero source entries: p_star alone sets the sparsity.
    return SymmetricSharePMF(field, n, s_d, s_d);
  }
  const RootParts r = solve_root(s, s_d, q, n);
  const double p1 = std::clamp(r.num / s, 0.0, 1.0);
  const double p1_inv = std::max(0.0, r.den / (s * (q - 1)));
  const double p_star_inv = std::max(0.0, r.free / (q - n));
  return SymmetricSharePMF(field, n, p1, p1_inv, std::clamp(r.p_star, 0.0, 1.0), p_star_inv);
}

TradeoffPoint optimal_tradeoff_point(double s, double s_d, std::uint32_t q, std::uint32_t n) {
  const SymmetricSharePMF pmf = solve_optimal_pmf(s, s_d, q, n);
  const double realized = share_sparsity(pmf, s);
  const double leakage = analytic_leakage(pmf, s, realized);
  const LeakageReport report = make_report(leakage, q_entropy(s, q));
  return {s, s_d, q, n, pmf.p1(), pmf.p_star(), report.leakage, report.relative,
          is_boundary(pmf)};
}

TradeoffCurve sweep_tradeoff(double s, std::uint32_t q, std::uint32_t n,
                             std::span<const double> s_d_grid, unsigned threads) {
  std::vector<double> grid(s_d_grid.begin(), s_d_grid.end());
  std::sort(grid.begin(), grid.end());
  for (double s_d : grid) checked_sd(s, s_d, q, n);

  // Placeholder values; every slot is overwritten by exactly one worker.
  std::vector<TradeoffPoint> points(grid.size(), TradeoffPoint{});
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, grid.size() / 8)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      points[i] = optimal_tradeoff_point(s, grid[i], q, n);
    }
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < grid.size(); i += threads) {
            points[i] = optimal_tradeoff_point(s, grid[i], q, n);
          }
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  TradeoffCurve curve{std::move(points), true, 0.0};
  const double uniform = 1.0 / q;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const TradeoffPoint& a = curve.points[i - 1];
    const TradeoffPoint& b = curve.points[i];
    double violation = 0.0;
    if (a.s_d >= uniform) violation = a.relative - b.relative;
    else if (b.s_d <= uniform) violation = b.relative - a.relative;
    curve.max_monotonicity_violation = std::max(curve.max_monotonicity_violation, violation);
  }
  curve.monotone = curve.max_monotonicity_violation <= 1e-12;
  return curve;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("make_grid: need step > 0, hi >= lo");
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double x = lo + static_cast<double>(k) * step;
    if (x > hi + step * 1e-6) break;
    grid.push_back(x);
  }
  return grid;
}

std::vector<double> symmetric_grid(double half_width, double step) {
  if (!(step > 0.0) || half_width < 0.0) {
    throw std::invalid_argument("symmetric_grid: need step > 0, half_width >= 0");
  }
  const auto k_max = static_cast<long>(std::llround(half_width / step));
  std::vector<double> grid;
  for (long k = -k_max; k <= k_max; ++k) grid.push_back(static_cast<double>(k) * step);
  return grid;
}

Interval asymmetric_p1_range(double s, double s_avg, double s_delta) {
  const double s_r = s_avg - s_delta;
  const double s_ar = s_avg + s_delta;
  const double t = 1.0 - s;
  // p2 = (s_r - s p1)/t and p3 = (s_ar - s p1)/t in [0, 1], p2 + p3 <= 1.
  const double lo = std::max({0.0, (s_r - t) / s, (s_ar - t) / s, (2.0 * s_avg - t) / (2.0 * s)});
  const double hi = std::min({1.0, s_r / s, s_ar / s});
  return {lo, hi};
}

AsymmetricOptimum optimize_asymmetric_n2(double s, double s_avg, double s_delta,
                                         std::uint32_t q) {
  if (!is_prime(q) || q < 3) throw std::invalid_argument("optimize_asymmetric_n2: need prime q >= 3");
  if (!(s > 0.0 && s < 1.0)) {
    throw std::invalid_argument("optimize_asymmetric_n2: source sparsity must be in (0, 1)");
  }
  const double s_r = s_avg - s_delta;
  const double s_ar = s_avg + s_delta;
  if (!(s_r >= 0.0 && s_r <= 1.0 && s_ar >= 0.0 && s_ar <= 1.0)) {
    throw InfeasibleError("share sparsities s_avg -/+ s_delta must lie in [0, 1]");
  }
  Interval range = asymmetric_p1_range(s, s_avg, s_delta);
  if (range.lo > range.hi) {
    if (range.lo - range.hi > kFeasSlack) {
      throw InfeasibleError("empty feasible p1 interval for s = " + std::to_string(s) +
                            ", s_avg = " + std::to_string(s_avg) +
                            ", s_delta = " + std::to_string(s_delta));
    }
    range.hi = range.lo;
  }

  const PrimeField field(q);
  auto pmf_at = [&](double p1) {
    const double p2 = (s_r - s * p1) / (1.0 - s);
    const double p3 = (s_ar - s * p1) / (1.0 - s);
    return AsymmetricSharePMF(field, p1, p2, p3);
  };
  auto objective = [&](double p1) {
    const AsymmetricSharePMF pmf = pmf_at(p1);
    const AsymmetricSparsities sp = asymmetric_sparsities(pmf, s);
    // Evaluate at the realized sparsities; they equal s_r / s_ar up to rounding.
    const double avg = 0.5 * (sp.s_r + sp.s_ar);
    return asymmetric_total_leakage(pmf, s, avg, 0.5 * (sp.s_ar - sp.s_r));
  };

  // Golden-section search; the objective is convex in p1.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = range.lo, b = range.hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  while (b - a > 1e-12) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    }
  }
  double best_p1 = 0.5 * (a + b);
  double best = objective(best_p1);
  for (double edge : {range.lo, range.hi}) {
    const double f = objective(edge);
    if (f < best) {
      best = f;
      best_p1 = edge;
    }
  }
  return {pmf_at(best_p1), best, range};
}

Lemma1Table verify_lemma1(double s, double s_avg, std::uint32_t q,
                          std::span<const double> s_delta_grid) {
  if (s_delta_grid.empty()) throw std::invalid_argument("verify_lemma1: empty grid");
  Lemma1Table table{{}, 0};
  for (double delta : s_delta_grid) {
    try {
      const AsymmetricOptimum opt = optimize_asymmetric_n2(s, s_avg, delta, q);
      table.rows.push_back({delta, opt.total_leakage, true});
    } catch (const InfeasibleError&) {
      table.rows.push_back({delta, std::numeric_limits<double>::infinity(), false});
    }
  }
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (table.rows[i].total_leakage < table.rows[table.argmin].total_leakage) table.argmin = i;
  }
  return table;
}

GridOptimum grid_search_oracle(double s, double s_d, std::uint32_t q, std::uint32_t n,
                               double resolution) {
  validate_qn(q, n);
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("grid_search_oracle: s must be in (0, 1)");
  if (!(resolution > 0.0)) throw std::invalid_argument("grid_search_oracle: resolution must be positive");
  s_d = checked_sd(s, s_d, q, n);
  Interval range = admissible_p_star(s, s_d, n);
  range.hi = std::max(range.hi, range.lo);

  const PrimeField field(q);
  GridOptimum best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  const auto steps = static_cast<std::size_t>(std::floor((range.hi - range.lo) / resolution));
  for (std::size_t k = 0; k <= steps + 1; ++k) {
    const double p_star = k > steps ? range.hi : range.lo + static_cast<double>(k) * resolution;
    const double p1 = std::clamp((s_d - p_star * (1.0 - s)) / s, 0.0, 1.0);
    const SymmetricSharePMF pmf(field, n, p1, std::min(p_star, 1.0 / n));
    const double leakage = analytic_leakage(pmf, s, share_sparsity(pmf, s));
    if (leakage < best.leakage) best = {p1, pmf.p_star(), leakage};
  }
  return best;
}

}  // namespace sparseshare
