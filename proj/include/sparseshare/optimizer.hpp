#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sparseshare/model.hpp"

namespace sparseshare {

/// Coefficients b_0..b_{n+1} of the degree-(n+1) polynomial in p_star whose
/// admissible root is the leakage-optimal p_star, together with the helper
/// quantities s1 = s_d/(1-s), s2 = (s-s_d)/(1-s), c = (q-1)/(q-n)^n.
struct Theorem1Coefficients {
  double s1;
  double s2;
  double c;
  double log_c;  ///< ln c, valid even when c underflows
  std::vector<double> b;
  /// (q-n)^n exceeds 1e300: the coefficients are unreliable and the root is
  /// found on the logarithmic form of the balance equation instead.
  bool log_domain;
};

/// Throws std::invalid_argument for s outside (0, 1) or bad (q, n), and
/// InfeasibleError when s_d lies outside feasible_sd_range.
Theorem1Coefficients theorem1_coefficients(double s, double s_d, std::uint32_t q,
                                           std::uint32_t n);

/// Horner evaluation of sum_j b[j] x^j.
double evaluate_polynomial(std::span<const double> b, double x) noexcept;

/// Values of p_star for which p1 and p_star_inv are valid probabilities:
/// [max(0, (s_d - s)/(1 - s)), min(s_d/(1 - s), 1/n)].
Interval admissible_p_star(double s, double s_d, std::uint32_t n);

/// Admissible root of the polynomial (scan + bisection, or the log form when
/// coefficients.log_domain). InfeasibleError if there is none;
/// MultipleRootsError (with every candidate) if there is more than one.
double find_p_star(double s, double s_d, std::uint32_t q, std::uint32_t n);

/// Relative mismatch of the optimality balance
///   (q-1)(s_d - (1-s)p)/(s - s_d + (1-s)p) = ((q-n) p/(1 - n p))^n.
/// With p1 = (s_d - (1-s)p)/s this is p1/p1_inv = (p_star/p_star_inv)^n, which
/// is how it is evaluated: from the pmf's own masses, since near the ends of
/// the admissible interval 1 - p1 is not recoverable from p_star in doubles.
double balance_error(const SymmetricSharePMF& pmf);

/// Leakage-optimal symmetric pmf for n shares of sparsity s_d.
/// Handles the degenerate sources s = 0 and s = 1 without the polynomial.
SymmetricSharePMF solve_optimal_pmf(double s, double s_d, std::uint32_t q, std::uint32_t n);

struct TradeoffPoint {
  double s;
  double s_d;
  std::uint32_t q;
  std::uint32_t n;
  double p1;
  double p_star;
  double leakage;   ///< q-ary, per share
  double relative;  ///< leakage / H_q(A)
  bool boundary;    ///< p_star or p1 at the edge of its admissible range
};

TradeoffPoint optimal_tradeoff_point(double s, double s_d, std::uint32_t q, std::uint32_t n);

struct TradeoffCurve {
  std::vector<TradeoffPoint> points;  ///< ascending in s_d
  /// Relative leakage falls towards s_d = 1/q and rises away from it.
  bool monotone;
  double max_monotonicity_violation;
};

/// One optimal point per grid value, evaluated on up to `threads` threads
/// (0 = hardware concurrency). Output order does not depend on threading.
TradeoffCurve sweep_tradeoff(double s, std::uint32_t q, std::uint32_t n,
                             std::span<const double> s_d_grid, unsigned threads = 0);

/// Grid values lo, lo + step, ... up to and including hi (within step/1e6).
std::vector<double> make_grid(double lo, double hi, double step);

/// k * step for k = -K..K with K = round(half_width/step); 0 is exact.
std::vector<double> symmetric_grid(double half_width, double step);

struct AsymmetricOptimum {
  AsymmetricSharePMF pmf;
  double total_leakage;
  Interval p1_range;
};

/// Feasible p1 interval of the two-share scheme at sparsities
/// s_R = s_avg - s_delta, s_{A+R} = s_avg + s_delta (lo > hi when empty).
Interval asymmetric_p1_range(double s, double s_avg, double s_delta);

/// Minimizes the two-share total leakage over p1 (p2, p3 follow from the
/// sparsity constraints) with golden-section search to 1e-12 width.
AsymmetricOptimum optimize_asymmetric_n2(double s, double s_avg, double s_delta,
                                         std::uint32_t q);

struct Lemma1Row {
  double s_delta;
  double total_leakage;  ///< +inf when the pmf family cannot realize s_delta
  bool feasible;
};

struct Lemma1Table {
  std::vector<Lemma1Row> rows;
  std::size_t argmin;  ///< index into rows of the smallest total leakage
};

Lemma1Table verify_lemma1(double s, double s_avg, std::uint32_t q,
                          std::span<const double> s_delta_grid);

struct GridOptimum {
  double p1;
  double p_star;
  double leakage;
};

/// Exhaustive scan of p_star over the admissible interval in steps of
/// `resolution` (endpoint included), p1 implied by the sparsity constraint.
GridOptimum grid_search_oracle(double s, double s_d, std::uint32_t q, std::uint32_t n,
                               double resolution);

}  // namespace sparseshare
