#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "sparseshare/model.hpp"
#include "sparseshare/spmat.hpp"

namespace sparseshare {

/// Per-entry leakage of one share, all in q-ary units.
struct LeakageReport {
  double leakage;   ///< I_q(A; A + alpha_i R)
  double entropy;   ///< H_q(A)
  double relative;  ///< leakage / entropy, 0 for a deterministic source
};

LeakageReport make_report(double leakage, double entropy);

/// x log_q(x / y) with 0 log(0/y) = 0. Throws std::domain_error for x > 0, y <= 0.
double z_term(double x, double y, std::uint32_t q);

/// q-ary entropy of one source entry.
double q_entropy(const SourceModel& model);
double q_entropy(double s, std::uint32_t q);

/// Closed-form per-share leakage for the symmetric scheme. `s_d` must equal
/// share_sparsity(pmf, s) to 1e-9 (std::invalid_argument otherwise).
double analytic_leakage(const SymmetricSharePMF& pmf, double s, double s_d);

/// I_q(A; A + alpha_i R) by direct summation over (a, b) in F_q^2, using the
/// marginal of the share computed by summation. `share` is 0-based.
double brute_force_mi(const SourceModel& model, const SymmetricSharePMF& pmf,
                      const ShareParams& params, std::size_t share);

/// Total leakage I_q(A; R) + I_q(A; A + R) of the two-share scheme in closed form.
/// `s_avg - s_delta` and `s_avg + s_delta` must match asymmetric_sparsities(pmf, s).
double asymmetric_total_leakage(const AsymmetricSharePMF& pmf, double s, double s_avg,
                                double s_delta);

/// Same quantity as asymmetric_total_leakage, by brute-force summation.
double brute_force_asymmetric_mi(const SourceModel& model, const AsymmetricSharePMF& pmf);

/// D(P || Q) in base `base` logarithms. Throws if lengths differ or Q lacks
/// support where P has mass.
double kl_divergence(std::span<const double> p, std::span<const double> q, double base);

/// |p1 p_star_inv^n - p1_inv p_star^n|, the first-order optimality residual of
/// the symmetric scheme. Requires an interior pmf.
double stationarity_residual(const SymmetricSharePMF& pmf);

/// q-ary units to bits.
inline double to_bits(double qary, std::uint32_t q) {
  return qary * std::log2(static_cast<double>(q));
}

}  // namespace sparseshare
