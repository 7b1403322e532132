#include "sparseshare/leakage.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparseshare {

namespace {

constexpr double kSparsityMatch = 1e-9;

void require_sparsity(double expected, double given, const char* what) {
  if (std::abs(expected - given) > kSparsityMatch) {
    throw std::invalid_argument(std::string(what) + ": sparsity " + std::to_string(given) +
                                " does not match pmf-implied " + std::to_string(expected));
  }
}

}  // namespace

LeakageReport make_report(double leakage, double entropy) {
  return {leakage, entropy, entropy > 0.0 ? leakage / entropy : 0.0};
}

double z_term(double x, double y, std::uint32_t q) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) throw std::domain_error("z_term: positive mass against zero reference");
  return x * std::log(x / y) / std::log(static_cast<double>(q));
}

double q_entropy(double s, std::uint32_t q) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("q_entropy: s not in [0, 1]");
  const double lq = std::log(static_cast<double>(q));
  double h = 0.0;
  if (s > 0.0) h -= s * std::log(s);
  if (s < 1.0) h -= (1.0 - s) * std::log((1.0 - s) / (q - 1));
  return h / lq;
}

double q_entropy(const SourceModel& model) {
  return q_entropy(model.sparsity, model.field.modulus());
}

double analytic_leakage(const SymmetricSharePMF& pmf, double s, double s_d) {
  require_sparsity(share_sparsity(pmf, s), s_d, "analytic_leakage");
  const std::uint32_t q = pmf.q();
  const double n = pmf.n();
  const double s_d_inv = (1.0 - s_d) / (q - 1);
  const double zero_part = z_term(pmf.p1(), s_d, q) + (q - 1) * z_term(pmf.p1_inv(), s_d_inv, q);
  const double nonzero_part = z_term(pmf.p_star(), s_d, q) +
                              (n - 1) * z_term(pmf.p_star(), s_d_inv, q) +
                              (q - n) * z_term(pmf.p_star_inv(), s_d_inv, q);
  return s * zero_part + (1.0 - s) * nonzero_part;
}

double brute_force_mi(const SourceModel& model, const SymmetricSharePMF& pmf,
                      const ShareParams& params, std::size_t share) {
  if (share >= params.n()) throw std::out_of_range("brute_force_mi: share index");
  if (!(model.field == pmf.field()) || !(params.field() == pmf.field())) {
    throw std::invalid_argument("brute_force_mi: field mismatch");
  }
  const PrimeField& field = pmf.field();
  const std::uint32_t q = field.modulus();
  const FieldElement alpha = params.alpha(share);
  const FieldElement alpha_inv = field.mul_inverse(alpha);

  // cond[a * q + b] = Pr(share = b | A = a) = Pr(R = (b - a)/alpha | A = a)
  std::vector<double> cond(static_cast<std::size_t>(q) * q);
  std::vector<double> marginal(q, 0.0);
  for (std::uint32_t a = 0; a < q; ++a) {
    const FieldElement fa = field.element(a);
    for (std::uint32_t b = 0; b < q; ++b) {
      const FieldElement r = field.mul(field.sub(field.element(b), fa), alpha_inv);
      const double p = conditional_prob(pmf, params, r, fa);
      cond[static_cast<std::size_t>(a) * q + b] = p;
      marginal[b] += model.prob(a) * p;
    }
  }
  const double lq = std::log(static_cast<double>(q));
  double mi = 0.0;
  for (std::uint32_t a = 0; a < q; ++a) {
    const double pa = model.prob(a);
    if (pa == 0.0) continue;
    for (std::uint32_t b = 0; b < q; ++b) {
      const double p = cond[static_cast<std::size_t>(a) * q + b];
      if (p == 0.0) continue;
      mi += pa * p * std::log(p / marginal[b]);
    }
  }
  return mi / lq;
}

double asymmetric_total_leakage(const AsymmetricSharePMF& pmf, double s, double s_avg,
                                double s_delta) {
  const AsymmetricSparsities sp = asymmetric_sparsities(pmf, s);
  const double s_r = s_avg - s_delta;
  const double s_ar = s_avg + s_delta;
  require_sparsity(sp.s_r, s_r, "asymmetric_total_leakage (R)");
  require_sparsity(sp.s_ar, s_ar, "asymmetric_total_leakage (A+R)");
  const std::uint32_t q = pmf.q();
  const double s_r_inv = (1.0 - s_r) / (q - 1);
  const double s_ar_inv = (1.0 - s_ar) / (q - 1);
  const double zero_part =
      z_term(pmf.p1(), s_ar, q) + z_term(pmf.p1(), s_r, q) +
      (q - 1) * (z_term(pmf.p1_inv(), s_ar_inv, q) + z_term(pmf.p1_inv(), s_r_inv, q));
  const double nonzero_part =
      z_term(pmf.p2(), s_ar_inv, q) + z_term(pmf.p2(), s_r, q) + z_term(pmf.p3(), s_ar, q) +
      z_term(pmf.p3(), s_r_inv, q) +
      (q - 2) * (z_term(pmf.p23_inv(), s_ar_inv, q) + z_term(pmf.p23_inv(), s_r_inv, q));
  return s * zero_part + (1.0 - s) * nonzero_part;
}

double brute_force_asymmetric_mi(const SourceModel& model, const AsymmetricSharePMF& pmf) {
  if (!(model.field == pmf.field())) {
    throw std::invalid_argument("brute_force_asymmetric_mi: field mismatch");
  }
  const PrimeField& field = pmf.field();
  const std::uint32_t q = field.modulus();
  // Share 0 is R itself, share 1 is A + R; r = b - coeff_a * a.
  double total = 0.0;
  for (std::uint32_t coeff_a : {0U, 1U}) {
    std::vector<double> marginal(q, 0.0);
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) {
        const std::uint32_t r = field.raw_sub(b, field.raw_mul(coeff_a, a));
        marginal[b] += model.prob(a) * pmf.conditional_prob(r, a);
      }
    }
    double mi = 0.0;
    for (std::uint32_t a = 0; a < q; ++a) {
      const double pa = model.prob(a);
      if (pa == 0.0) continue;
      for (std::uint32_t b = 0; b < q; ++b) {
        const std::uint32_t r = field.raw_sub(b, field.raw_mul(coeff_a, a));
        const double p = pmf.conditional_prob(r, a);
        if (p > 0.0) mi += pa * p * std::log(p / marginal[b]);
      }
    }
    total += mi / std::log(static_cast<double>(q));
  }
  return total;
}

double kl_divergence(std::span<const double> p, std::span<const double> q, double base) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: length mismatch");
  if (!(base > 1.0)) throw std::invalid_argument("kl_divergence: base must exceed 1");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw std::invalid_argument("kl_divergence: negative mass");
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      throw std::domain_error("kl_divergence: Q has no support at index " + std::to_string(i));
    }
    d += p[i] * std::log(p[i] / q[i]);
  }
  return d / std::log(base);
}

double stationarity_residual(const SymmetricSharePMF& pmf) {
  if (pmf.p1() <= 0.0 || pmf.p1_inv() <= 0.0 || pmf.p_star() <= 0.0 ||
      pmf.p_star_inv() <= 0.0) {
    throw std::domain_error("stationarity_residual: pmf is on the boundary");
  }
  const double n = pmf.n();
  return std::abs(pmf.p1() * std::pow(pmf.p_star_inv(), n) -
                  pmf.p1_inv() * std::pow(pmf.p_star(), n));
}

}  // namespace sparseshare
