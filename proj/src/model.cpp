#include "sparseshare/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sparseshare {

namespace {

constexpr double kProbSlack = 1e-12;

// Snaps values within rounding of [0, 1] onto it; rejects anything further out.
double checked_prob(double p, const char* name) {
  if (!std::isfinite(p) || p < -kProbSlack || p > 1.0 + kProbSlack) {
    throw std::invalid_argument(std::string(name) + " = " + std::to_string(p) +
                                " is not a probability");
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

SymmetricSharePMF::SymmetricSharePMF(PrimeField field, std::uint32_t n, double p1,
                                     double p_star)
    : field_(field), n_(n) {
  const std::uint32_t q = field_.modulus();
  if (n < 2) throw std::invalid_argument("SymmetricSharePMF: need n >= 2 shares");
  if (n >= q) {
    throw std::invalid_argument("SymmetricSharePMF: need n < q (n = " + std::to_string(n) +
                                ", q = " + std::to_string(q) + ")");
  }
  p1_ = checked_prob(p1, "p1");
  p_star_ = checked_prob(p_star, "p_star");
  p1_inv_ = checked_prob((1.0 - p1_) / (q - 1), "p1_inv");
  p_star_inv_ = checked_prob((1.0 - n * p_star_) / (q - n), "p_star_inv");
}

SymmetricSharePMF::SymmetricSharePMF(PrimeField field, std::uint32_t n, double p1,
                                     double p1_inv, double p_star, double p_star_inv)
    : SymmetricSharePMF(field, n, p1, p_star) {
  const std::uint32_t q = field_.modulus();
  p1_inv = checked_prob(p1_inv, "p1_inv");
  p_star_inv = checked_prob(p_star_inv, "p_star_inv");
  if (std::abs(p1_ + (q - 1) * p1_inv - 1.0) > kProbSlack ||
      std::abs(n * p_star_ + (q - n) * p_star_inv - 1.0) > kProbSlack) {
    throw std::invalid_argument("SymmetricSharePMF: masses do not normalize");
  }
  p1_inv_ = p1_inv;
  p_star_inv_ = p_star_inv;
}

SymmetricSharePMF SymmetricSharePMF::uniform(PrimeField field, std::uint32_t n) {
  const double u = 1.0 / field.modulus();
  return SymmetricSharePMF(field, n, u, u);
}

AsymmetricSharePMF::AsymmetricSharePMF(PrimeField field, double p1, double p2, double p3)
    : field_(field) {
  const std::uint32_t q = field_.modulus();
  if (q < 3) throw std::invalid_argument("AsymmetricSharePMF: need q >= 3");
  p1_ = checked_prob(p1, "p1");
  p2_ = checked_prob(p2, "p2");
  p3_ = checked_prob(p3, "p3");
  p1_inv_ = checked_prob((1.0 - p1_) / (q - 1), "p1_inv");
  p23_inv_ = checked_prob((1.0 - p2_ - p3_) / (q - 2), "p23_inv");
}

double AsymmetricSharePMF::conditional_prob(std::uint32_t r, std::uint32_t a) const noexcept {
  if (a == 0) return r == 0 ? p1_ : p1_inv_;
  if (r == 0) return p2_;
  if (field_.raw_add(r, a) == 0) return p3_;
  return p23_inv_;
}

ShareParams::ShareParams(PrimeField field, std::vector<FieldElement> alphas)
    : field_(field), alphas_(std::move(alphas)) {
  if (alphas_.empty()) throw std::invalid_argument("ShareParams: no evaluation points");
  if (alphas_.size() > field_.modulus() - 1) {
    throw std::invalid_argument("ShareParams: more points than nonzero field elements");
  }
  std::vector<std::uint32_t> seen;
  for (const FieldElement& a : alphas_) {
    if (!field_.contains(a)) throw std::invalid_argument("ShareParams: point not in field");
    if (a.value == 0) throw std::invalid_argument("ShareParams: evaluation point is zero");
    seen.push_back(a.value);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("ShareParams: evaluation points not distinct");
  }
}

ShareParams ShareParams::canonical(PrimeField field, std::uint32_t n) {
  std::vector<FieldElement> alphas;
  alphas.reserve(n);
  for (std::uint32_t i = 1; i <= n; ++i) alphas.push_back(field.element(i));
  return ShareParams(field, std::move(alphas));
}

std::vector<std::uint32_t> ShareParams::special_values(std::uint32_t a) const {
  if (a % field_.modulus() == 0) {
    throw std::invalid_argument("special_values: source entry must be nonzero");
  }
  const std::uint32_t minus_a = field_.raw_neg(a);
  std::vector<std::uint32_t> out;
  out.reserve(alphas_.size());
  for (const FieldElement& alpha : alphas_) {
    out.push_back(field_.raw_mul(minus_a, field_.raw_inverse(alpha.value)));
  }
  return out;
}

bool ShareParams::is_special(std::uint32_t r, std::uint32_t a) const noexcept {
  // r = -a/alpha  <=>  a + alpha r = 0
  return std::any_of(alphas_.begin(), alphas_.end(), [&](const FieldElement& alpha) {
    return field_.raw_add(a, field_.raw_mul(alpha.value, r)) == 0;
  });
}

double conditional_prob(const SymmetricSharePMF& pmf, const ShareParams& params,
                        FieldElement r, FieldElement a) {
  if (pmf.n() != params.n()) {
    throw std::invalid_argument("conditional_prob: pmf and params disagree on n");
  }
  if (!(pmf.field() == params.field()) || !pmf.field().contains(r) ||
      !pmf.field().contains(a)) {
    throw std::invalid_argument("conditional_prob: field mismatch");
  }
  if (a.value == 0) return r.value == 0 ? pmf.p1() : pmf.p1_inv();
  return params.is_special(r.value, a.value) ? pmf.p_star() : pmf.p_star_inv();
}

double share_sparsity(const SymmetricSharePMF& pmf, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("share_sparsity: s not in [0, 1]");
  return pmf.p1() * s + pmf.p_star() * (1.0 - s);
}

AsymmetricSparsities asymmetric_sparsities(const AsymmetricSharePMF& pmf, double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::invalid_argument("asymmetric_sparsities: s not in [0, 1]");
  }
  return {pmf.p1() * s + pmf.p2() * (1.0 - s), pmf.p1() * s + pmf.p3() * (1.0 - s)};
}

Interval feasible_sd_range(double s, std::uint32_t q, std::uint32_t n) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("feasible_sd_range: s not in [0, 1]");
  if (n < 2 || n >= q) throw std::invalid_argument("feasible_sd_range: need 2 <= n < q");
  return {0.0, s + (1.0 - s) / n};
}

}  // namespace sparseshare
