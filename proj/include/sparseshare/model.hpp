#pragma once

#include <cstdint>
#include <vector>

#include "sparseshare/field.hpp"

namespace sparseshare {

/// Conditional law of a padding entry R given the source entry A (t = 2,
/// z = 1 scheme with n shares A + alpha_i R):
///
///   a == 0:  Pr(R = 0) = p1,  Pr(R = r) = p1_inv = (1 - p1)/(q - 1) for r != 0
///   a != 0:  Pr(R = -a/alpha_i) = p_star for each i,
///            Pr(R = r) = p_star_inv = (1 - n p_star)/(q - n) otherwise
class SymmetricSharePMF {
 public:
  /// Throws std::invalid_argument if n < 2, n >= q, or a probability leaves [0, 1].
  SymmetricSharePMF(PrimeField field, std::uint32_t n, double p1, double p_star);

  /// p1 = p_star = 1/q: R independent of A and uniform.
  /// All four masses given; for callers that know the complements more
  /// accurately than 1 - p1 would give. Both normalizations must hold to 1e-12.
  SymmetricSharePMF(PrimeField field, std::uint32_t n, double p1, double p1_inv,
                    double p_star, double p_star_inv);

  static SymmetricSharePMF uniform(PrimeField field, std::uint32_t n);

  const PrimeField& field() const noexcept { return field_; }
  std::uint32_t q() const noexcept { return field_.modulus(); }
  std::uint32_t n() const noexcept { return n_; }
  double p1() const noexcept { return p1_; }
  double p1_inv() const noexcept { return p1_inv_; }
  double p_star() const noexcept { return p_star_; }
  double p_star_inv() const noexcept { return p_star_inv_; }

 private:
  PrimeField field_;
  std::uint32_t n_;
  double p1_, p1_inv_, p_star_, p_star_inv_;
};

/// Two-share (R, A + R) law with separate masses on the two special values:
///
///   a == 0:  Pr(R = 0) = p1, Pr(R = r) = p1_inv for r != 0
///   a != 0:  Pr(R = 0) = p2, Pr(R = -a) = p3, p23_inv = (1-p2-p3)/(q-2) otherwise
class AsymmetricSharePMF {
 public:
  AsymmetricSharePMF(PrimeField field, double p1, double p2, double p3);

  const PrimeField& field() const noexcept { return field_; }
  std::uint32_t q() const noexcept { return field_.modulus(); }
  double p1() const noexcept { return p1_; }
  double p1_inv() const noexcept { return p1_inv_; }
  double p2() const noexcept { return p2_; }
  double p3() const noexcept { return p3_; }
  double p23_inv() const noexcept { return p23_inv_; }

  /// Pr(R = r | A = a).
  double conditional_prob(std::uint32_t r, std::uint32_t a) const noexcept;

 private:
  PrimeField field_;
  double p1_, p1_inv_, p2_, p3_, p23_inv_;
};

/// Distinct nonzero evaluation points alpha_1..alpha_n.
class ShareParams {
 public:
  ShareParams(PrimeField field, std::vector<FieldElement> alphas);

  /// alpha_i = i for i = 1..n.
  static ShareParams canonical(PrimeField field, std::uint32_t n);

  const PrimeField& field() const noexcept { return field_; }
  std::uint32_t n() const noexcept { return static_cast<std::uint32_t>(alphas_.size()); }
  const std::vector<FieldElement>& alphas() const noexcept { return alphas_; }
  FieldElement alpha(std::size_t i) const { return alphas_.at(i); }

  /// Special padding values {-a/alpha_i}, in share order. Requires a != 0.
  std::vector<std::uint32_t> special_values(std::uint32_t a) const;

  /// True iff r == -a/alpha_i for some i, i.e. share i is zero at this entry.
  bool is_special(std::uint32_t r, std::uint32_t a) const noexcept;

 private:
  PrimeField field_;
  std::vector<FieldElement> alphas_;
};

/// Pr(R = r | A = a) under `pmf` with evaluation points `params`.
double conditional_prob(const SymmetricSharePMF& pmf, const ShareParams& params,
                        FieldElement r, FieldElement a);

/// Zero-probability of every share: p1 s + p_star (1 - s).
double share_sparsity(const SymmetricSharePMF& pmf, double s);

struct AsymmetricSparsities {
  double s_r;   ///< sparsity of the share R
  double s_ar;  ///< sparsity of the share A + R
};

AsymmetricSparsities asymmetric_sparsities(const AsymmetricSharePMF& pmf, double s);

struct Interval {
  double lo;
  double hi;

  bool contains(double x, double tol = 0.0) const noexcept {
    return x >= lo - tol && x <= hi + tol;
  }
};

/// Achievable share sparsities for n shares of a source with sparsity s:
/// [0, s + (1 - s)/n].
Interval feasible_sd_range(double s, std::uint32_t q, std::uint32_t n);

}  // namespace sparseshare
