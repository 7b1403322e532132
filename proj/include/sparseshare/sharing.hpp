#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "sparseshare/model.hpp"
#include "sparseshare/spmat.hpp"

namespace sparseshare {

/// n shares A + alpha_i R of one source matrix.
struct ShareSet {
  ShareParams params;
  std::vector<SparseMatrix> shares;  ///< shares[i] belongs to params.alpha(i)
  std::optional<SymmetricSharePMF> pmf;
  std::optional<std::uint64_t> seed;

  std::size_t rows() const { return shares.front().rows(); }
  std::size_t cols() const { return shares.front().cols(); }
};

/// One worker result H = f_A(alpha) g_B(alpha).
struct ProductEvaluation {
  FieldElement alpha;
  SparseMatrix h;
};

/// Samples R entrywise from the symmetric conditional law given the
/// co-located entry of A. One uniform draw per entry in row-major order.
/// Category order for the inverse CDF:
///   a == 0:  0, then 1..q-1
///   a != 0:  -a/alpha_1, ..., -a/alpha_n, then the remaining values ascending
SparseMatrix sample_padding(const SparseMatrix& a, const SymmetricSharePMF& pmf,
                            const ShareParams& params, std::uint64_t seed);

/// Generalized padding sampler: given a != 0 the special values are
/// -a * kappa_j (in the given order) with masses special_mass[j]; the rest of
/// the field shares the remaining mass uniformly. kappa = 0 makes the share R
/// itself sparse. Used for the four- and three-task schemes.
SparseMatrix sample_padding_special(const SparseMatrix& a, double p1,
                                    std::span<const std::uint32_t> kappa,
                                    std::span<const double> special_mass,
                                    std::uint64_t seed);

/// Padding for the (R, A + R) pair: specials 0 (mass p2) then -a (mass p3).
SparseMatrix sample_padding_asymmetric(const SparseMatrix& a, const AsymmetricSharePMF& pmf,
                                       std::uint64_t seed);

/// shares[i] = A + alpha_i R.
ShareSet make_shares(const SparseMatrix& a, const SparseMatrix& r, const ShareParams& params);

/// sample_padding followed by make_shares; records pmf and seed.
ShareSet encode(const SparseMatrix& a, const SymmetricSharePMF& pmf, const ShareParams& params,
                std::uint64_t seed);

/// Worker task i: share_a.shares[i] * share_b.shares[i].
ProductEvaluation evaluate_task(const ShareSet& share_a, const ShareSet& share_b, std::size_t i);

/// Interpolates h(x) = A B + x (R B + A S) + x^2 R S at x = 0 from the three
/// evaluations with the smallest alpha. With `cross_check`, every further
/// evaluation must lie on the interpolated polynomial (DecodeError otherwise).
/// Throws std::invalid_argument for fewer than three points or repeated alpha.
SparseMatrix reconstruct_product(std::span<const ProductEvaluation> evals,
                                 bool cross_check = false);

struct FourTaskResult {
  SparseMatrix t1, t2, t3, t4;
  SparseMatrix c;  ///< t1 - t2 - t3 + t4
};

/// T1 = (A+R)(B+S), T2 = (A+R)S, T3 = R(B+S), T4 = RS.
FourTaskResult four_task_scheme(const SparseMatrix& a, const SparseMatrix& b,
                                const SparseMatrix& r, const SparseMatrix& s);

struct ThreeTaskResult {
  SparseMatrix t1, t2, t3;
  SparseMatrix c;  ///< t1 - t2 - t3
};

/// T1 = (A+R)(B+S), T2 = (A + R/2) S, T3 = R (B + S/2). Needs q >= 3.
ThreeTaskResult three_task_scheme(const SparseMatrix& a, const SparseMatrix& b,
                                  const SparseMatrix& r, const SparseMatrix& s);

/// Writes share_<i>.spfq (1-based) for every share plus manifest.txt.
void write_share_set(const ShareSet& set, const std::filesystem::path& dir);
ShareSet read_share_set(const std::filesystem::path& dir);

}  // namespace sparseshare
