#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "sparseshare/field.hpp"

namespace sparseshare {

struct Triplet {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  std::uint32_t value = 0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Sparse matrix over F_q in coordinate form.
///
/// Entries are strictly sorted row-major, carry no duplicates and store only
/// nonzero canonical values. The matrix is immutable once constructed; all
/// arithmetic returns new matrices.
class SparseMatrix {
 public:
  /// Validates the invariants and throws std::invalid_argument on violation.
  SparseMatrix(PrimeField field, std::size_t rows, std::size_t cols,
               std::vector<Triplet> entries);

  /// Zero matrix.
  SparseMatrix(PrimeField field, std::size_t rows, std::size_t cols);

  /// Accepts triplets in any order; duplicates are summed in F_q, values are
  /// reduced mod q and zeros dropped.
  static SparseMatrix from_triplets(PrimeField field, std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);

  /// Row-major dense values, each reduced mod q.
  static SparseMatrix from_dense(PrimeField field, std::size_t rows, std::size_t cols,
                                 std::span<const std::int64_t> values);

  static SparseMatrix identity(PrimeField field, std::size_t n);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  std::span<const Triplet> entries() const noexcept { return entries_; }

  /// CSR row offsets (size rows()+1) into entries().
  std::vector<std::size_t> row_offsets() const;

  /// Value at (r, c); zero when not stored.
  std::uint32_t at(std::size_t r, std::size_t c) const;

  std::vector<std::uint32_t> to_dense() const;

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.entries_ == b.entries_;
  }

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Triplet> entries_;
};

/// i.i.d. entry model: Pr(0) = sparsity, every nonzero value equally likely.
struct SourceModel {
  PrimeField field;
  double sparsity;

  SourceModel(PrimeField f, double s);

  double prob(std::uint32_t value) const noexcept {
    return value == 0 ? sparsity
                      : (1.0 - sparsity) / static_cast<double>(field.modulus() - 1);
  }
};

/// Exact product A*B over F_q with row-wise (Gustavson) accumulation.
SparseMatrix sp_mul(const SparseMatrix& a, const SparseMatrix& b);

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix sub(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix scale(const SparseMatrix& a, std::uint32_t factor);
/// a + factor * b
SparseMatrix add_scaled(const SparseMatrix& a, const SparseMatrix& b, std::uint32_t factor);
/// sum_i coeffs[i] * terms[i]
SparseMatrix linear_combination(std::span<const SparseMatrix> terms,
                                std::span<const std::uint32_t> coeffs);

/// Row-major i.i.d. sample, one uniform draw per entry, inverse CDF over the
/// ordered alphabet 0, 1, ..., q-1.
SparseMatrix sample_source_matrix(const SourceModel& model, std::size_t rows,
                                  std::size_t cols, std::uint64_t seed);

/// Fraction of zero entries, (rows*cols - nnz) / (rows*cols).
double empirical_sparsity(const SparseMatrix& m);

/// Multiply-cost proxy: sum over nonzeros (r, c) of `a` of nnz(row c of `b`).
std::uint64_t multiply_cost(const SparseMatrix& a, const SparseMatrix& b);

// SPFQ 1 text format:
//   SPFQ 1
//   q k m nnz
//   row col value     (nnz lines, 0-indexed, row-major sorted, 1 <= value < q)
void write_matrix(const SparseMatrix& m, std::ostream& out);
void write_matrix(const SparseMatrix& m, const std::filesystem::path& path);
SparseMatrix read_matrix(std::istream& in);
SparseMatrix read_matrix(const std::filesystem::path& path);

}  // namespace sparseshare
