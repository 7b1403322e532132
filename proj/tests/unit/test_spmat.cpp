#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "sparseshare/errors.hpp"
#include "sparseshare/spmat.hpp"

namespace sparseshare {
namespace {

SparseMatrix random_matrix(const PrimeField& f, std::size_t k, std::size_t m, double density,
                           std::mt19937_64& rng) {
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<std::uint32_t> value(1, f.modulus() - 1);
  std::vector<std::int64_t> dense(k * m, 0);
  for (auto& v : dense) {
    if (keep(rng)) v = value(rng);
  }
  return SparseMatrix::from_dense(f, k, m, dense);
}

std::vector<std::uint32_t> dense_mul(const SparseMatrix& a, const SparseMatrix& b) {
  const auto da = a.to_dense(), db = b.to_dense();
  const std::uint64_t q = a.field().modulus();
  std::vector<std::uint32_t> out(a.rows() * b.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::uint64_t acc = 0;
      for (std::size_t l = 0; l < a.cols(); ++l) {
        acc = (acc + std::uint64_t{da[i * a.cols() + l]} * db[l * b.cols() + j]) % q;
      }
      out[i * b.cols() + j] = static_cast<std::uint32_t>(acc);
    }
  }
  return out;
}

TEST(SparseMatrix, RejectsBrokenInvariants) {
  PrimeField f(7);
  EXPECT_THROW(SparseMatrix(f, 2, 2, {{0, 0, 0}}), std::invalid_argument);
  EXPECT_THROW(SparseMatrix(f, 2, 2, {{0, 0, 7}}), std::invalid_argument);
  EXPECT_THROW(SparseMatrix(f, 2, 2, {{1, 0, 1}, {0, 0, 1}}), std::invalid_argument);
  EXPECT_THROW(SparseMatrix(f, 2, 2, {{0, 1, 1}, {0, 1, 2}}), std::invalid_argument);
  EXPECT_THROW(SparseMatrix(f, 2, 2, {{2, 0, 1}}), std::invalid_argument);
  EXPECT_THROW(SparseMatrix(f, 0, 2), std::invalid_argument);
}

TEST(SparseMatrix, FromTripletsSumsDuplicates) {
  PrimeField f(7);
  const auto m = SparseMatrix::from_triplets(f, 2, 2, {{1, 1, 3}, {0, 0, 5}, {1, 1, 4}});
  EXPECT_EQ(m.nnz(), 1U);
  EXPECT_EQ(m.at(0, 0), 5U);
  EXPECT_EQ(m.at(1, 1), 0U);
}

TEST(SpMul, SmallExample) {
  PrimeField f(7);
  const std::int64_t av[] = {1, 2, 0, 3};
  const std::int64_t bv[] = {4, 0, 5, 6};
  const std::int64_t cv[] = {0, 5, 1, 4};
  const auto c = sp_mul(SparseMatrix::from_dense(f, 2, 2, av), SparseMatrix::from_dense(f, 2, 2, bv));
  EXPECT_EQ(c, SparseMatrix::from_dense(f, 2, 2, cv));
}

TEST(SpMul, IdentityAndZero) {
  PrimeField f(89);
  std::mt19937_64 rng(1);
  const auto b = random_matrix(f, 3, 5, 0.5, rng);
  EXPECT_EQ(sp_mul(SparseMatrix::identity(f, 3), b), b);
  const auto z = sp_mul(SparseMatrix(f, 4, 3), b);
  EXPECT_EQ(z.nnz(), 0U);
  EXPECT_EQ(z.rows(), 4U);
  EXPECT_EQ(z.cols(), 5U);
}

TEST(SpMul, MatchesDenseReference) {
  std::mt19937_64 rng(11);
  for (std::uint32_t q : {2U, 7U, 89U, 5081U}) {
    PrimeField f(q);
    for (int t = 0; t < 20; ++t) {
      std::uniform_int_distribution<std::size_t> dim(1, 30);
      const std::size_t k = dim(rng), l = dim(rng), m = dim(rng);
      std::uniform_real_distribution<double> dens(0.0, 1.0);
      const auto a = random_matrix(f, k, l, dens(rng), rng);
      const auto b = random_matrix(f, l, m, dens(rng), rng);
      EXPECT_EQ(sp_mul(a, b).to_dense(), dense_mul(a, b)) << "q=" << q;
    }
  }
}

TEST(SpMul, Errors) {
  PrimeField f7(7), f11(11);
  EXPECT_THROW(sp_mul(SparseMatrix(f7, 2, 3), SparseMatrix(f7, 2, 3)), std::invalid_argument);
  EXPECT_THROW(sp_mul(SparseMatrix(f7, 2, 2), SparseMatrix(f11, 2, 2)), std::invalid_argument);
}

TEST(SpMat, ArithmeticHelpers) {
  PrimeField f(7);
  const std::int64_t av[] = {1, 2, 0, 3};
  const std::int64_t bv[] = {6, 5, 1, 0};
  const auto a = SparseMatrix::from_dense(f, 2, 2, av);
  const auto b = SparseMatrix::from_dense(f, 2, 2, bv);
  const std::int64_t sum[] = {0, 0, 1, 3};
  EXPECT_EQ(add(a, b), SparseMatrix::from_dense(f, 2, 2, sum));
  EXPECT_EQ(sub(add(a, b), b), a);
  const std::int64_t a_plus_2b[] = {13, 12, 2, 3};
  EXPECT_EQ(add_scaled(a, b, 2), SparseMatrix::from_dense(f, 2, 2, a_plus_2b));
  EXPECT_EQ(scale(a, 0).nnz(), 0U);
  const SparseMatrix terms[] = {a, b};
  const std::uint32_t coeffs[] = {1, 2};
  EXPECT_EQ(linear_combination(terms, coeffs), add_scaled(a, b, 2));
}

TEST(SampleSource, ReferenceDraws) {
  // tests/oracles/prng_vectors.py: q=7, s=0.5, 3x4, seed 11
  const auto m = sample_source_matrix(SourceModel(PrimeField(7), 0.5), 3, 4, 11);
  const std::vector<Triplet> expected{{1, 2, 1}, {1, 3, 6}, {2, 0, 2}};
  EXPECT_EQ(std::vector<Triplet>(m.entries().begin(), m.entries().end()), expected);
}

TEST(SampleSource, Degenerate) {
  EXPECT_EQ(sample_source_matrix(SourceModel(PrimeField(89), 1.0), 20, 30, 5).nnz(), 0U);
  const auto ones = sample_source_matrix(SourceModel(PrimeField(2), 0.0), 20, 30, 5);
  EXPECT_EQ(ones.nnz(), 600U);
  for (const auto& t : ones.entries()) EXPECT_EQ(t.value, 1U);
}

TEST(SampleSource, Deterministic) {
  const SourceModel model(PrimeField(89), 0.8);
  EXPECT_EQ(sample_source_matrix(model, 40, 40, 9), sample_source_matrix(model, 40, 40, 9));
  EXPECT_NE(sample_source_matrix(model, 40, 40, 9), sample_source_matrix(model, 40, 40, 10));
}

TEST(SampleSource, EmpiricalSparsityWithinThreeSigma) {
  const auto m = sample_source_matrix(SourceModel(PrimeField(89), 0.95), 1000, 1000, 2024);
  const double sigma = std::sqrt(0.95 * 0.05 / 1e6);
  EXPECT_NEAR(empirical_sparsity(m), 0.95, 3 * sigma);
}

TEST(SampleSource, NonzerosUniform) {
  // chi-square over the 88 nonzero symbols, 87 dof; 99.9% quantile ~ 135
  const auto m = sample_source_matrix(SourceModel(PrimeField(89), 0.5), 500, 500, 77);
  std::vector<double> counts(89, 0.0);
  for (const auto& t : m.entries()) counts[t.value] += 1;
  const double expected = static_cast<double>(m.nnz()) / 88;
  double chi2 = 0;
  for (int v = 1; v < 89; ++v) chi2 += (counts[v] - expected) * (counts[v] - expected) / expected;
  EXPECT_LT(chi2, 135.0);
}

TEST(EmpiricalSparsity, Basics) {
  PrimeField f(89);
  EXPECT_EQ(empirical_sparsity(SparseMatrix(f, 3, 3)), 1.0);
  std::vector<std::int64_t> dense(9, 4);
  EXPECT_EQ(empirical_sparsity(SparseMatrix::from_dense(f, 3, 3, dense)), 0.0);
  std::vector<std::int64_t> v(100, 0);
  for (int i = 0; i < 37; ++i) v[i * 2] = 1;
  EXPECT_DOUBLE_EQ(empirical_sparsity(SparseMatrix::from_dense(f, 10, 10, v)), 0.63);
}

TEST(MultiplyCost, CountsMatchedRowNonzeros) {
  PrimeField f(7);
  const std::int64_t av[] = {1, 1, 0, 1};
  const std::int64_t bv[] = {1, 1, 1, 0};
  // a(0,0)->row0 (2), a(0,1)->row1 (1), a(1,1)->row1 (1)
  EXPECT_EQ(multiply_cost(SparseMatrix::from_dense(f, 2, 2, av), SparseMatrix::from_dense(f, 2, 2, bv)),
            4U);
}

TEST(SpfqFormat, RoundTrip) {
  std::mt19937_64 rng(5);
  const auto m = random_matrix(PrimeField(5081), 17, 23, 0.3, rng);
  std::stringstream ss;
  write_matrix(m, ss);
  EXPECT_EQ(read_matrix(ss), m);
}

TEST(SpfqFormat, ExactText) {
  PrimeField f(7);
  const std::int64_t av[] = {0, 3, 5, 0};
  std::stringstream ss;
  write_matrix(SparseMatrix::from_dense(f, 2, 2, av), ss);
  EXPECT_EQ(ss.str(), "SPFQ 1\n7 2 2 2\n0 1 3\n1 0 5\n");
}

TEST(SpfqFormat, EmptyEntries) {
  std::stringstream ss("SPFQ 1\n89 3 4 0\n");
  const auto m = read_matrix(ss);
  EXPECT_EQ(m, SparseMatrix(PrimeField(89), 3, 4));
}

TEST(SpfqFormat, ParseErrors) {
  for (const char* text : {
           "SPFQ 2\n7 2 2 0\n",             // header
           "SPFQ 1\n7 2 2 1\n0 0 7\n",      // value == q
           "SPFQ 1\n7 2 2 1\n0 0 0\n",      // zero stored
           "SPFQ 1\n8 2 2 0\n",             // modulus not prime
           "SPFQ 1\n7 2 2 2\n1 0 1\n0 0 1\n",  // unsorted
           "SPFQ 1\n7 2 2 2\n0 0 1\n0 0 2\n",  // duplicate
           "SPFQ 1\n7 2 2 2\n0 0 1\n",      // missing entry
           "SPFQ 1\n7 2 2 1\n2 0 1\n",      // out of range
           "SPFQ 1\n7 2 2 1\n0 0 x\n",      // garbage
           "SPFQ 1\n7 2 2 0\n0 0 1\n",      // trailing
       }) {
    std::stringstream ss(text);
    EXPECT_THROW(read_matrix(ss), ParseError) << text;
  }
}

}  // namespace
}  // namespace sparseshare
