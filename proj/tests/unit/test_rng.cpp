#include <gtest/gtest.h>

#include "sparseshare/rng.hpp"

namespace sparseshare {
namespace {

// Expected values from tests/oracles/prng_vectors.py.
TEST(Rng, SplitMix64ReferenceVector) {
  SplitMix64 sm(0);
  EXPECT_EQ(sm.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(sm.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(sm.next(), 0x06c45d188009454fULL);
}

TEST(Rng, Xoshiro256ssSeededBySplitMix) {
  Xoshiro256ss g(42);
  EXPECT_EQ(g.next(), 0x15780b2e0c2ec716ULL);
  EXPECT_EQ(g.next(), 0x6104d9866d113a7eULL);
  EXPECT_EQ(g.next(), 0xae17533239e499a1ULL);
  EXPECT_EQ(g.next(), 0xecb8ad4703b360a1ULL);
}

TEST(Rng, DeriveSeed) {
  EXPECT_EQ(derive_seed(7, 0), 0xde18ba9e4bc6ec06ULL);
  EXPECT_EQ(derive_seed(7, 1), 0x2679351a6834f448ULL);
  EXPECT_EQ(derive_seed(7, 2), 0xbd5db49077ce4ab6ULL);
}

TEST(Rng, UniformInUnitInterval) {
  Xoshiro256ss g(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = g.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

}  // namespace
}  // namespace sparseshare
