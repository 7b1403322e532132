#pragma once

#include <cstdint>
#include <ostream>

namespace sparseshare {

/// An element of F_q. The value is kept canonical, 0 <= value < modulus.
/// The modulus travels with the element so that mixing fields is caught.
struct FieldElement {
  std::uint32_t value = 0;
  std::uint32_t modulus = 0;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const FieldElement& x) {
  return os << x.value;
}

/// Deterministic Miller-Rabin, exact for all 32-bit inputs.
bool is_prime(std::uint64_t n) noexcept;

/// Prime field F_q for q < 2^31. Construction rejects composite moduli.
///
/// Element-level operations validate that operands belong to this field and
/// throw std::invalid_argument otherwise. The `raw_*` variants work on bare
/// canonical residues and are what the matrix kernels use.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t q);

  std::uint32_t modulus() const noexcept { return q_; }

  /// Reduces any signed integer into the field.
  FieldElement element(std::int64_t v) const noexcept;
  FieldElement zero() const noexcept { return {0, q_}; }
  FieldElement one() const noexcept { return {1 % q_, q_}; }

  FieldElement add(FieldElement a, FieldElement b) const;
  FieldElement sub(FieldElement a, FieldElement b) const;
  FieldElement mul(FieldElement a, FieldElement b) const;
  FieldElement neg(FieldElement a) const;
  /// Multiplicative inverse; std::domain_error on zero.
  FieldElement mul_inverse(FieldElement a) const;
  FieldElement div(FieldElement a, FieldElement b) const;
  FieldElement pow(FieldElement a, std::uint64_t e) const;

  bool contains(FieldElement a) const noexcept {
    return a.modulus == q_ && a.value < q_;
  }

  std::uint32_t raw_add(std::uint32_t a, std::uint32_t b) const noexcept {
    std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  std::uint32_t raw_sub(std::uint32_t a, std::uint32_t b) const noexcept {
    return a >= b ? a - b : a + q_ - b;
  }
  std::uint32_t raw_mul(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % q_);
  }
  std::uint32_t raw_neg(std::uint32_t a) const noexcept {
    return a == 0 ? 0 : q_ - a;
  }
  std::uint32_t raw_inverse(std::uint32_t a) const;

  friend bool operator==(const PrimeField& x, const PrimeField& y) noexcept {
    return x.q_ == y.q_;
  }

 private:
  void check(FieldElement a) const;

  std::uint32_t q_;
};

}  // namespace sparseshare
