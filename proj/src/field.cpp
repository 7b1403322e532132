#include "sparseshare/field.hpp"

#include <stdexcept>
#include <string>

namespace sparseshare {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  __extension__ using u128 = unsigned __int128;
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1U;
  }
  return result;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t p : {2U, 3U, 5U, 7U, 11U, 13U, 17U, 19U, 23U, 29U, 31U, 37U}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++r;
  }
  // These bases are sufficient for n < 3.3e24.
  for (std::uint64_t a : {2U, 3U, 5U, 7U, 11U, 13U, 17U, 19U, 23U, 29U, 31U, 37U}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
  if (q >= (1U << 31U)) {
    throw std::invalid_argument("PrimeField: modulus must be below 2^31, got " +
                                std::to_string(q));
  }
  if (!is_prime(q)) {
    throw std::invalid_argument("PrimeField: modulus " + std::to_string(q) +
                                " is not prime");
  }
}

FieldElement PrimeField::element(std::int64_t v) const noexcept {
  std::int64_t r = v % static_cast<std::int64_t>(q_);
  if (r < 0) r += q_;
  return {static_cast<std::uint32_t>(r), q_};
}

void PrimeField::check(FieldElement a) const {
  if (a.modulus != q_) {
    throw std::invalid_argument("field mismatch: element of F_" +
                                std::to_string(a.modulus) + " used in F_" +
                                std::to_string(q_));
  }
  if (a.value >= q_) {
    throw std::invalid_argument("non-canonical field element " +
                                std::to_string(a.value));
  }
}

FieldElement PrimeField::add(FieldElement a, FieldElement b) const {
  check(a);
  check(b);
  return {raw_add(a.value, b.value), q_};
}

FieldElement PrimeField::sub(FieldElement a, FieldElement b) const {
  check(a);
  check(b);
  return {raw_sub(a.value, b.value), q_};
}

FieldElement PrimeField::mul(FieldElement a, FieldElement b) const {
  check(a);
  check(b);
  return {raw_mul(a.value, b.value), q_};
}

FieldElement PrimeField::neg(FieldElement a) const {
  check(a);
  return {raw_neg(a.value), q_};
}

std::uint32_t PrimeField::raw_inverse(std::uint32_t a) const {
  if (a % q_ == 0) throw std::domain_error("inverse of zero in F_" + std::to_string(q_));
  // Extended Euclid on (a, q).
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = q_, new_r = a % q_;
  while (new_r != 0) {
    std::int64_t quotient = r / new_r;
    std::int64_t tmp = t - quotient * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quotient * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += q_;
  return static_cast<std::uint32_t>(t);
}

FieldElement PrimeField::mul_inverse(FieldElement a) const {
  check(a);
  return {raw_inverse(a.value), q_};
}

FieldElement PrimeField::div(FieldElement a, FieldElement b) const {
  check(a);
  check(b);
  return {raw_mul(a.value, raw_inverse(b.value)), q_};
}

FieldElement PrimeField::pow(FieldElement a, std::uint64_t e) const {
  check(a);
  return {static_cast<std::uint32_t>(pow_mod(a.value, e, q_)), q_};
}

}  // namespace sparseshare
