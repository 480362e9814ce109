#pragma once

#include <cstdint>
#include <compare>
#include <string>
#include <vector>

namespace jsrec {

// Arbitrary-precision unsigned integer. Only the handful of operations the
// orthant-counting formulas need: add, subtract, compare, powers of two,
// decimal rendering. Limbs are little-endian 64-bit words with no trailing
// zero limb (zero is the empty limb vector).
class BigUint {
public:
  BigUint() = default;
  BigUint(std::uint64_t v);  // NOLINT(google-explicit-constructor)

  static BigUint pow2(unsigned exponent);

  BigUint& operator+=(const BigUint& rhs);
  BigUint& operator-=(const BigUint& rhs);  // requires *this >= rhs
  friend BigUint operator+(BigUint lhs, const BigUint& rhs) { return lhs += rhs; }
  friend BigUint operator-(BigUint lhs, const BigUint& rhs) { return lhs -= rhs; }

  std::strong_ordering operator<=>(const BigUint& rhs) const;
  bool operator==(const BigUint& rhs) const = default;

  bool is_zero() const { return limbs_.empty(); }
  bool fits_u64() const { return limbs_.size() <= 1; }
  std::uint64_t to_u64() const;  // requires fits_u64()
  double to_double() const;
  std::string to_string() const;

private:
  void normalize();
  std::vector<std::uint64_t> limbs_;
};

}  // namespace jsrec
