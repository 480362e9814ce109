#include "jsrec/bigint.hpp"

#include <cmath>

#include "jsrec/errors.hpp"

namespace jsrec {

BigUint::BigUint(std::uint64_t v) {
  if (v != 0) limbs_.push_back(v);
}

BigUint BigUint::pow2(unsigned exponent) {
  BigUint out;
  out.limbs_.assign(exponent / 64 + 1, 0);
  out.limbs_.back() = std::uint64_t{1} << (exponent % 64);
  return out;
}

void BigUint::normalize() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint& BigUint::operator+=(const BigUint& rhs) {
  const std::size_t n = std::max(limbs_.size(), rhs.limbs_.size());
  limbs_.resize(n, 0);
  unsigned carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t b = i < rhs.limbs_.size() ? rhs.limbs_[i] : 0;
    const std::uint64_t sum = limbs_[i] + b;
    const unsigned c1 = sum < limbs_[i] ? 1 : 0;
    const std::uint64_t sum2 = sum + carry;
    const unsigned c2 = sum2 < sum ? 1 : 0;
    limbs_[i] = sum2;
    carry = c1 + c2;
  }
  if (carry) limbs_.push_back(carry);
  return *this;
}

BigUint& BigUint::operator-=(const BigUint& rhs) {
  if (*this < rhs) fail(ErrorCode::InvalidArgument, "BigUint subtraction underflow");
  unsigned borrow = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const std::uint64_t b = i < rhs.limbs_.size() ? rhs.limbs_[i] : 0;
    const std::uint64_t d = limbs_[i] - b;
    const unsigned b1 = limbs_[i] < b ? 1 : 0;
    const std::uint64_t d2 = d - borrow;
    const unsigned b2 = d < borrow ? 1 : 0;
    limbs_[i] = d2;
    borrow = b1 + b2;
  }
  normalize();
  return *this;
}

std::strong_ordering BigUint::operator<=>(const BigUint& rhs) const {
  if (limbs_.size() != rhs.limbs_.size())
    return limbs_.size() <=> rhs.limbs_.size();
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    if (limbs_[i] != rhs.limbs_[i]) return limbs_[i] <=> rhs.limbs_[i];
  }
  return std::strong_ordering::equal;
}

std::uint64_t BigUint::to_u64() const {
  if (!fits_u64()) fail(ErrorCode::InvalidArgument, "BigUint does not fit in 64 bits");
  return limbs_.empty() ? 0 : limbs_[0];
}

double BigUint::to_double() const {
  double r = 0.0;
  for (std::size_t i = limbs_.size(); i-- > 0;)
    r = r * 18446744073709551616.0 + static_cast<double>(limbs_[i]);
  return r;
}

std::string BigUint::to_string() const {
  if (is_zero()) return "0";
  // Repeated division by 1e19, the largest power of ten in a 64-bit word.
  constexpr std::uint64_t kChunk = 10000000000000000000ull;
  std::vector<std::uint64_t> work(limbs_);
  std::string out;
  while (!work.empty()) {
    unsigned __int128 rem = 0;
    for (std::size_t i = work.size(); i-- > 0;) {
      const unsigned __int128 cur = (rem << 64) | work[i];
      work[i] = static_cast<std::uint64_t>(cur / kChunk);
      rem = cur % kChunk;
    }
    while (!work.empty() && work.back() == 0) work.pop_back();
    std::string digits = std::to_string(static_cast<std::uint64_t>(rem));
    if (!work.empty()) digits.insert(0, 19 - digits.size(), '0');
    out.insert(0, digits);
  }
  return out;
}

}  // namespace jsrec
