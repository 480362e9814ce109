#include "jsrec/rng.hpp"

#include <cmath>
#include <numbers>

namespace jsrec {

namespace {

// SplitMix64 finalizer; full-period bit mixer.
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

}  // namespace

std::uint64_t Rng::word_at(std::uint64_t counter) const {
  const std::uint64_t key = mix64(seed_ ^ (0x9e3779b97f4a7c15ull * (stream_ + 1)));
  return mix64(key ^ (counter * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
}

double Rng::next_normal() {
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::next_below(std::uint64_t bound) {
  // Lemire-style rejection keeps the draw unbiased.
  const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
  std::uint64_t v = next_u64();
  while (v >= limit) v = next_u64();
  return v % bound;
}

}  // namespace jsrec
