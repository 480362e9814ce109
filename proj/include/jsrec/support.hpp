#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jsrec/rng.hpp"

namespace jsrec {

// Sorted set of 0-based indices inside an ambient dimension.
class SupportSet {
public:
  SupportSet() = default;
  static SupportSet make(std::vector<int> indices, int ambient);
  // k indices sampled uniformly without replacement from {0,...,ambient-1}.
  static SupportSet random(int k, int ambient, Rng& rng);

  const std::vector<int>& indices() const { return indices_; }
  int ambient() const { return ambient_; }
  int size() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  int operator[](int k) const { return indices_[k]; }
  bool contains(int j) const;
  std::vector<int> complement() const;

  bool operator==(const SupportSet&) const = default;

private:
  std::vector<int> indices_;
  int ambient_ = 0;
};

// Signs on a support, stored in negation-canonical form: the sign at the
// smallest support index is +1, so a pattern and its negation share one
// representative.
class SignPattern {
public:
  SignPattern() = default;
  const SupportSet& support() const { return support_; }
  const std::vector<int>& signs() const { return signs_; }
  int size() const { return static_cast<int>(signs_.size()); }

  // Bit k set iff the sign at support position k is -1; canonical patterns
  // always have bit 0 clear.
  std::uint64_t code() const;
  static SignPattern from_code(const SupportSet& support, std::uint64_t code);

  std::string to_string() const;  // e.g. "+-++-"

  bool operator==(const SignPattern&) const = default;
  bool operator<(const SignPattern& o) const;

  friend SignPattern canonicalize(const SupportSet&, const std::vector<int>&);

private:
  SupportSet support_;
  std::vector<int> signs_;
};

// Negation-canonical representative of a sign vector on a support.
// canonicalize(v) == canonicalize(-v); idempotent.
SignPattern canonicalize(const SupportSet& support, const std::vector<int>& signs);

// Canonical pattern of the signs of x restricted to the support. Entries on
// the support with |x_j| <= zero_tol are ambiguous and rejected.
SignPattern sign_pattern_of(const std::vector<double>& x, const SupportSet& support,
                            double zero_tol = 1e-9);

}  // namespace jsrec
