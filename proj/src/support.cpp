#include "jsrec/support.hpp"

#include <algorithm>
#include <cmath>

#include "jsrec/errors.hpp"

namespace jsrec {

SupportSet SupportSet::make(std::vector<int> indices, int ambient) {
  if (ambient < 0) fail(ErrorCode::InvalidArgument, "ambient dimension negative");
  std::sort(indices.begin(), indices.end());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 0 || indices[k] >= ambient)
      fail(ErrorCode::InvalidArgument, "support index out of range");
    if (k > 0 && indices[k] == indices[k - 1])
      fail(ErrorCode::InvalidArgument, "duplicate support index");
  }
  SupportSet s;
  s.indices_ = std::move(indices);
  s.ambient_ = ambient;
  return s;
}

SupportSet SupportSet::random(int k, int ambient, Rng& rng) {
  if (k < 0 || k > ambient) fail(ErrorCode::InvalidArgument, "support size out of range");
  // Floyd's sampling; k draws regardless of ambient size.
  std::vector<int> chosen;
  chosen.reserve(k);
  for (int j = ambient - k; j < ambient; ++j) {
    const int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(j) + 1));
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
      chosen.push_back(t);
    else
      chosen.push_back(j);
  }
  return make(std::move(chosen), ambient);
}

bool SupportSet::contains(int j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

std::vector<int> SupportSet::complement() const {
  std::vector<int> out;
  out.reserve(ambient_ - size());
  for (int j = 0; j < ambient_; ++j)
    if (!contains(j)) out.push_back(j);
  return out;
}

std::uint64_t SignPattern::code() const {
  std::uint64_t c = 0;
  for (std::size_t k = 0; k < signs_.size(); ++k)
    if (signs_[k] < 0) c |= std::uint64_t{1} << k;
  return c;
}

SignPattern SignPattern::from_code(const SupportSet& support, std::uint64_t code) {
  std::vector<int> signs(support.size());
  for (int k = 0; k < support.size(); ++k)
    signs[k] = (code >> k) & 1 ? -1 : +1;
  return canonicalize(support, signs);
}

std::string SignPattern::to_string() const {
  std::string s;
  s.reserve(signs_.size());
  for (int v : signs_) s.push_back(v > 0 ? '+' : '-');
  return s;
}

bool SignPattern::operator<(const SignPattern& o) const {
  if (support_.indices() != o.support_.indices())
    return support_.indices() < o.support_.indices();
  return code() < o.code();
}

SignPattern canonicalize(const SupportSet& support, const std::vector<int>& signs) {
  if (support.empty()) fail(ErrorCode::EmptySupport, "cannot canonicalize on empty support");
  if (static_cast<int>(signs.size()) != support.size())
    fail(ErrorCode::DimensionMismatch, "sign count does not match support size");
  SignPattern p;
  p.support_ = support;
  p.signs_ = signs;
  for (int& v : p.signs_) {
    if (v != 1 && v != -1) fail(ErrorCode::InvalidArgument, "signs must be +1 or -1");
  }
  if (p.signs_[0] < 0)
    for (int& v : p.signs_) v = -v;
  return p;
}

SignPattern sign_pattern_of(const std::vector<double>& x, const SupportSet& support,
                            double zero_tol) {
  if (support.empty()) fail(ErrorCode::EmptySupport, "empty support");
  std::vector<int> signs;
  signs.reserve(support.size());
  for (int j : support.indices()) {
    if (j >= static_cast<int>(x.size()))
      fail(ErrorCode::DimensionMismatch, "support index beyond vector length");
    const double v = x[j];
    if (std::abs(v) <= zero_tol)
      fail(ErrorCode::AmbiguousSign,
           "entry " + std::to_string(j) + " is within zero tolerance");
    signs.push_back(v > 0 ? +1 : -1);
  }
  return canonicalize(support, signs);
}

}  // namespace jsrec
