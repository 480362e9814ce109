#include "jsrec/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "eigen_util.hpp"
#include "jsrec/errors.hpp"

namespace jsrec {

BigUint cnd(int n, int d) {
  if (n < 1 || d < 1) fail(ErrorCode::InvalidArgument, "cnd requires n, d >= 1");
  if (d >= n) return BigUint::pow2(static_cast<unsigned>(n));
  // Row n-1 of Pascal's triangle by addition; exact at any size.
  std::vector<BigUint> row{BigUint(1)};
  for (int i = 1; i < n; ++i) {
    std::vector<BigUint> next(row.size() + 1, BigUint(1));
    for (std::size_t j = 1; j < row.size(); ++j) next[j] = row[j - 1] + row[j];
    row = std::move(next);
  }
  BigUint sum;
  for (int i = 0; i < d; ++i) sum += row[static_cast<std::size_t>(i)];
  return sum + sum;
}

void PatternStats::merge(const PatternStats& other) {
  if (pattern_len == 0) pattern_len = other.pattern_len;
  if (other.pattern_len != 0 && other.pattern_len != pattern_len)
    fail(ErrorCode::DimensionMismatch, "merging stats with different pattern lengths");
  trials += other.trials;
  discarded += other.discarded;
  for (const auto& [code, count] : other.frequency) frequency[code] += count;
  for (const auto& [code, first] : other.first_seen) {
    auto [it, inserted] = first_seen.emplace(code, first);
    if (!inserted) it->second = std::min(it->second, first);
  }
}

std::vector<std::pair<long long, long long>> PatternStats::saturation_series() const {
  std::vector<long long> firsts;
  firsts.reserve(first_seen.size());
  for (const auto& [code, first] : first_seen) firsts.push_back(first);
  std::sort(firsts.begin(), firsts.end());

  const auto unique_at = [&](long long t) {
    return static_cast<long long>(
        std::upper_bound(firsts.begin(), firsts.end(), t) - firsts.begin());
  };

  std::vector<std::pair<long long, long long>> series;
  long long step = 1;
  for (long long t = 1; t <= trials; t += step) {
    series.emplace_back(t, unique_at(t));
    if (t >= 10 * step) step *= 10;
  }
  if (trials > 0 && (series.empty() || series.back().first != trials))
    series.emplace_back(trials, unique_at(trials));
  return series;
}

namespace {

// Canonical code of sign(y): flip everything if the first sign is negative.
// Returns false if any entry is inside the zero tolerance.
bool canonical_code_of(const Eigen::VectorXd& y, double zero_tol, std::uint64_t* code) {
  std::uint64_t c = 0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    if (std::abs(y[j]) <= zero_tol) return false;
    if (y[j] < 0) c |= std::uint64_t{1} << j;
  }
  const std::uint64_t mask =
      y.size() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << y.size()) - 1;
  if (c & 1) c = ~c & mask;
  *code = c;
  return true;
}

void check_sampling_preconditions(const DenseMatrix& Xbar, long long trials) {
  if (trials < 1) fail(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (Xbar.rows() > 64)
    fail(ErrorCode::InvalidArgument, "pattern sampling supports at most 64 rows");
  const auto x = as_eigen(Xbar);
  for (int i = 0; i < Xbar.rows(); ++i)
    if (x.row(i).norm() == 0.0)
      fail(ErrorCode::DegenerateRow, "row " + std::to_string(i) + " of Xbar is zero");
}

}  // namespace

PatternStats sample_sign_patterns(const DenseMatrix& Xbar, long long trials, Rng& rng,
                                  double zero_tol) {
  check_sampling_preconditions(Xbar, trials);
  const auto x = as_eigen(Xbar);
  const int r = Xbar.cols();

  PatternStats stats;
  stats.pattern_len = Xbar.rows();
  Eigen::VectorXd w(r);
  for (long long t = 0; t < trials; ++t) {
    for (int k = 0; k < r; ++k) w[k] = rng.next_normal();
    const Eigen::VectorXd y = x * w;
    std::uint64_t code = 0;
    if (!canonical_code_of(y, zero_tol, &code)) {
      ++stats.discarded;
      continue;
    }
    ++stats.trials;
    if (++stats.frequency[code] == 1) stats.first_seen[code] = stats.trials;
  }
  return stats;
}

ProbabilityEstimate estimate_pattern_probability(const DenseMatrix& Xbar,
                                                 const SignPattern& pattern,
                                                 long long trials, Rng& rng,
                                                 double zero_tol) {
  check_sampling_preconditions(Xbar, trials);
  if (pattern.size() != Xbar.rows())
    fail(ErrorCode::DimensionMismatch, "pattern length must match rows of Xbar");
  const std::uint64_t target = pattern.code();
  const auto x = as_eigen(Xbar);
  const int r = Xbar.cols();

  long long counted = 0, hits = 0;
  Eigen::VectorXd w(r);
  for (long long t = 0; t < trials; ++t) {
    for (int k = 0; k < r; ++k) w[k] = rng.next_normal();
    const Eigen::VectorXd y = x * w;
    std::uint64_t code = 0;
    if (!canonical_code_of(y, zero_tol, &code)) continue;
    ++counted;
    if (code == target) ++hits;
  }
  ProbabilityEstimate est;
  if (counted > 0) {
    est.p_hat = static_cast<double>(hits) / static_cast<double>(counted);
    est.stderr_ = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(counted));
  }
  return est;
}

Coherence mutual_coherence(const DenseMatrix& X) {
  if (X.cols() < 2) fail(ErrorCode::InvalidArgument, "need at least two columns");
  const auto x = as_eigen(X);
  std::vector<double> norms(X.cols());
  for (int j = 0; j < X.cols(); ++j) {
    norms[j] = x.col(j).norm();
    if (norms[j] == 0.0)
      fail(ErrorCode::InvalidArgument, "column " + std::to_string(j) + " is zero");
  }
  Coherence c{1.0, 0.0};
  for (int i = 0; i < X.cols(); ++i)
    for (int j = i + 1; j < X.cols(); ++j) {
      const double v = std::abs(x.col(i).dot(x.col(j))) / (norms[i] * norms[j]);
      c.min_pairwise = std::min(c.min_pairwise, v);
      c.max_pairwise = std::max(c.max_pairwise, v);
    }
  return c;
}

void write_pattern_stats_csv(const PatternStats& stats, std::ostream& os) {
  os << "pattern,count,first_seen\n";
  for (const auto& [code, count] : stats.frequency) {
    std::string pat(static_cast<std::size_t>(stats.pattern_len), '+');
    for (int k = 0; k < stats.pattern_len; ++k)
      if ((code >> k) & 1) pat[static_cast<std::size_t>(k)] = '-';
    os << pat << ',' << count << ',' << stats.first_seen.at(code) << '\n';
  }
}

}  // namespace jsrec
