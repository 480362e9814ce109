#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "jsrec/bigint.hpp"
#include "jsrec/matrix.hpp"
#include "jsrec/rng.hpp"
#include "jsrec/support.hpp"

namespace jsrec {

// Maximum number of orthant interiors of R^n a subspace spanned by d vectors
// can intersect: C(n,1) = 2, C(n,d) = 2^n for d >= n, and in general
// C(n,d) = 2 * sum_{i<d} binom(n-1, i). Exact integer arithmetic.
BigUint cnd(int n, int d);

// Tally of canonical sign patterns reached by sign(Xbar * w) over random
// draws w. Patterns are keyed by their canonical bit code (pattern and its
// negation count as one).
struct PatternStats {
  long long trials = 0;      // counted draws (ambiguous ones excluded)
  long long discarded = 0;   // draws with an entry inside the zero tolerance
  int pattern_len = 0;
  std::map<std::uint64_t, long long> frequency;
  std::map<std::uint64_t, long long> first_seen;  // 1-based counted-trial index

  long long unique_pairs() const { return static_cast<long long>(frequency.size()); }

  // Union of two tallies: counts add, first-seen indices take the minimum.
  // Associative and commutative, so any partition of trials merges to the
  // same totals (give each partition globally offset trial indices).
  void merge(const PatternStats& other);

  // Exact trajectory (trial, unique pairs so far), reconstructed from the
  // first-seen indices and decimated to roughly log-spaced checkpoints.
  std::vector<std::pair<long long, long long>> saturation_series() const;
};

// trials draws of w ~ N(0, I_r); each counted draw contributes the canonical
// pattern of sign(Xbar*w). Draws with any |(Xbar*w)_j| <= zero_tol are
// discarded. A zero row of Xbar is rejected up front.
PatternStats sample_sign_patterns(const DenseMatrix& Xbar, long long trials, Rng& rng,
                                  double zero_tol = 1e-9);

struct ProbabilityEstimate {
  double p_hat = 0.0;
  double stderr_ = 0.0;
};

// Monte-Carlo estimate of Pr[canonical sign(Xbar*w) == pattern]; the second
// component is the binomial standard error.
ProbabilityEstimate estimate_pattern_probability(const DenseMatrix& Xbar,
                                                 const SignPattern& pattern,
                                                 long long trials, Rng& rng,
                                                 double zero_tol = 1e-9);

struct Coherence {
  double min_pairwise = 0.0;  // min_{i != j} |x_i'x_j| / (||x_i|| ||x_j||)
  double max_pairwise = 0.0;  // the usual maximum variant
};

// Extremal normalized inner products over distinct column pairs. Both the
// minimum and the maximum variant are reported.
Coherence mutual_coherence(const DenseMatrix& X);

// CSV serialization: header "pattern,count,first_seen", patterns as +/- strings.
void write_pattern_stats_csv(const PatternStats& stats, std::ostream& os);

}  // namespace jsrec
