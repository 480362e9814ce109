#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "jsrec/bigint.hpp"
#include "jsrec/bp.hpp"
#include "jsrec/matrix.hpp"
#include "jsrec/support.hpp"

namespace jsrec {

// Exhaustive per-pattern recovery census on a support: which faces of the
// cross-polytope spanned by {+-e_j, j in I} survive the mapping by A.
struct FaceCount {
  SupportSet support;
  BigUint total;      // 2^|I|
  BigUint surviving;  // 2 * number of recovered canonical patterns
  std::map<std::uint64_t, bool> per_pattern;  // canonical code -> recovered
  int solver_failures = 0;

  bool recovered(std::uint64_t canonical_code) const {
    auto it = per_pattern.find(canonical_code);
    return it != per_pattern.end() && it->second;
  }
};

// Solves basis pursuit for every canonical sign pattern on I (unit-magnitude
// representatives; recovery depends only on the sign pattern) and records
// which patterns come back exactly. Patterns above max_patterns are refused.
FaceCount face_count(const DenseMatrix& A, const SupportSet& I,
                     const SolverSettings& settings = {},
                     std::int64_t max_patterns = std::int64_t{1} << 21);

struct NspResult {
  bool holds = false;
  // On failure: a kernel vector carrying at least as much l1 mass on I as on
  // the complement.
  std::optional<std::vector<double>> witness;
};

// Uniform-recovery null-space check on I: holds iff every kernel vector has
// strictly less l1 mass on I than off it. Decided by one LP per canonical
// sign pattern: max sigma'z_I s.t. Az = 0, ||z_{I^c}||_1 <= 1; any optimum
// >= 1 - tol refutes the property. A trivial kernel holds vacuously.
NspResult check_nsp_uniform(const DenseMatrix& A, const SupportSet& I,
                            const SolverSettings& settings = {}, double tol = 1e-7);

struct SparkResult {
  enum class Kind { Value, AtLeast, Trivial } kind = Kind::Trivial;
  int k = 0;
};

// Smallest number of nonzeros of a nonzero kernel vector, by increasing-
// cardinality subset search; a subset S is dependent iff the numerical rank
// of A_S drops below |S|. The budget caps the number of subsets examined.
SparkResult spark_bruteforce(const DenseMatrix& A, std::int64_t budget = 2000000);

// Recovery probability of a uniformly random sign pattern on the support.
double prob_l1(const FaceCount& fc);

// Per-column joint recovery: p^r.
double prob_l11(double p, int r);

// First-success over r columns: 1 - (1-p)^r.
double prob_boosted(double p, int r);

// Sequential-elimination model with the given number of distinct pattern
// pairs tried: 1 - prod_i [1 - surviving / (total - 2(i-1))]. Factors are
// clamped to [0,1]; once the denominator is no larger than the surviving
// count the probability is 1.
double prob_rembo_terms(const BigUint& surviving, const BigUint& total,
                        std::uint64_t terms);

// Full model with terms = C(s,r)/2.
double prob_rembo(const BigUint& surviving, const BigUint& total, int s, int r);

// CSV serialization: header "pattern,recovered", patterns as +/- strings.
void write_face_count_csv(const FaceCount& fc, std::ostream& os);

}  // namespace jsrec
