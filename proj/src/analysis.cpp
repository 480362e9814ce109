#include "jsrec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "eigen_util.hpp"
#include "jsrec/combinatorics.hpp"
#include "jsrec/errors.hpp"
#include "jsrec/parallel.hpp"

namespace jsrec {

FaceCount face_count(const DenseMatrix& A, const SupportSet& I,
                     const SolverSettings& settings, std::int64_t max_patterns) {
  if (I.empty()) fail(ErrorCode::EmptySupport, "face counting needs a nonempty support");
  if (I.ambient() != A.cols())
    fail(ErrorCode::DimensionMismatch, "support ambient does not match A");
  const int s = I.size();
  if (s > 62 || (std::int64_t{1} << (s - 1)) > max_patterns)
    fail(ErrorCode::BudgetExceeded,
         "support size " + std::to_string(s) + " exceeds the enumeration budget");

  const std::int64_t count = std::int64_t{1} << (s - 1);
  const int n = A.cols();
  std::vector<char> recovered(static_cast<std::size_t>(count), 0);
  std::vector<char> failed(static_cast<std::size_t>(count), 0);

  parallel_for(count, [&](std::int64_t idx) {
    // Canonical pattern: sign at the smallest support index fixed to +1.
    const std::uint64_t code = static_cast<std::uint64_t>(idx) << 1;
    std::vector<double> x0(n, 0.0);
    for (int k = 0; k < s; ++k)
      x0[I[k]] = (code >> k) & 1 ? -1.0 : 1.0;
    const auto a = as_eigen(A);
    const Eigen::VectorXd b = a * as_eigen(x0);
    const SolveReport rep = solve_bp(A, to_vector(b), settings);
    if (rep.status != SolveStatus::Optimal) {
      failed[static_cast<std::size_t>(idx)] = 1;
      return;
    }
    if (norm_inf_diff(rep.x, x0) <= settings.recovery_tol)
      recovered[static_cast<std::size_t>(idx)] = 1;
  });

  FaceCount fc;
  fc.support = I;
  fc.total = BigUint::pow2(static_cast<unsigned>(s));
  std::uint64_t surv = 0;
  for (std::int64_t idx = 0; idx < count; ++idx) {
    const std::uint64_t code = static_cast<std::uint64_t>(idx) << 1;
    fc.per_pattern[code] = recovered[static_cast<std::size_t>(idx)] != 0;
    if (recovered[static_cast<std::size_t>(idx)]) ++surv;
    if (failed[static_cast<std::size_t>(idx)]) ++fc.solver_failures;
  }
  fc.surviving = BigUint(2 * surv);
  return fc;
}

NspResult check_nsp_uniform(const DenseMatrix& A, const SupportSet& I,
                            const SolverSettings& settings, double tol) {
  const int m = A.rows();
  const int n = A.cols();
  if (I.ambient() != n) fail(ErrorCode::DimensionMismatch, "support ambient");

  NspResult result;
  if (numerical_rank(A) == n) {  // trivial kernel
    result.holds = true;
    return result;
  }
  if (I.empty()) {  // no mass on an empty set; any nonzero kernel vector wins
    result.holds = true;
    return result;
  }

  // A kernel vector supported inside I violates the property outright; it
  // also makes the LP below unbounded, so handle it first.
  if (!has_full_column_rank(A, I)) {
    const Eigen::MatrixXd aI = select_columns(A, I);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(aI, Eigen::ComputeFullV);
    const Eigen::VectorXd null_dir = svd.matrixV().col(aI.cols() - 1);
    std::vector<double> witness(n, 0.0);
    for (int k = 0; k < I.size(); ++k) witness[I[k]] = null_dir[k];
    result.holds = false;
    result.witness = std::move(witness);
    return result;
  }

  const int s = I.size();
  const std::vector<int> comp = I.complement();

  // Variables [p; q; t], z = p - q: rows of A(p - q) = 0 plus the budget row
  // sum_{I^c}(p_j + q_j) + t = 1.
  const int nv = 2 * n + 1;
  DenseMatrix a_eq(m + 1, nv);
  const auto a = as_eigen(A);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      a_eq(i, j) = a(i, j);
      a_eq(i, n + j) = -a(i, j);
    }
  for (int j : comp) {
    a_eq(m, j) = 1.0;
    a_eq(m, n + j) = 1.0;
  }
  a_eq(m, 2 * n) = 1.0;
  std::vector<double> b_eq(m + 1, 0.0);
  b_eq.back() = 1.0;

  const std::int64_t count = std::int64_t{1} << (s - 1);
  for (std::int64_t idx = 0; idx < count; ++idx) {
    const std::uint64_t code = static_cast<std::uint64_t>(idx) << 1;
    std::vector<double> c(nv, 0.0);
    for (int k = 0; k < s; ++k) {
      const double sgn = (code >> k) & 1 ? -1.0 : 1.0;
      c[I[k]] = -sgn;      // maximize sigma'z_I
      c[n + I[k]] = sgn;
    }
    const SolveReport rep = solve_lp(c, a_eq, b_eq, {}, settings);
    if (rep.status != SolveStatus::Optimal)
      fail(ErrorCode::InvalidArgument,
           "null-space LP did not solve: " + to_string(rep.status));
    const double optimum = -rep.objective;
    if (optimum >= 1.0 - tol) {
      std::vector<double> witness(n);
      for (int j = 0; j < n; ++j) witness[j] = rep.x[j] - rep.x[n + j];
      result.holds = false;
      result.witness = std::move(witness);
      return result;
    }
  }
  result.holds = true;
  return result;
}

namespace {

// Lexicographic next combination of k indices from {0..n-1}; false at end.
bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

SparkResult spark_bruteforce(const DenseMatrix& A, std::int64_t budget) {
  const int m = A.rows();
  const int n = A.cols();
  if (numerical_rank(A) == n) return {SparkResult::Kind::Trivial, 0};

  std::int64_t examined = 0;
  for (int k = 1; k <= std::min(n, m + 1); ++k) {
    if (k == m + 1) return {SparkResult::Kind::Value, k};  // any m+1 columns are dependent
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    do {
      if (++examined > budget) return {SparkResult::Kind::AtLeast, k};
      const SupportSet S = SupportSet::make(idx, n);
      if (!has_full_column_rank(A, S)) return {SparkResult::Kind::Value, k};
    } while (next_combination(idx, n));
  }
  // Unreachable: rank deficiency guarantees a dependent subset by size m+1.
  return {SparkResult::Kind::AtLeast, std::min(n, m + 1)};
}

double prob_l1(const FaceCount& fc) {
  return fc.surviving.to_double() / fc.total.to_double();
}

double prob_l11(double p, int r) {
  if (r < 1) fail(ErrorCode::InvalidArgument, "r must be >= 1");
  return std::pow(p, r);
}

double prob_boosted(double p, int r) {
  if (r < 1) fail(ErrorCode::InvalidArgument, "r must be >= 1");
  return 1.0 - std::pow(1.0 - p, r);
}

double prob_rembo_terms(const BigUint& surviving, const BigUint& total,
                        std::uint64_t terms) {
  if (surviving > total) fail(ErrorCode::InvalidArgument, "surviving exceeds total");
  if (!total.fits_u64())
    fail(ErrorCode::InvalidArgument, "pattern space too large for the model");
  const double surv = surviving.to_double();
  const double tot = total.to_double();
  if (surv == 0.0) return 0.0;

  double log_fail = 0.0;  // log of the running failure product
  for (std::uint64_t i = 1; i <= terms; ++i) {
    const double denom = tot - 2.0 * static_cast<double>(i - 1);
    if (denom <= surv) return 1.0;  // every untried pattern pair recovers
    const double frac = std::clamp(surv / denom, 0.0, 1.0);
    if (frac >= 1.0) return 1.0;
    log_fail += std::log1p(-frac);
    if (log_fail < -745.0) return 1.0;  // product underflow
  }
  return 1.0 - std::exp(log_fail);
}

double prob_rembo(const BigUint& surviving, const BigUint& total, int s, int r) {
  const BigUint pairs = cnd(s, r);
  // Beyond (total - surviving)/2 + 1 eliminations the factors hit zero, so
  // the term count can be clamped into 64-bit range safely.
  BigUint needed = total;
  needed -= surviving;
  const std::uint64_t cap = needed.fits_u64() ? needed.to_u64() / 2 + 1
                                              : ~std::uint64_t{0};
  std::uint64_t terms = cap;
  if (pairs.fits_u64()) terms = std::min(terms, pairs.to_u64() / 2);
  return prob_rembo_terms(surviving, total, terms);
}

void write_face_count_csv(const FaceCount& fc, std::ostream& os) {
  os << "pattern,recovered\n";
  const int s = fc.support.size();
  for (const auto& [code, rec] : fc.per_pattern) {
    std::string pat(static_cast<std::size_t>(s), '+');
    for (int k = 0; k < s; ++k)
      if ((code >> k) & 1) pat[static_cast<std::size_t>(k)] = '-';
    os << pat << ',' << (rec ? 1 : 0) << '\n';
  }
}

}  // namespace jsrec
