#include "jsrec/recover.hpp"

#include <cmath>
#include <limits>

#include "eigen_util.hpp"
#include "jsrec/errors.hpp"

namespace jsrec {

int support_threshold(const DenseMatrix& A, std::optional<int> override) {
  if (override) return *override;
  return A.rows() / 2;  // largest |I| with 2|I| < m+1
}

namespace {

// One candidate single-vector problem: solve, test sparsity, test the
// restricted fit. On acceptance fills the report and returns true.
bool try_candidate(const DenseMatrix& A, const DenseMatrix& B,
                   const std::vector<double>& b, int threshold,
                   const PipelineSettings& st, PipelineReport& rep) {
  const SolveReport sol = solve_bp(A, b, st.bp);
  if (sol.status != SolveStatus::Optimal) {
    rep.per_iteration.emplace_back(-1, std::numeric_limits<double>::quiet_NaN());
    return false;
  }
  const SupportSet I = detect_support(sol.x, st.bp.zero_tol);
  if (I.size() > threshold) {
    rep.per_iteration.emplace_back(I.size(), std::numeric_limits<double>::quiet_NaN());
    return false;
  }
  const RestrictedLsResult ls = restricted_least_squares(A, I, B);
  rep.per_iteration.emplace_back(I.size(), ls.residual);
  const double scale = 1.0 + as_eigen(B).norm();
  if (ls.residual > st.res_tol * scale) return false;

  rep.recovered = true;
  rep.support = I;
  rep.X = DenseMatrix(A.cols(), B.cols());
  for (int k = 0; k < I.size(); ++k)
    for (int c = 0; c < B.cols(); ++c) rep.X(I[k], c) = ls.xbar(k, c);
  return true;
}

}  // namespace

PipelineReport boosted_l1(const DenseMatrix& A, const DenseMatrix& B,
                          const PipelineSettings& settings) {
  if (A.rows() != B.rows()) fail(ErrorCode::DimensionMismatch, "B rows != A rows");
  const int threshold = support_threshold(A, settings.support_override);
  PipelineReport rep;
  for (int k = 0; k < B.cols(); ++k) {
    rep.iterations_used = k + 1;
    if (try_candidate(A, B, B.column(k), threshold, settings, rep)) return rep;
  }
  rep.recovered = false;
  return rep;
}

PipelineReport rembo_l1(const DenseMatrix& A, const DenseMatrix& B,
                        int max_iterations, Rng& rng,
                        const PipelineSettings& settings) {
  if (A.rows() != B.rows()) fail(ErrorCode::DimensionMismatch, "B rows != A rows");
  if (max_iterations < 1) fail(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
  const int r = B.cols();
  const int threshold = support_threshold(A, settings.support_override);
  if (settings.forced_weights && settings.forced_weights->rows() != r)
    fail(ErrorCode::DimensionMismatch, "forced weights must have r rows");

  PipelineReport rep;
  const auto bmat = as_eigen(B);
  for (int t = 0; t < max_iterations; ++t) {
    std::vector<double> w(r);
    if (settings.forced_weights) {
      if (t >= settings.forced_weights->cols()) break;  // forced schedule exhausted
      w = settings.forced_weights->column(t);
    } else {
      for (int i = 0; i < r; ++i) w[i] = rng.next_normal();
    }
    if (settings.log_weights) rep.weight_log.push_back(w);
    rep.iterations_used = t + 1;
    const Eigen::VectorXd b = bmat * as_eigen(w);
    if (try_candidate(A, B, to_vector(b), threshold, settings, rep)) return rep;
  }
  rep.recovered = false;
  return rep;
}

}  // namespace jsrec
