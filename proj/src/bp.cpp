#include "jsrec/bp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eigen_util.hpp"
#include "jsrec/errors.hpp"

namespace jsrec {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::NumericFailure: return "NumericFailure";
  }
  return "?";
}

std::string to_string(CertificateResult r) {
  switch (r) {
    case CertificateResult::UniqueOptimal: return "UniqueOptimal";
    case CertificateResult::Optimal: return "Optimal";
    case CertificateResult::Invalid: return "Invalid";
  }
  return "?";
}

double norm_inf_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "vector lengths differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double norm1(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

namespace {

// Largest alpha in [0, cap] with v + alpha*dv >= 0.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv, double cap) {
  double alpha = cap;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  return alpha;
}

struct IpmResult {
  Eigen::VectorXd x, y, s;
  Eigen::VectorXd y_last;  // dual at the deepest iterate, for certification
  SolveStatus status = SolveStatus::NumericFailure;
  int iterations = 0;
};

// Mehrotra predictor-corrector for min c'x s.t. Ax=b, x>=0, using a Cholesky
// factorization of A D A' per iteration. Assumes the equality system is
// consistent (checked by the caller); detects unboundedness by objective
// divergence. The scaling matrix D blows up as complementarity vanishes, so
// residuals can drift near the end; the best iterate by combined relative
// residual is kept and returned when the loop degrades instead of converging.
IpmResult ipm_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                    const Eigen::VectorXd& c, const SolverSettings& st) {
  const Eigen::Index n = A.cols();
  IpmResult out;

  // Mehrotra starting point from least-squares projections.
  Eigen::MatrixXd AAt = A * A.transpose();
  Eigen::LDLT<Eigen::MatrixXd> aat(AAt);
  if (aat.info() != Eigen::Success) return out;
  Eigen::VectorXd x = A.transpose() * aat.solve(b);
  Eigen::VectorXd y = aat.solve(A * c);
  Eigen::VectorXd s = c - A.transpose() * y;

  const double dx = std::max(-1.5 * x.minCoeff(), 0.0);
  const double ds = std::max(-1.5 * s.minCoeff(), 0.0);
  x.array() += dx;
  s.array() += ds;
  const double dot = x.dot(s);
  const double xsum = x.sum();
  const double ssum = s.sum();
  x.array() += ssum > 0 ? 0.5 * dot / ssum : 1.0;
  s.array() += xsum > 0 ? 0.5 * dot / xsum : 1.0;
  // Keep the start safely interior.
  x = x.cwiseMax(1e-10);
  s = s.cwiseMax(1e-10);

  const double bnorm = 1.0 + b.lpNorm<Eigen::Infinity>();
  const double cnorm = 1.0 + c.lpNorm<Eigen::Infinity>();
  const double obj_scale = 1.0 + c.cwiseAbs().maxCoeff();

  double best_merit = std::numeric_limits<double>::infinity();
  const auto consider_best = [&](const Eigen::VectorXd& rb, const Eigen::VectorXd& rc,
                                 double gap, double objabs) {
    const double merit = rb.lpNorm<Eigen::Infinity>() / bnorm +
                         rc.lpNorm<Eigen::Infinity>() / cnorm + gap / (1.0 + objabs);
    if (std::isfinite(merit) && merit < best_merit) {
      best_merit = merit;
      out.x = x;
      out.y = y;
      out.s = s;
    }
  };

  for (int it = 0; it < st.max_iter; ++it) {
    const Eigen::VectorXd rb = A * x - b;
    const Eigen::VectorXd rc = A.transpose() * y + s - c;
    const double mu = x.dot(s) / static_cast<double>(n);
    const double gap = std::abs(c.dot(x) - b.dot(y));

    out.iterations = it;
    if (!rb.allFinite() || !rc.allFinite() || !std::isfinite(mu)) break;
    consider_best(rb, rc, gap, std::abs(c.dot(x)));

    if (rb.lpNorm<Eigen::Infinity>() <= st.feas_tol * bnorm &&
        rc.lpNorm<Eigen::Infinity>() <= st.feas_tol * cnorm &&
        gap <= st.gap_tol * (1.0 + std::abs(c.dot(x)))) {
      out.x = x; out.y = y; out.s = s;
      out.status = SolveStatus::Optimal;
      return out;
    }
    if (c.dot(x) < -1e13 * obj_scale) {
      out.x = x; out.y = y; out.s = s;
      out.status = SolveStatus::Unbounded;
      return out;
    }
    // With the dual near-feasible, complementarity far below the gap target
    // means the remaining error is residual drift that more centering steps
    // cannot repair. (Without the dual condition this would fire on
    // unbounded problems before divergence is detectable.)
    if (mu <= 1e-4 * st.gap_tol &&
        rc.lpNorm<Eigen::Infinity>() <= 1e3 * st.feas_tol * cnorm) {
      out.y_last = y;
      break;
    }

    const Eigen::VectorXd d = x.cwiseQuotient(s);
    Eigen::MatrixXd M = A * d.asDiagonal() * A.transpose();
    if (!M.allFinite()) break;
    Eigen::LDLT<Eigen::MatrixXd> fact(M);
    if (fact.info() != Eigen::Success) {
      // Retry once with a diagonal shift before giving up.
      M.diagonal().array() += 1e-12 * (1.0 + M.diagonal().maxCoeff());
      fact.compute(M);
      if (fact.info() != Eigen::Success) break;
    }

    const auto solve_kkt = [&](const Eigen::VectorXd& rxs, Eigen::VectorXd& ox,
                               Eigen::VectorXd& oy, Eigen::VectorXd& os) {
      const Eigen::VectorXd sinv_rxs = rxs.cwiseQuotient(s);
      oy = fact.solve(-rb + A * (sinv_rxs - d.cwiseProduct(rc)));
      os = -rc - A.transpose() * oy;
      ox = -sinv_rxs - d.cwiseProduct(os);
    };

    // Predictor.
    Eigen::VectorXd dx_a, dy_a, ds_a;
    solve_kkt(x.cwiseProduct(s), dx_a, dy_a, ds_a);
    const double ap_a = max_step(x, dx_a, 1.0);
    const double ad_a = max_step(s, ds_a, 1.0);
    const double mu_aff =
        (x + ap_a * dx_a).dot(s + ad_a * ds_a) / static_cast<double>(n);
    double sigma = std::pow(mu_aff / mu, 3);
    sigma = std::clamp(sigma, 0.0, 1.0);
    if (!std::isfinite(sigma)) break;

    // Corrector.
    Eigen::VectorXd rxs = x.cwiseProduct(s) + dx_a.cwiseProduct(ds_a);
    rxs.array() -= sigma * mu;
    Eigen::VectorXd dxv, dy, dsv;
    solve_kkt(rxs, dxv, dy, dsv);

    const double eta = std::min(0.99995, std::max(0.995, 1.0 - mu));
    const double ap = std::min(1.0, eta * max_step(x, dxv, 1.0 / eta));
    const double ad = std::min(1.0, eta * max_step(s, dsv, 1.0 / eta));
    if (!std::isfinite(ap) || !std::isfinite(ad)) break;

    x += ap * dxv;
    y += ad * dy;
    s += ad * dsv;
    if (!x.allFinite() || !y.allFinite() || !s.allFinite()) break;
  }

  // Divergence can trip the finite-ness guards before the in-loop objective
  // test fires.
  if (x.allFinite() && c.dot(x) < -1e9 * obj_scale) {
    out.x = x; out.y = y; out.s = s;
    out.status = SolveStatus::Unbounded;
    return out;
  }
  if (out.y_last.size() == 0 && y.allFinite()) out.y_last = y;
  // Not converged inside the loop: hand back the best iterate seen; callers
  // may still certify it a posteriori.
  if (out.x.size() == 0 || !std::isfinite(best_merit)) {
    out.x = x; out.y = y; out.s = s;
    out.status = SolveStatus::NumericFailure;
    return out;
  }
  out.status = SolveStatus::MaxIter;
  return out;
}

SolveReport report_from(const IpmResult& res, const Eigen::MatrixXd& A,
                        const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  SolveReport rep;
  rep.status = res.status;
  rep.iterations = res.iterations;
  if (res.x.size() > 0) {
    rep.x = to_vector(res.x);
    rep.y = to_vector(res.y);
    rep.objective = c.dot(res.x);
    rep.primal_residual = (A * res.x - b).norm();
    rep.duality_gap = std::abs(rep.objective - b.dot(res.y));
  }
  return rep;
}

}  // namespace

SolveReport solve_lp(const std::vector<double>& c, const DenseMatrix& A_eq,
                     const std::vector<double>& b_eq,
                     const std::vector<double>& lower_bounds,
                     const SolverSettings& settings) {
  const int m = A_eq.rows();
  const int n = A_eq.cols();
  if (static_cast<int>(c.size()) != n || static_cast<int>(b_eq.size()) != m)
    fail(ErrorCode::DimensionMismatch, "LP dimensions inconsistent");
  if (!lower_bounds.empty() && static_cast<int>(lower_bounds.size()) != n)
    fail(ErrorCode::DimensionMismatch, "lower_bounds length");

  const auto a = as_eigen(A_eq);
  Eigen::VectorXd bvec = as_eigen(b_eq);
  Eigen::VectorXd cvec = as_eigen(c);
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(n);
  if (!lower_bounds.empty()) shift = as_eigen(lower_bounds);
  const Eigen::VectorXd b_shifted = bvec - a * shift;

  // Consistency presolve: least squares against the equality system.
  {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    const Eigen::VectorXd xls = cod.solve(b_shifted);
    const double res = (a * xls - b_shifted).norm();
    if (res > settings.feas_tol * (1.0 + b_shifted.norm())) {
      SolveReport rep;
      rep.status = SolveStatus::Infeasible;
      rep.primal_residual = res;
      return rep;
    }
  }

  const IpmResult res = ipm_solve(a, b_shifted, cvec, settings);
  SolveReport rep = report_from(res, a, b_shifted, cvec);
  if (!rep.x.empty()) {
    for (int j = 0; j < n; ++j) rep.x[j] += shift[j];
    rep.objective = cvec.dot(as_eigen(rep.x));
  }
  return rep;
}

SolveReport solve_bp(const DenseMatrix& A, const std::vector<double>& b,
                     const SolverSettings& settings) {
  const int m = A.rows();
  const int n = A.cols();
  if (static_cast<int>(b.size()) != m)
    fail(ErrorCode::DimensionMismatch, "b length does not match rows of A");

  const auto a = as_eigen(A);
  const Eigen::VectorXd bvec = as_eigen(b);

  // b must lie in range(A); detected by the least-squares residual.
  {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    const Eigen::VectorXd xls = cod.solve(bvec);
    const double res = (a * xls - bvec).norm();
    if (res > settings.feas_tol * (1.0 + bvec.norm())) {
      SolveReport rep;
      rep.status = SolveStatus::Infeasible;
      rep.primal_residual = res;
      return rep;
    }
  }

  // LP on [u; v] with x = u - v.
  Eigen::MatrixXd a_split(m, 2 * n);
  a_split.leftCols(n) = a;
  a_split.rightCols(n) = -a;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(2 * n);

  const IpmResult res = ipm_solve(a_split, bvec, ones, settings);

  SolveReport rep;
  rep.status = res.status;
  rep.iterations = res.iterations;
  if (res.x.size() == 0 || !res.x.allFinite()) return rep;

  Eigen::VectorXd x = res.x.head(n) - res.x.tail(n);
  Eigen::VectorXd y = res.y;

  // Support polish: zero the interior-point fuzz and re-fit on the
  // survivors. An early-stopped run can leave fuzz well above the base
  // threshold, so a ladder of thresholds is tried. Fits that reproduce b
  // compete by l1 norm among themselves only; the raw iterate can be
  // slightly infeasible and undercut the optimum, so it is never the
  // benchmark, just the fallback.
  {
    const double xmax = x.cwiseAbs().maxCoeff();
    const double thresholds[] = {10.0 * settings.feas_tol, 1e-7 * (1.0 + xmax),
                                 1e-6 * (1.0 + xmax), 1e-5 * (1.0 + xmax)};
    Eigen::VectorXd best;
    double best_obj = std::numeric_limits<double>::infinity();
    for (double tau : thresholds) {
      std::vector<int> sup;
      for (int j = 0; j < n; ++j)
        if (std::abs(x[j]) > tau) sup.push_back(j);
      if (sup.empty()) {
        if (bvec.norm() <= settings.feas_tol * (1.0 + bvec.norm()) && best_obj > 0.0) {
          best = Eigen::VectorXd::Zero(n);
          best_obj = 0.0;
        }
        break;
      }
      if (static_cast<int>(sup.size()) > m) continue;
      const SupportSet I = SupportSet::make(sup, n);
      const Eigen::MatrixXd aI = select_columns(A, I);
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(aI);
      const Eigen::VectorXd xbar = cod.solve(bvec);
      if ((aI * xbar - bvec).norm() > settings.feas_tol * (1.0 + bvec.norm())) continue;
      if (xbar.lpNorm<1>() < best_obj) {
        best = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < I.size(); ++k) best[I[k]] = xbar[k];
        best_obj = xbar.lpNorm<1>();
      }
    }
    if (std::isfinite(best_obj)) x = best;
  }

  rep.x = to_vector(x);
  rep.objective = x.lpNorm<1>();
  rep.primal_residual = (a * x - bvec).norm();
  rep.duality_gap = std::abs(rep.objective - bvec.dot(y));

  // The scaling matrix degrades the last interior-point steps on some
  // instances, so the loop can stop short of its own test while the polished
  // point is already optimal. Certify a posteriori by weak duality: any
  // dual-feasible y sandwiches the optimum between b'y and ||x||_1, so a gap
  // within tolerance proves the polished x optimal. Candidates, in order:
  // the support dual (solve A_J'y = sign(x_J); zero gap whenever feasible),
  // the deepest interior-point dual, the best-residual dual.
  if (rep.status == SolveStatus::MaxIter &&
      rep.primal_residual <= settings.feas_tol * (1.0 + bvec.norm())) {
    std::vector<Eigen::VectorXd> candidates;
    const SupportSet J = detect_support(rep.x, settings.zero_tol);
    if (J.empty() && rep.objective <= settings.gap_tol)
      candidates.push_back(Eigen::VectorXd::Zero(m));
    if (!J.empty() && J.size() <= m) {
      const Eigen::MatrixXd aJt = select_columns(A, J).transpose();
      Eigen::VectorXd sgn(J.size());
      for (int k = 0; k < J.size(); ++k) sgn[k] = rep.x[J[k]] > 0 ? 1.0 : -1.0;
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(aJt);
      const Eigen::VectorXd y_sup = cod.solve(sgn);
      if ((aJt * y_sup - sgn).lpNorm<Eigen::Infinity>() <= settings.gap_tol &&
          (a.transpose() * y_sup).lpNorm<Eigen::Infinity>() <= 1.0 + settings.gap_tol)
        candidates.push_back(y_sup);
    }
    if (res.y_last.size() == m && res.y_last.allFinite())
      candidates.push_back(res.y_last);
    if (y.allFinite()) candidates.push_back(y);

    for (Eigen::VectorXd cand : candidates) {
      const double dual_inf = (a.transpose() * cand).lpNorm<Eigen::Infinity>();
      if (!std::isfinite(dual_inf)) continue;
      if (dual_inf > 1.0) cand /= dual_inf;
      const double gap = std::abs(rep.objective - bvec.dot(cand));
      if (gap <= settings.gap_tol * (1.0 + rep.objective)) {
        rep.status = SolveStatus::Optimal;
        rep.duality_gap = gap;
        y = cand;
        break;
      }
    }
  }
  rep.y = to_vector(y);
  return rep;
}

RestrictedLsResult restricted_least_squares(const DenseMatrix& A, const SupportSet& I,
                                            const DenseMatrix& B) {
  if (A.rows() != B.rows())
    fail(ErrorCode::DimensionMismatch, "A and B row counts differ");
  if (I.ambient() != A.cols())
    fail(ErrorCode::DimensionMismatch, "support ambient does not match A");

  RestrictedLsResult out;
  const auto bmat = as_eigen(B);
  if (I.empty()) {
    out.xbar = DenseMatrix();
    out.residual = bmat.norm();
    return out;
  }
  const Eigen::MatrixXd aI = select_columns(A, I);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(aI);
  cod.setThreshold(1e-10 * std::max(A.rows(), I.size()));
  const Eigen::MatrixXd xbar = cod.solve(bmat);
  out.xbar = to_matrix(xbar);
  out.residual = (aI * xbar - bmat).norm();
  out.rank_deficient = cod.rank() < I.size();
  return out;
}

SupportSet detect_support(const std::vector<double>& x, double zero_tol) {
  std::vector<int> idx;
  for (int j = 0; j < static_cast<int>(x.size()); ++j)
    if (std::abs(x[j]) > zero_tol) idx.push_back(j);
  return SupportSet::make(std::move(idx), static_cast<int>(x.size()));
}

int numerical_rank(const DenseMatrix& A) {
  const auto a = as_eigen(A);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  if (svd.singularValues().size() == 0) return 0;
  const double cutoff =
      svd.singularValues()[0] * 1e-10 * std::max(A.rows(), A.cols());
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > cutoff) ++r;
  return r;
}

bool has_full_column_rank(const DenseMatrix& A, const SupportSet& I) {
  if (I.empty()) return true;
  const Eigen::MatrixXd aI = select_columns(A, I);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(aI);
  const double cutoff =
      svd.singularValues()[0] * 1e-10 * std::max(A.rows(), A.cols());
  return svd.singularValues().minCoeff() > cutoff && aI.cols() <= aI.rows();
}

CertificateResult check_smv_certificate(const DenseMatrix& A, const std::vector<double>& x,
                                        const std::vector<double>& y,
                                        double strict_tol, double zero_tol) {
  const int m = A.rows();
  const int n = A.cols();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != m)
    fail(ErrorCode::DimensionMismatch, "certificate dimensions");

  const auto a = as_eigen(A);
  const Eigen::VectorXd g = a.transpose() * as_eigen(y);  // A'y

  bool strict_ok = true;
  bool loose_ok = true;
  for (int j = 0; j < n; ++j) {
    if (std::abs(x[j]) > zero_tol) {
      const double sgn = x[j] > 0 ? 1.0 : -1.0;
      if (std::abs(g[j] - sgn) > strict_tol) { strict_ok = false; loose_ok = false; }
    } else {
      if (std::abs(g[j]) > 1.0 - strict_tol) strict_ok = false;
      if (std::abs(g[j]) > 1.0 + strict_tol) loose_ok = false;
    }
  }
  if (strict_ok && has_full_column_rank(A, detect_support(x, zero_tol)))
    return CertificateResult::UniqueOptimal;
  if (loose_ok) return CertificateResult::Optimal;
  return CertificateResult::Invalid;
}

}  // namespace jsrec
