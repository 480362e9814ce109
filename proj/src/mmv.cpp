#include "jsrec/mmv.hpp"

#include <algorithm>
#include <cmath>

#include "eigen_util.hpp"
#include "jsrec/errors.hpp"

namespace jsrec {

double norm_12(const DenseMatrix& X) {
  const auto x = as_eigen(X);
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) s += x.row(i).norm();
  return s;
}

SupportSet row_support(const DenseMatrix& X, double zero_tol) {
  const auto x = as_eigen(X);
  std::vector<int> idx;
  for (int i = 0; i < X.rows(); ++i)
    if (x.row(i).norm() > zero_tol) idx.push_back(i);
  return SupportSet::make(std::move(idx), X.rows());
}

MmvSolveReport solve_l11(const DenseMatrix& A, const DenseMatrix& B,
                         const MmvSettings& settings) {
  const int n = A.cols();
  const int m = A.rows();
  const int r = B.cols();
  if (B.rows() != m) fail(ErrorCode::DimensionMismatch, "B rows != A rows");

  MmvSolveReport rep;
  rep.X = DenseMatrix(n, r);
  rep.Y = DenseMatrix(m, r);
  rep.status = SolveStatus::Optimal;
  int iters = 0;
  for (int k = 0; k < r; ++k) {
    const SolveReport col = solve_bp(A, B.column(k), settings.bp);
    if (col.status != SolveStatus::Optimal && rep.failed_column < 0) {
      rep.status = col.status;
      rep.failed_column = k;
    }
    if (!col.x.empty()) rep.X.set_column(k, col.x);
    if (!col.y.empty()) rep.Y.set_column(k, col.y);
    rep.objective += col.objective;
    iters = std::max(iters, col.iterations);
  }
  rep.iterations = iters;
  const auto a = as_eigen(A);
  rep.primal_residual = (a * as_eigen(rep.X) - as_eigen(B)).norm();
  rep.gap = std::abs(rep.objective -
                     (as_eigen(B).transpose() * as_eigen(rep.Y)).trace());
  return rep;
}

namespace {

// Row-wise shrinkage: prox of kappa * sum of row l2 norms.
void shrink_rows(Eigen::MatrixXd& v, double kappa) {
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    const double nrm = v.row(i).norm();
    v.row(i) *= nrm > kappa ? 1.0 - kappa / nrm : 0.0;
  }
}

}  // namespace

MmvSolveReport solve_l12(const DenseMatrix& A, const DenseMatrix& B,
                         const MmvSettings& settings) {
  const int m = A.rows();
  const int n = A.cols();
  const int r = B.cols();
  if (B.rows() != m) fail(ErrorCode::DimensionMismatch, "B rows != A rows");

  const auto a = as_eigen(A);
  const auto bmat = as_eigen(B);
  MmvSolveReport rep;

  Eigen::LDLT<Eigen::MatrixXd> aat((a * a.transpose()).eval());
  if (aat.info() != Eigen::Success) return rep;

  // Feasibility: every column of B must lie in range(A).
  const Eigen::MatrixXd pinv_b = a.transpose() * aat.solve(bmat);
  if ((a * pinv_b - bmat).norm() > settings.stop_tol * (1.0 + bmat.norm())) {
    rep.status = SolveStatus::Infeasible;
    rep.primal_residual = (a * pinv_b - bmat).norm();
    return rep;
  }

  const auto project = [&](const Eigen::MatrixXd& v) -> Eigen::MatrixXd {
    return v - a.transpose() * aat.solve(a * v - bmat);
  };
  // Dual from the scaled multiplier, A'Y ~= rho*U, pulled back to exact dual
  // feasibility so that trace(B'Y) lower-bounds the optimum.
  const auto extract_dual = [&](const Eigen::MatrixXd& mult, double penalty) {
    Eigen::MatrixXd dual = aat.solve(a * (penalty * mult));
    const Eigen::MatrixXd g = a.transpose() * dual;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i) worst = std::max(worst, g.row(i).norm());
    if (worst > 1.0) dual /= worst;
    return dual;
  };

  double rho = settings.rho;
  const double alpha = settings.over_relax;
  Eigen::MatrixXd z = pinv_b;
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, r);
  Eigen::MatrixXd x = z;
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(m, r);

  const double scale = 1.0 + bmat.norm();
  SolveStatus status = SolveStatus::MaxIter;
  double tol = settings.stop_tol;
  bool have_dual = false;
  int it = 0;
  for (; it < settings.max_iter; ++it) {
    x = project(z - u);
    const Eigen::MatrixXd x_hat = alpha * x + (1.0 - alpha) * z;
    Eigen::MatrixXd z_new = x_hat + u;
    shrink_rows(z_new, 1.0 / rho);
    u += x_hat - z_new;

    const double r_pri = (x - z_new).norm();
    const double r_dual = rho * (z_new - z).norm();
    z = z_new;

    const double eps_pri = tol * (1.0 + std::max(x.norm(), z.norm()));
    const double eps_dual = tol * (1.0 + rho * u.norm());
    if (r_pri <= eps_pri && r_dual <= eps_dual) {
      // Residuals alone leave the multiplier slightly loose; accept only
      // once the certified duality gap is inside the reported tolerance.
      y = extract_dual(u, rho);
      have_dual = true;
      double obj = 0.0;
      for (int i = 0; i < n; ++i) obj += x.row(i).norm();
      const double gap = std::abs(obj - (bmat.transpose() * y).trace());
      if (gap <= settings.gap_tol * scale) {
        status = SolveStatus::Optimal;
        break;
      }
      if (tol <= 1e-14) break;  // dual will not tighten further
      tol *= 0.5;
    }

    // Residual balancing keeps the two rates comparable.
    if ((it + 1) % 50 == 0) {
      if (r_pri > 10.0 * r_dual) {
        rho *= 2.0;
        u *= 0.5;
      } else if (r_dual > 10.0 * r_pri) {
        rho *= 0.5;
        u *= 2.0;
      }
    }
  }

  Eigen::MatrixXd xfinal = project(z);
  if (!have_dual) y = extract_dual(u, rho);

  // Support polish, as for basis pursuit: re-fit rows that survive the
  // shrinkage threshold and keep the fit when it reproduces B without
  // increasing the objective.
  {
    const SupportSet sup = [&] {
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        if (z.row(i).norm() > 10.0 * settings.stop_tol) idx.push_back(i);
      return SupportSet::make(std::move(idx), n);
    }();
    if (!sup.empty() && sup.size() <= m) {
      const Eigen::MatrixXd aI = select_columns(A, sup);
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(aI);
      const Eigen::MatrixXd xbar = cod.solve(bmat);
      if ((aI * xbar - bmat).norm() <= settings.stop_tol * (1.0 + bmat.norm())) {
        Eigen::MatrixXd cand = Eigen::MatrixXd::Zero(n, r);
        for (int k = 0; k < sup.size(); ++k) cand.row(sup[k]) = xbar.row(k);
        double obj_cand = 0.0, obj_cur = 0.0;
        for (int i = 0; i < n; ++i) {
          obj_cand += cand.row(i).norm();
          obj_cur += xfinal.row(i).norm();
        }
        if (obj_cand <= obj_cur + settings.stop_tol * (1.0 + obj_cur))
          xfinal = cand;
      }
    } else if (sup.empty() && bmat.norm() <= settings.stop_tol * (1.0 + bmat.norm())) {
      xfinal.setZero();
    }
  }

  rep.X = to_matrix(xfinal);
  rep.Y = to_matrix(y);
  rep.status = status;
  rep.iterations = it;
  rep.objective = norm_12(rep.X);
  rep.primal_residual = (a * xfinal - bmat).norm();
  rep.gap = std::abs(rep.objective - (bmat.transpose() * y).trace());
  return rep;
}

CertificateResult check_l12_certificate(const DenseMatrix& A, const DenseMatrix& X,
                                        const DenseMatrix& Y, double strict_tol,
                                        const std::optional<SupportSet>& declared_support,
                                        double zero_tol) {
  if (A.cols() != X.rows() || A.rows() != Y.rows() || X.cols() != Y.cols())
    fail(ErrorCode::DimensionMismatch, "certificate dimensions");

  const auto x = as_eigen(X);
  SupportSet sup;
  if (declared_support) {
    sup = *declared_support;
    for (int k = 0; k < sup.size(); ++k)
      if (x.row(sup[k]).norm() <= zero_tol)
        fail(ErrorCode::AmbiguousSupport,
             "declared support row " + std::to_string(sup[k]) + " is numerically zero");
  } else {
    sup = row_support(X, zero_tol);
  }

  const Eigen::MatrixXd g = as_eigen(A).transpose() * as_eigen(Y);  // n x r

  bool strict_ok = true;
  bool loose_ok = true;
  for (int j = 0; j < X.rows(); ++j) {
    if (sup.contains(j)) {
      const Eigen::RowVectorXd want = x.row(j) / x.row(j).norm();
      if ((g.row(j) - want).lpNorm<Eigen::Infinity>() > strict_tol) {
        strict_ok = false;
        loose_ok = false;
      }
    } else {
      const double nrm = g.row(j).norm();
      if (nrm > 1.0 - strict_tol) strict_ok = false;
      if (nrm > 1.0 + strict_tol) loose_ok = false;
    }
  }
  if (strict_ok && has_full_column_rank(A, sup)) return CertificateResult::UniqueOptimal;

  if (loose_ok) {
    // Non-strict optimality additionally needs a zero duality gap.
    const double obj = norm_12(X);
    const auto a = as_eigen(A);
    const Eigen::MatrixXd b = a * as_eigen(X);
    const double gap = std::abs(obj - (b.transpose() * as_eigen(Y)).trace());
    if (gap <= strict_tol * (1.0 + obj)) return CertificateResult::Optimal;
  }
  return CertificateResult::Invalid;
}

ProblemInstance construct_diag_counterexample(const DenseMatrix& A, int nnz_count,
                                              Rng& rng) {
  const int m = A.rows();
  const int n = A.cols();
  if (m >= n)
    fail(ErrorCode::InvalidArgument, "construction requires m < n");
  if (nnz_count < m + 1)
    fail(ErrorCode::InvalidArgument, "need at least m+1 nonzeros");
  if (nnz_count > n) fail(ErrorCode::InvalidArgument, "nnz_count exceeds n");

  const auto a = as_eigen(A);
  for (int j = 0; j < n; ++j) {
    if (std::abs(a.col(j).norm() - 1.0) > 1e-8)
      fail(ErrorCode::InvalidArgument, "columns of A must have unit norm");
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(a.col(i).dot(a.col(j))) > 1.0 - 1e-10)
        fail(ErrorCode::InvalidArgument, "columns of A must not be collinear");

  const SupportSet I = SupportSet::random(nnz_count, n, rng);
  DenseMatrix x0(n, nnz_count);
  for (int k = 0; k < nnz_count; ++k) {
    double v = rng.next_normal();
    while (std::abs(v) < 1e-3) v = rng.next_normal();
    x0(I[k], k) = v;
  }
  ProblemInstance inst;
  inst.A = A;
  inst.X0 = x0;
  inst.B = to_matrix(a * as_eigen(x0));
  inst.support = I;
  return inst;
}

std::vector<double> default_gamma_grid() {
  std::vector<double> grid(25);
  const double lo = std::log(1e-4), hi = std::log(0.5);
  for (int i = 0; i < 25; ++i)
    grid[i] = std::exp(lo + (hi - lo) * i / 24.0);
  return grid;
}

MixedInstance construct_l12_succeeds_l11_fails(
    const DenseMatrix& A, const SupportSet& I, Rng& rng,
    const std::vector<double>& gamma_grid, const MmvSettings& settings,
    int draw_budget) {
  const int n = A.cols();
  if (I.ambient() != n) fail(ErrorCode::DimensionMismatch, "support ambient");

  const auto a = as_eigen(A);
  const auto draw_on_support = [&] {
    std::vector<double> v(n, 0.0);
    for (int j : I.indices()) {
      double g = rng.next_normal();
      while (std::abs(g) < 1e-3) g = rng.next_normal();
      v[j] = g;
    }
    return v;
  };
  const auto recovered_by_bp = [&](const std::vector<double>& v, SolveReport* out) {
    const Eigen::VectorXd b = a * as_eigen(v);
    SolveReport rep = solve_bp(A, to_vector(b), settings.bp);
    if (out) *out = rep;
    return rep.status == SolveStatus::Optimal &&
           norm_inf_diff(rep.x, v) <= settings.recovery_tol;
  };

  std::vector<double> s, f;
  for (int t = 0; t < draw_budget && s.empty(); ++t) {
    const std::vector<double> cand = draw_on_support();
    SolveReport rep;
    if (recovered_by_bp(cand, &rep) &&
        check_smv_certificate(A, cand, rep.y, settings.strict_tol,
                              settings.zero_tol) == CertificateResult::UniqueOptimal)
      s = cand;
  }
  if (s.empty())
    fail(ErrorCode::SearchExhausted, "no certified recoverable vector found on support");
  for (int t = 0; t < draw_budget && f.empty(); ++t) {
    const std::vector<double> cand = draw_on_support();
    if (!recovered_by_bp(cand, nullptr)) f = cand;
  }
  if (f.empty())
    fail(ErrorCode::SearchExhausted, "no unrecoverable vector found on support");

  const std::vector<double>& grid =
      gamma_grid.empty() ? default_gamma_grid() : gamma_grid;
  for (double gamma : grid) {
    if (gamma <= 0.0 || gamma >= 1.0)
      fail(ErrorCode::InvalidArgument, "gamma grid entries must lie in (0,1)");
    DenseMatrix x0(n, 2);
    for (int j = 0; j < n; ++j) {
      x0(j, 0) = (1.0 - gamma) * s[j];
      x0(j, 1) = gamma * f[j];
    }
    const DenseMatrix B = to_matrix(a * as_eigen(x0));
    const MmvSolveReport rep = solve_l12(A, B, settings);
    if (rep.status == SolveStatus::Optimal &&
        rep.X.max_abs_diff(x0) <= settings.recovery_tol) {
      MixedInstance out;
      out.instance = ProblemInstance{A, x0, B, I};
      out.gamma = gamma;
      out.s = s;
      out.f = f;
      return out;
    }
  }
  fail(ErrorCode::SearchExhausted, "no gamma on the grid yields l12 recovery");
}

}  // namespace jsrec
