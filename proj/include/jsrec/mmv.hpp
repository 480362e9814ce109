#pragma once

#include <optional>
#include <vector>

#include "jsrec/bp.hpp"
#include "jsrec/matrix.hpp"
#include "jsrec/rng.hpp"
#include "jsrec/support.hpp"

namespace jsrec {

// One generated trial: row-sparse coefficients X0 on a support and the
// observations B = A*X0.
struct ProblemInstance {
  DenseMatrix A;
  DenseMatrix X0;
  DenseMatrix B;
  SupportSet support;
};

struct MmvSettings {
  double stop_tol = 1e-9;   // ADMM primal/dual residual scale
  double gap_tol = 1e-9;
  int max_iter = 100000;    // ADMM iterations
  double rho = 1.0;         // initial penalty; adapted by residual balancing
  double over_relax = 1.7;
  double recovery_tol = 1e-5;
  double strict_tol = 1e-6;
  double zero_tol = 1e-9;
  SolverSettings bp;        // per-column solver for the l1,1 path
};

struct MmvSolveReport {
  DenseMatrix X;            // n x r primal
  DenseMatrix Y;            // m x r dual
  SolveStatus status = SolveStatus::NumericFailure;
  double objective = 0.0;   // the minimized mixed norm
  double primal_residual = 0.0;  // ||AX - B||_F
  double gap = 0.0;         // |objective - trace(B'Y)|
  int iterations = 0;
  int failed_column = -1;   // l1,1 only: first column whose solve failed
};

// Sum of column l1 norms; decouples into one basis pursuit per column of B.
MmvSolveReport solve_l11(const DenseMatrix& A, const DenseMatrix& B,
                         const MmvSettings& settings = {});

// Sum of row l2 norms, solved by alternating-direction splitting: row-wise
// shrinkage prox against projection onto {X : AX = B} through one cached
// factorization of AA'. The dual Y comes from the scaled multiplier.
MmvSolveReport solve_l12(const DenseMatrix& A, const DenseMatrix& B,
                         const MmvSettings& settings = {});

// Uniqueness/optimality certificate for the row-norm-sum problem at (X, Y):
//   row j of A'Y = row j of X / ||row j of X||_2 on the row support,
//   ||row j of A'Y||_2 < 1 off it, and A restricted to the support has full
//   column rank. Non-strict variants yield Optimal. Assumes AX = B.
// An explicitly declared support containing a numerically zero row of X is
// rejected as ambiguous.
CertificateResult check_l12_certificate(const DenseMatrix& A, const DenseMatrix& X,
                                        const DenseMatrix& Y, double strict_tol = 1e-6,
                                        const std::optional<SupportSet>& declared_support = {},
                                        double zero_tol = 1e-9);

// X0 = diag(x) with zero columns removed: one nonzero per column on distinct
// rows. With at least m+1 nonzeros every column is 1-sparse (recoverable one
// at a time) while the row-norm-sum problem cannot return X0. Requires m < n,
// unit-norm pairwise non-collinear columns of A.
ProblemInstance construct_diag_counterexample(const DenseMatrix& A, int nnz_count,
                                              Rng& rng);

struct MixedInstance {
  ProblemInstance instance;  // X0 = [(1-gamma) s, gamma f]
  double gamma = 0.0;
  std::vector<double> s;     // recovered individually by basis pursuit
  std::vector<double> f;     // not recovered individually
};

// Searches for vectors s (recovered by basis pursuit, with a strict
// certificate) and f (not recovered) sharing the support I, then scans the
// gamma grid from below for the first X0 = [(1-gamma) s, gamma f] that the
// row-norm-sum solver recovers. Column 2 alone is unrecoverable, so the
// decoupled column solves always fail on the returned instance.
MixedInstance construct_l12_succeeds_l11_fails(
    const DenseMatrix& A, const SupportSet& I, Rng& rng,
    const std::vector<double>& gamma_grid = {}, const MmvSettings& settings = {},
    int draw_budget = 200);

// Log-spaced default grid {1e-4 ... 0.5}, 25 points.
std::vector<double> default_gamma_grid();

// Sum of row l2 norms.
double norm_12(const DenseMatrix& X);
// Row indices with l2 norm above the tolerance.
SupportSet row_support(const DenseMatrix& X, double zero_tol = 1e-9);

}  // namespace jsrec
