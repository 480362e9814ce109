#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jsrec/matrix.hpp"
#include "jsrec/support.hpp"

namespace jsrec {

enum class SolveStatus { Optimal, MaxIter, Infeasible, Unbounded, NumericFailure };

std::string to_string(SolveStatus s);

struct SolverSettings {
  double feas_tol = 1e-9;
  double gap_tol = 1e-9;
  int max_iter = 100;
  double recovery_tol = 1e-5;   // entrywise match threshold for recovery checks
  double zero_tol = 1e-9;       // sign extraction / support detection
};

struct SolveReport {
  std::vector<double> x;        // primal, length n
  std::vector<double> y;        // dual, length m
  SolveStatus status = SolveStatus::NumericFailure;
  double objective = 0.0;       // c'x for an LP, ||x||_1 for basis pursuit
  double primal_residual = 0.0; // ||Ax-b||_2
  double duality_gap = 0.0;     // |objective - b'y|
  int iterations = 0;
};

// min c'x  s.t.  A_eq x = b_eq, x >= lower_bounds, solved with a Mehrotra
// predictor-corrector interior-point method on dense normal equations.
// Infeasible equality systems are detected by least-squares presolve.
SolveReport solve_lp(const std::vector<double>& c, const DenseMatrix& A_eq,
                     const std::vector<double>& b_eq,
                     const std::vector<double>& lower_bounds,
                     const SolverSettings& settings = {});

// min ||x||_1 s.t. Ax = b via the split x = u - v, u,v >= 0. The report's y
// is the dual of max b'y s.t. ||A'y||_inf <= 1. Interior-point iterates never
// reach exact zeros, so the solution is polished: entries below 10*feas_tol
// are dropped and the surviving support is re-fit by least squares when that
// reproduces b.
SolveReport solve_bp(const DenseMatrix& A, const std::vector<double>& b,
                     const SolverSettings& settings = {});

struct RestrictedLsResult {
  DenseMatrix xbar;       // |I| x r coefficients on the support
  double residual = 0.0;  // ||A_I xbar - B||_F
  bool rank_deficient = false;
};

// Least-squares fit of B on the columns of A selected by I. Rank-deficient
// A_I yields the minimum-norm pseudo-minimizer, flagged.
RestrictedLsResult restricted_least_squares(const DenseMatrix& A, const SupportSet& I,
                                            const DenseMatrix& B);

enum class CertificateResult { UniqueOptimal, Optimal, Invalid };

std::string to_string(CertificateResult r);

// First-order optimality check for basis pursuit at x with multiplier y:
//   a_j'y = sign(x_j) on the support, |a_j'y| <= 1 off it.
// UniqueOptimal additionally requires strict off-support inequalities and
// full column rank of A restricted to the support. Assumes Ax = b was
// verified by the caller.
CertificateResult check_smv_certificate(const DenseMatrix& A, const std::vector<double>& x,
                                        const std::vector<double>& y,
                                        double strict_tol = 1e-6, double zero_tol = 1e-9);

// Support of x at the polishing threshold used by solve_bp.
SupportSet detect_support(const std::vector<double>& x, double zero_tol = 1e-9);

// Numerical rank with cutoff ||A||_2 * 1e-10 * max(m,n).
int numerical_rank(const DenseMatrix& A);
bool has_full_column_rank(const DenseMatrix& A, const SupportSet& I);

double norm_inf_diff(const std::vector<double>& a, const std::vector<double>& b);
double norm1(const std::vector<double>& v);
double norm2(const std::vector<double>& v);

}  // namespace jsrec
