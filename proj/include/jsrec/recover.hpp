#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "jsrec/bp.hpp"
#include "jsrec/matrix.hpp"
#include "jsrec/rng.hpp"
#include "jsrec/support.hpp"

namespace jsrec {

struct PipelineSettings {
  SolverSettings bp;
  double res_tol = 1e-8;              // exactness test for A_I Xbar = B
  std::optional<int> support_override;
  bool log_weights = false;
  // When present, iteration t uses column t of this r x T matrix instead of
  // drawing from the generator (test hook for the e_i reduction).
  std::optional<DenseMatrix> forced_weights;
};

struct PipelineReport {
  bool recovered = false;
  DenseMatrix X;                      // n x r, zero off the accepted support
  SupportSet support;
  int iterations_used = 0;
  std::vector<std::vector<double>> weight_log;          // opt-in
  std::vector<std::pair<int, double>> per_iteration;    // (support size, LS residual)
};

// Largest support size accepted by the sparsity test 2|I| < m+1, i.e. half
// the spark of a matrix in general position; an override wins when given.
int support_threshold(const DenseMatrix& A, std::optional<int> override = {});

// Solves basis pursuit column by column; the first column whose polished
// support passes the sparsity test and whose restricted least-squares fit
// reproduces B yields the result.
PipelineReport boosted_l1(const DenseMatrix& A, const DenseMatrix& B,
                          const PipelineSettings& settings = {});

// Compresses B with random weight vectors w and applies the same test to the
// single-vector problem b = Bw. Reduces to boosted_l1 when the weights are
// forced to e_1..e_r with max_iterations = r.
PipelineReport rembo_l1(const DenseMatrix& A, const DenseMatrix& B,
                        int max_iterations, Rng& rng,
                        const PipelineSettings& settings = {});

}  // namespace jsrec
