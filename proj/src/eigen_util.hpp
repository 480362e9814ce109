#pragma once

#include <Eigen/Dense>

#include "jsrec/matrix.hpp"
#include "jsrec/support.hpp"

namespace jsrec {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMajorMap = Eigen::Map<const RowMajorMatrix>;
using RowMajorMutableMap = Eigen::Map<RowMajorMatrix>;

inline RowMajorMap as_eigen(const DenseMatrix& m) {
  return RowMajorMap(m.data().data(), m.rows(), m.cols());
}

inline RowMajorMutableMap as_eigen(DenseMatrix& m) {
  return RowMajorMutableMap(m.data().data(), m.rows(), m.cols());
}

inline Eigen::Map<const Eigen::VectorXd> as_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

inline DenseMatrix to_matrix(const Eigen::MatrixXd& m) {
  DenseMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  as_eigen(out) = m;
  return out;
}

// Columns of A selected by the support, in support order.
inline Eigen::MatrixXd select_columns(const DenseMatrix& A, const SupportSet& I) {
  Eigen::MatrixXd out(A.rows(), I.size());
  const auto a = as_eigen(A);
  for (int k = 0; k < I.size(); ++k) out.col(k) = a.col(I[k]);
  return out;
}

}  // namespace jsrec
