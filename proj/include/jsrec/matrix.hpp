#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jsrec/rng.hpp"

namespace jsrec {

// Dense real matrix, row-major. Carrier for the measurement matrix A, the
// observation block B and the coefficient block X. Checked constructors
// reject non-finite entries.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols);  // zero-filled
  static DenseMatrix from_data(int rows, int cols, std::vector<double> data);
  static DenseMatrix identity(int n);
  static DenseMatrix from_column(const std::vector<double>& column);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  std::vector<double> column(int j) const;
  std::vector<double> row(int i) const;
  void set_column(int j, const std::vector<double>& values);

  double frobenius_norm() const;
  double max_abs_diff(const DenseMatrix& other) const;

  bool operator==(const DenseMatrix& other) const = default;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Entries i.i.d. standard normal, drawn in row-major order.
DenseMatrix gaussian_matrix(int rows, int cols, Rng& rng);

// Plain-text matrix format: first line "# rows cols", then one comma-separated
// line per row with entries at 17 significant digits (round-trips doubles
// bit-exactly). Readers accept LF and CRLF and re-check finiteness.
void write_matrix_csv(const DenseMatrix& m, std::ostream& os);
void write_matrix_csv(const DenseMatrix& m, const std::filesystem::path& path);
DenseMatrix read_matrix_csv(std::istream& is);
DenseMatrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace jsrec
