#include "jsrec/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "jsrec/errors.hpp"

namespace jsrec {

namespace {

void check_dims(int rows, int cols) {
  if (rows < 1 || cols < 1)
    fail(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
}

void check_finite(std::span<const double> data) {
  for (double v : data)
    if (!std::isfinite(v))
      fail(ErrorCode::InvalidArgument, "matrix entry is not finite");
}

}  // namespace

DenseMatrix::DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  check_dims(rows, cols);
  data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

DenseMatrix DenseMatrix::from_data(int rows, int cols, std::vector<double> data) {
  check_dims(rows, cols);
  if (data.size() != static_cast<std::size_t>(rows) * cols)
    fail(ErrorCode::DimensionMismatch, "data length does not equal rows*cols");
  check_finite(data);
  DenseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(data);
  return m;
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_column(const std::vector<double>& column) {
  return from_data(static_cast<int>(column.size()), 1, column);
}

std::vector<double> DenseMatrix::column(int j) const {
  std::vector<double> out(rows_);
  for (int i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

std::vector<double> DenseMatrix::row(int i) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(i) * cols_,
          data_.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols_};
}

void DenseMatrix::set_column(int j, const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != rows_)
    fail(ErrorCode::DimensionMismatch, "column length does not match row count");
  for (int i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double DenseMatrix::max_abs_diff(const DenseMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    fail(ErrorCode::DimensionMismatch, "matrix shapes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

DenseMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  check_dims(rows, cols);
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = rng.next_normal();
  return m;
}

void write_matrix_csv(const DenseMatrix& m, std::ostream& os) {
  os << "# " << m.rows() << ' ' << m.cols() << '\n';
  char buf[64];
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      os << (j ? "," : "") << buf;
    }
    os << '\n';
  }
}

void write_matrix_csv(const DenseMatrix& m, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) fail(ErrorCode::IoError, "cannot open for writing: " + path.string());
  write_matrix_csv(m, os);
  if (!os.good()) fail(ErrorCode::IoError, "write failed: " + path.string());
}

namespace {

std::string next_line(std::istream& is) {
  std::string line;
  std::getline(is, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

DenseMatrix read_matrix_csv(std::istream& is) {
  std::string header = next_line(is);
  int rows = 0, cols = 0;
  if (std::sscanf(header.c_str(), "# %d %d", &rows, &cols) != 2)
    fail(ErrorCode::IoError, "bad matrix header: expected '# rows cols'");
  check_dims(rows, cols);
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    const std::string line = next_line(is);
    const char* p = line.c_str();
    for (int j = 0; j < cols; ++j) {
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p) fail(ErrorCode::IoError, "bad matrix entry on row " + std::to_string(i));
      data.push_back(v);
      p = end;
      if (*p == ',') ++p;
    }
  }
  return DenseMatrix::from_data(rows, cols, std::move(data));
}

DenseMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::IoError, "cannot open for reading: " + path.string());
  return read_matrix_csv(is);
}

}  // namespace jsrec
