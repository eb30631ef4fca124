#include "smr/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "smr/errors.hpp"
#include "smr/kernels.hpp"

namespace smr {

namespace {
void check_same_shape(int ar, int ac, int br, int bc, const char* op) {
  if (ar != br || ac != bc) {
    throw DimensionMismatch(std::string(op) + ": shape mismatch");
  }
}
}  // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw DimensionMismatch("Matrix: negative dimension");
  data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  data_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) {
      throw DimensionMismatch("Matrix: ragged initializer");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
  Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (int i = 0; i < m.rows_; ++i) m(i, i) = d[i];
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  check_same_shape(rows_, cols_, o.rows_, o.cols_, "add");
  kernels::active().axpy(data_.size(), 1.0, o.data_.data(), data_.data());
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  check_same_shape(rows_, cols_, o.rows_, o.cols_, "sub");
  kernels::active().axpy(data_.size(), -1.0, o.data_.data(), data_.data());
  return *this;
}

Matrix& Matrix::operator*=(double a) {
  kernels::active().scal(data_.size(), a, data_.data());
  return *this;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(int i0, int j0, int r, int c) const {
  if (i0 < 0 || j0 < 0 || r < 0 || c < 0 || i0 + r > rows_ || j0 + c > cols_) {
    throw IndexOutOfRange("Matrix::block: out of range");
  }
  Matrix b(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
  return b;
}

void Matrix::set_block(int i0, int j0, const Matrix& m) {
  if (i0 < 0 || j0 < 0 || i0 + m.rows_ > rows_ || j0 + m.cols_ > cols_) {
    throw IndexOutOfRange("Matrix::set_block: out of range");
  }
  for (int i = 0; i < m.rows_; ++i)
    for (int j = 0; j < m.cols_; ++j) (*this)(i0 + i, j0 + j) = m(i, j);
}

double Matrix::trace() const {
  double t = 0.0;
  const int n = std::min(rows_, cols_);
  for (int i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = kernels::active().dot(data_.size(), data_.data(), data_.data());
  return std::sqrt(s);
}

double Matrix::norm1() const {
  double best = 0.0;
  for (int j = 0; j < cols_; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double Matrix::norm_inf() const {
  double best = 0.0;
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double Matrix::max_abs() const {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

bool Matrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Matrix::symmetrize() {
  if (rows_ != cols_) throw DimensionMismatch("symmetrize: not square");
  for (int i = 0; i < rows_; ++i) {
    for (int j = i + 1; j < cols_; ++j) {
      const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
      (*this)(i, j) = v;
      (*this)(j, i) = v;
    }
  }
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

Matrix operator-(const Matrix& a) {
  Matrix r = a;
  r *= -1.0;
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dims differ");
  Matrix c(a.rows(), b.cols());
  if (!c.empty() && a.cols() > 0) {
    kernels::active().gemm(a.rows(), b.cols(), a.cols(), a.data(), a.cols(),
                           b.data(), b.cols(), c.data(), c.cols());
  }
  return c;
}

Matrix operator*(double a, Matrix m) { return m *= a; }

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hcat: row count differs");
  Matrix r(a.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(0, a.cols(), b);
  return r;
}

Matrix vcat(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("vcat: column count differs");
  Matrix r(a.rows() + b.rows(), a.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), 0, b);
  return r;
}

ComplexMatrix::ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw DimensionMismatch("ComplexMatrix: negative dimension");
  data_.assign(static_cast<std::size_t>(rows) * cols, cplx{0.0, 0.0});
}

ComplexMatrix::ComplexMatrix(const Matrix& re) : ComplexMatrix(re.rows(), re.cols()) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = re.data()[i];
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  check_same_shape(rows_, cols_, o.rows_, o.cols_, "add");
  kernels::active().zaxpy(data_.size(), cplx{1.0, 0.0}, o.data_.data(), data_.data());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  check_same_shape(rows_, cols_, o.rows_, o.cols_, "sub");
  kernels::active().zaxpy(data_.size(), cplx{-1.0, 0.0}, o.data_.data(), data_.data());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx a) {
  kernels::active().zscal(data_.size(), a, data_.data());
  return *this;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

ComplexMatrix ComplexMatrix::block(int i0, int j0, int r, int c) const {
  if (i0 < 0 || j0 < 0 || r < 0 || c < 0 || i0 + r > rows_ || j0 + c > cols_) {
    throw IndexOutOfRange("ComplexMatrix::block: out of range");
  }
  ComplexMatrix b(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
  return b;
}

void ComplexMatrix::set_block(int i0, int j0, const ComplexMatrix& m) {
  if (i0 < 0 || j0 < 0 || i0 + m.rows_ > rows_ || j0 + m.cols_ > cols_) {
    throw IndexOutOfRange("ComplexMatrix::set_block: out of range");
  }
  for (int i = 0; i < m.rows_; ++i)
    for (int j = 0; j < m.cols_; ++j) (*this)(i0 + i, j0 + j) = m(i, j);
}

Matrix ComplexMatrix::real_part() const {
  Matrix r(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).real();
  return r;
}

Matrix ComplexMatrix::imag_part() const {
  Matrix r(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).imag();
  return r;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double best = 0.0;
  for (const cplx& v : data_) best = std::max(best, std::abs(v));
  return best;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dims differ");
  ComplexMatrix c(a.rows(), b.cols());
  if (!c.empty() && a.cols() > 0) {
    kernels::active().zgemm(a.rows(), b.cols(), a.cols(), a.data(), a.cols(),
                            b.data(), b.cols(), c.data(), c.cols());
  }
  return c;
}

ComplexMatrix operator*(cplx a, ComplexMatrix m) { return m *= a; }

}  // namespace smr
