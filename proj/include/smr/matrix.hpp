#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace smr {

using cplx = std::complex<double>;

// Dense real matrix, row-major. Dimensions may be zero (a 0 x m matrix is
// the state part of a pure-gain subsystem).
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-filled
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);
  static Matrix diagonal(const std::vector<double>& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row_ptr(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row_ptr(int i) const { return data_.data() + static_cast<std::size_t>(i) * cols_; }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double a);

  Matrix transpose() const;
  Matrix block(int i0, int j0, int r, int c) const;
  void set_block(int i0, int j0, const Matrix& m);

  double trace() const;
  double frobenius_norm() const;
  double norm1() const;      // max column sum
  double norm_inf() const;   // max row sum
  double max_abs() const;
  bool all_finite() const;

  // (M + M^T)/2
  void symmetrize();

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(const Matrix& a);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double a, Matrix m);

// [A 0; 0 B] and stacking helpers.
Matrix block_diag(const Matrix& a, const Matrix& b);
Matrix hcat(const Matrix& a, const Matrix& b);
Matrix vcat(const Matrix& a, const Matrix& b);

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols);
  explicit ComplexMatrix(const Matrix& re);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  cplx& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  cplx operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  cplx* row_ptr(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  const cplx* row_ptr(int i) const { return data_.data() + static_cast<std::size_t>(i) * cols_; }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx a);

  ComplexMatrix transpose() const;
  ComplexMatrix adjoint() const;  // conjugate transpose
  ComplexMatrix block(int i0, int j0, int r, int c) const;
  void set_block(int i0, int j0, const ComplexMatrix& m);

  Matrix real_part() const;
  Matrix imag_part() const;
  double frobenius_norm() const;
  double max_abs() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx a, ComplexMatrix m);

}  // namespace smr
