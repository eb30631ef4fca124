#pragma once

#include <optional>
#include <vector>

#include "smr/matrix.hpp"

namespace smr {

// LU factorization with partial pivoting, shared by the real and complex
// solve paths. Row-major throughout; right-hand sides are solved as row-major
// blocks so the elimination runs on contiguous rows.
template <typename T, typename Mat>
class Lu {
 public:
  explicit Lu(const Mat& a);

  bool singular() const { return singular_; }
  // Ratio max|U_kk| / min|U_kk|; a cheap ill-conditioning proxy.
  double pivot_growth() const;
  // Exact 1-norm condition number via the explicit inverse. O(n^3).
  double cond1(const Mat& original) const;

  // Solves A X = B in place (B row-major n x m).
  void solve_in_place(Mat& b) const;
  Mat inverse() const;

 private:
  int n_ = 0;
  std::vector<T> a_;
  std::vector<int> piv_;
  bool singular_ = false;
};

using LuReal = Lu<double, Matrix>;
using LuComplex = Lu<cplx, ComplexMatrix>;

Matrix solve(const Matrix& a, const Matrix& b);
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);
Matrix inverse(const Matrix& a);

// Lower-triangular Cholesky of a symmetric matrix. Returns false when a
// pivot drops below a PSD tolerance instead of throwing.
bool cholesky(const Matrix& m, Matrix& lower);

// Symmetric eigendecomposition (Householder tridiagonalization + implicit
// QL). Eigenvalues are sorted descending; `vectors` holds eigenvectors as
// columns.
struct SymEigResult {
  std::vector<double> values;
  Matrix vectors;
};
SymEigResult sym_eig(const Matrix& m);

// Osborne diagonal balancing with power-of-two scales, in place:
// A <- D^{-1} A D. Returns diag(D).
std::vector<double> osborne_balance(Matrix& a);

// Householder reduction to upper Hessenberg form in place, A = Q H Q^T.
// Pass q = nullptr when the transform is not needed.
void hessenberg(Matrix& a, Matrix* q);

// Complex Schur form of a real matrix: A = D * U * T * U^H * D^{-1} where D
// is a diagonal balancing similarity (powers of two), U unitary and T upper
// triangular. Eigenvalues are the diagonal of T.
struct ComplexSchurResult {
  ComplexMatrix t;
  ComplexMatrix u;             // empty when vectors were not requested
  std::vector<double> scale;   // diagonal of D
  std::vector<cplx> eigenvalues;
};
ComplexSchurResult complex_schur(const Matrix& a, bool want_vectors);

// Eigenvalues only (balanced Hessenberg QR without vector accumulation).
std::vector<cplx> eigenvalues(const Matrix& a);

// One-sided Jacobi SVD of a real matrix, A = U diag(sigma) V^T with sigma
// descending. Computes singular values to high relative accuracy.
struct SvdResult {
  Matrix u;
  std::vector<double> sigma;
  Matrix v;
};
SvdResult jacobi_svd(const Matrix& a);

// Largest singular value of a complex matrix; closed forms for thin/2x2
// shapes, Hermitian eigenvalue embedding otherwise.
double sigma_max(const ComplexMatrix& m);

// Largest singular value with its left/right singular vectors.
struct SingularTriple {
  double sigma = 0.0;
  std::vector<cplx> u;
  std::vector<cplx> v;
};
SingularTriple max_singular_triple(const ComplexMatrix& m);

}  // namespace smr
