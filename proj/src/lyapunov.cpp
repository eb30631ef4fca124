#include "smr/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smr/errors.hpp"
#include "smr/kernels.hpp"
#include "smr/linalg.hpp"

namespace smr {

StabilityInfo is_hurwitz(const Matrix& a, double margin) {
  if (a.rows() != a.cols()) throw DimensionMismatch("is_hurwitz: not square");
  StabilityInfo info;
  if (a.rows() == 0) {
    info.hurwitz = true;
    info.abscissa = -std::numeric_limits<double>::infinity();
    return info;
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (const cplx& ev : eigenvalues(a)) worst = std::max(worst, ev.real());
  info.abscissa = worst;
  info.hurwitz = worst < margin;
  return info;
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& w, double stability_margin) {
  const int n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("solve_lyapunov: A not square");
  if (w.rows() != n || w.cols() != n) {
    throw DimensionMismatch("solve_lyapunov: W shape mismatch");
  }
  if (n == 0) return Matrix(0, 0);
  const double wnorm = w.frobenius_norm();
  {
    Matrix asym = w - w.transpose();
    if (asym.frobenius_norm() > 1e-8 * std::max(1.0, wnorm)) {
      throw InvalidArgument("solve_lyapunov: W is not symmetric");
    }
  }

  ComplexSchurResult schur = complex_schur(a, true);
  double abscissa = -std::numeric_limits<double>::infinity();
  for (const cplx& ev : schur.eigenvalues) abscissa = std::max(abscissa, ev.real());
  if (abscissa >= stability_margin) {
    throw NotStable("solve_lyapunov: spectral abscissa " + std::to_string(abscissa));
  }

  // A = D U T U^H D^{-1}; with Wt = D^{-1} W D^{-1} and Y = U^H Xt conj(U),
  // the equation becomes T Y + Y T^T = -U^H Wt conj(U), solved column by
  // column from the right.
  Matrix wt = w;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) wt(i, j) /= schur.scale[i] * schur.scale[j];
  const ComplexMatrix& u = schur.u;
  const ComplexMatrix& t = schur.t;
  ComplexMatrix uconj(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) uconj(i, j) = std::conj(u(i, j));
  ComplexMatrix rhs = u.adjoint() * ComplexMatrix(wt) * uconj;

  ComplexMatrix y(n, n);
  std::vector<cplx> col(n);
  for (int kcol = n - 1; kcol >= 0; --kcol) {
    for (int i = 0; i < n; ++i) {
      cplx acc = -rhs(i, kcol);
      for (int j = kcol + 1; j < n; ++j) acc -= t(kcol, j) * y(i, j);
      col[i] = acc;
    }
    // Back-substitute (T + T(k,k) I) x = col.
    const cplx shift = t(kcol, kcol);
    for (int i = n - 1; i >= 0; --i) {
      cplx acc = col[i];
      for (int j = i + 1; j < n; ++j) acc -= t(i, j) * y(j, kcol);
      y(i, kcol) = acc / (t(i, i) + shift);
    }
  }

  ComplexMatrix xt = u * y * u.transpose();
  Matrix x = xt.real_part();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) *= schur.scale[i] * schur.scale[j];
  x.symmetrize();

  Matrix residual = a * x + x * a.transpose() + w;
  if (residual.frobenius_norm() > 1e-6 * std::max(1.0, wnorm)) {
    throw NumericalBreakdown("solve_lyapunov: residual check failed");
  }
  return x;
}

}  // namespace smr
