#pragma once

#include <complex>
#include <cstddef>

namespace smr::kernels {

using cplx = std::complex<double>;

// Function table for the dense inner loops everything else is built on.
// Two implementations exist: portable scalar reference loops and an
// AVX2+FMA variant. Selection happens once at runtime; the two variants are
// equivalence-tested against each other in the test suite.
//
// Conventions (all row-major, leading dimension = elements per row):
//   dot    r = x . y
//   axpy   y += a * x
//   scal   x *= a
//   rot    [x; y] <- [c x + s y; c y - s x]                (Givens pair)
//   gemv   y = beta * y + A x                              (A is m x n)
//   ger    A += alpha * x y^T                              (A is m x n)
//   gemm   C += A B                                        (C m x n, A m x k)
//   zrot   [x; y] <- [c x + s y; c y - conj(s) x], c real  (unitary pair)
//   zdotu  r = sum x_i y_i (unconjugated)
struct Dispatch {
  const char* name;

  double (*dot)(std::size_t n, const double* x, const double* y);
  void (*axpy)(std::size_t n, double a, const double* x, double* y);
  void (*scal)(std::size_t n, double a, double* x);
  void (*rot)(std::size_t n, double* x, double* y, double c, double s);
  void (*gemv)(std::size_t m, std::size_t n, const double* a, std::size_t lda,
               const double* x, double beta, double* y);
  void (*ger)(std::size_t m, std::size_t n, double alpha, const double* x,
              const double* y, double* a, std::size_t lda);
  void (*gemm)(std::size_t m, std::size_t n, std::size_t k, const double* a,
               std::size_t lda, const double* b, std::size_t ldb, double* c,
               std::size_t ldc);

  cplx (*zdotu)(std::size_t n, const cplx* x, const cplx* y);
  void (*zaxpy)(std::size_t n, cplx a, const cplx* x, cplx* y);
  void (*zscal)(std::size_t n, cplx a, cplx* x);
  void (*zrot)(std::size_t n, cplx* x, cplx* y, double c, cplx s);
  void (*zgemm)(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
                std::size_t lda, const cplx* b, std::size_t ldb, cplx* c,
                std::size_t ldc);
};

// Portable reference implementation; always available.
const Dispatch& scalar();

// AVX2+FMA implementation, or nullptr when the build target or the running
// CPU does not support it.
const Dispatch* avx2();

// The table in use. Defaults to the best supported variant; the environment
// variable SMR_KERNELS=scalar|avx2 forces a specific one (useful for
// debugging and for the equivalence tests).
const Dispatch& active();

}  // namespace smr::kernels
