#include "smr/kernels.hpp"

namespace smr::kernels {
namespace {

double dot_scalar(std::size_t n, const double* x, const double* y) {
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) r += x[i] * y[i];
  return r;
}

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(std::size_t n, double a, double* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void rot_scalar(std::size_t n, double* x, double* y, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = c * yi - s * xi;
  }
}

void gemv_scalar(std::size_t m, std::size_t n, const double* a,
                 std::size_t lda, const double* x, double beta, double* y) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = a + i * lda;
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r += row[j] * x[j];
    y[i] = beta * y[i] + r;
  }
}

void ger_scalar(std::size_t m, std::size_t n, double alpha, const double* x,
                const double* y, double* a, std::size_t lda) {
  for (std::size_t i = 0; i < m; ++i) {
    const double ax = alpha * x[i];
    double* row = a + i * lda;
    for (std::size_t j = 0; j < n; ++j) row[j] += ax * y[j];
  }
}

void gemm_scalar(std::size_t m, std::size_t n, std::size_t k, const double* a,
                 std::size_t lda, const double* b, std::size_t ldb, double* c,
                 std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * lda;
    double* crow = c + i * ldc;
    for (std::size_t l = 0; l < k; ++l) {
      const double ail = arow[l];
      if (ail == 0.0) continue;
      const double* brow = b + l * ldb;
      for (std::size_t j = 0; j < n; ++j) crow[j] += ail * brow[j];
    }
  }
}

cplx zdotu_scalar(std::size_t n, const cplx* x, const cplx* y) {
  cplx r{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) r += x[i] * y[i];
  return r;
}

void zaxpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void zscal_scalar(std::size_t n, cplx a, cplx* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void zrot_scalar(std::size_t n, cplx* x, cplx* y, double c, cplx s) {
  const cplx sc = std::conj(s);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx xi = x[i];
    const cplx yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = c * yi - sc * xi;
  }
}

void zgemm_scalar(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
                  std::size_t lda, const cplx* b, std::size_t ldb, cplx* c,
                  std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i) {
    const cplx* arow = a + i * lda;
    cplx* crow = c + i * ldc;
    for (std::size_t l = 0; l < k; ++l) {
      const cplx ail = arow[l];
      if (ail == cplx{0.0, 0.0}) continue;
      const cplx* brow = b + l * ldb;
      for (std::size_t j = 0; j < n; ++j) crow[j] += ail * brow[j];
    }
  }
}

}  // namespace

const Dispatch& scalar() {
  static const Dispatch table{
      "scalar",      dot_scalar,  axpy_scalar,  scal_scalar, rot_scalar,
      gemv_scalar,   ger_scalar,  gemm_scalar,  zdotu_scalar, zaxpy_scalar,
      zscal_scalar,  zrot_scalar, zgemm_scalar,
  };
  return table;
}

}  // namespace smr::kernels
