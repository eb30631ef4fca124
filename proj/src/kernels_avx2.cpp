// AVX2+FMA variants of the dense kernels. This translation unit is compiled
// with -mavx2 -mfma and must only be entered after the dispatcher has
// confirmed CPU support.

#include "smr/kernels.hpp"

#if defined(SMR_BUILD_AVX2)

#include <immintrin.h>

namespace smr::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

// Complex helpers operate on interleaved [re, im] doubles, two complex
// numbers per __m256d lane group.

// Elementwise product of two complex pairs.
inline __m256d cmul(__m256d x, __m256d y) {
  __m256d xre = _mm256_movedup_pd(x);
  __m256d xim = _mm256_permute_pd(x, 0xF);
  __m256d ysw = _mm256_permute_pd(y, 0x5);
  return _mm256_fmaddsub_pd(xre, y, _mm256_mul_pd(xim, ysw));
}

// Product of a complex constant (broadcast as re/im vectors) with a pair.
inline __m256d cmul_const(__m256d wre, __m256d wim, __m256d v) {
  __m256d vsw = _mm256_permute_pd(v, 0x5);
  return _mm256_fmaddsub_pd(wre, v, _mm256_mul_pd(wim, vsw));
}

double dot_avx2(std::size_t n, const double* x, const double* y) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double r = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

void axpy_avx2(std::size_t n, double a, const double* x, double* y) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal_avx2(std::size_t n, double a, double* x) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void rot_avx2(std::size_t n, double* x, double* y, double c, double s) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i, _mm256_fmadd_pd(cv, xv, _mm256_mul_pd(sv, yv)));
    _mm256_storeu_pd(y + i, _mm256_fmsub_pd(cv, yv, _mm256_mul_pd(sv, xv)));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = c * yi - s * xi;
  }
}

void gemv_avx2(std::size_t m, std::size_t n, const double* a, std::size_t lda,
               const double* x, double beta, double* y) {
  for (std::size_t i = 0; i < m; ++i) {
    y[i] = beta * y[i] + dot_avx2(n, a + i * lda, x);
  }
}

void ger_avx2(std::size_t m, std::size_t n, double alpha, const double* x,
              const double* y, double* a, std::size_t lda) {
  for (std::size_t i = 0; i < m; ++i) {
    axpy_avx2(n, alpha * x[i], y, a + i * lda);
  }
}

void gemm_avx2(std::size_t m, std::size_t n, std::size_t k, const double* a,
               std::size_t lda, const double* b, std::size_t ldb, double* c,
               std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * lda;
    double* crow = c + i * ldc;
    for (std::size_t l = 0; l < k; ++l) {
      const double ail = arow[l];
      if (ail == 0.0) continue;
      const __m256d av = _mm256_set1_pd(ail);
      const double* brow = b + l * ldb;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j),
                                    _mm256_loadu_pd(crow + j));
        _mm256_storeu_pd(crow + j, r);
      }
      for (; j < n; ++j) crow[j] += ail * brow[j];
    }
  }
}

cplx zdotu_avx2(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = _mm256_add_pd(acc, cmul(_mm256_loadu_pd(xd + 2 * i),
                                  _mm256_loadu_pd(yd + 2 * i)));
  }
  double buf[4];
  _mm256_storeu_pd(buf, acc);
  cplx r{buf[0] + buf[2], buf[1] + buf[3]};
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

void zaxpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const __m256d are = _mm256_set1_pd(a.real());
  const __m256d aim = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d r = _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i),
                              cmul_const(are, aim, _mm256_loadu_pd(xd + 2 * i)));
    _mm256_storeu_pd(yd + 2 * i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void zscal_avx2(std::size_t n, cplx a, cplx* x) {
  double* xd = reinterpret_cast<double*>(x);
  const __m256d are = _mm256_set1_pd(a.real());
  const __m256d aim = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(xd + 2 * i,
                     cmul_const(are, aim, _mm256_loadu_pd(xd + 2 * i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void zrot_avx2(std::size_t n, cplx* x, cplx* y, double c, cplx s) {
  double* xd = reinterpret_cast<double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d sre = _mm256_set1_pd(s.real());
  const __m256d sim = _mm256_set1_pd(s.imag());
  // conj(s) has the imaginary sign flipped
  const __m256d scim = _mm256_set1_pd(-s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    __m256d xn = _mm256_fmadd_pd(cv, xv, cmul_const(sre, sim, yv));
    __m256d yn = _mm256_fmsub_pd(cv, yv, cmul_const(sre, scim, xv));
    _mm256_storeu_pd(xd + 2 * i, xn);
    _mm256_storeu_pd(yd + 2 * i, yn);
  }
  const cplx sc = std::conj(s);
  for (; i < n; ++i) {
    const cplx xi = x[i];
    const cplx yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = c * yi - sc * xi;
  }
}

void zgemm_avx2(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
                std::size_t lda, const cplx* b, std::size_t ldb, cplx* c,
                std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i) {
    const cplx* arow = a + i * lda;
    cplx* crow = c + i * ldc;
    double* cd = reinterpret_cast<double*>(crow);
    for (std::size_t l = 0; l < k; ++l) {
      const cplx ail = arow[l];
      if (ail == cplx{0.0, 0.0}) continue;
      const __m256d are = _mm256_set1_pd(ail.real());
      const __m256d aim = _mm256_set1_pd(ail.imag());
      const cplx* brow = b + l * ldb;
      const double* bd = reinterpret_cast<const double*>(brow);
      std::size_t j = 0;
      for (; j + 2 <= n; j += 2) {
        __m256d r = _mm256_add_pd(_mm256_loadu_pd(cd + 2 * j),
                                  cmul_const(are, aim, _mm256_loadu_pd(bd + 2 * j)));
        _mm256_storeu_pd(cd + 2 * j, r);
      }
      for (; j < n; ++j) crow[j] += ail * brow[j];
    }
  }
}

}  // namespace

const Dispatch* avx2_table_impl() {
  static const Dispatch table{
      "avx2",      dot_avx2,  axpy_avx2,  scal_avx2, rot_avx2,
      gemv_avx2,   ger_avx2,  gemm_avx2,  zdotu_avx2, zaxpy_avx2,
      zscal_avx2,  zrot_avx2, zgemm_avx2,
  };
  return &table;
}

}  // namespace smr::kernels

#endif  // SMR_BUILD_AVX2
