#include "smr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "smr/errors.hpp"
#include "smr/kernels.hpp"

namespace smr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs1(double x) { return std::abs(x); }
double abs1(const cplx& x) { return std::abs(x.real()) + std::abs(x.imag()); }

}  // namespace

// ---------------------------------------------------------------------------
// LU
// ---------------------------------------------------------------------------

template <typename T, typename Mat>
Lu<T, Mat>::Lu(const Mat& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("Lu: matrix not square");
  n_ = a.rows();
  a_.assign(a.data(), a.data() + static_cast<std::size_t>(n_) * n_);
  piv_.resize(n_);
  auto at = [&](int i, int j) -> T& { return a_[static_cast<std::size_t>(i) * n_ + j]; };
  const auto& k = kernels::active();
  for (int col = 0; col < n_; ++col) {
    int p = col;
    double best = abs1(at(col, col));
    for (int i = col + 1; i < n_; ++i) {
      const double v = abs1(at(i, col));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    piv_[col] = p;
    if (p != col) {
      for (int j = 0; j < n_; ++j) std::swap(at(col, j), at(p, j));
    }
    if (best == 0.0) {
      singular_ = true;
      continue;
    }
    const T pivot = at(col, col);
    for (int i = col + 1; i < n_; ++i) {
      const T l = at(i, col) / pivot;
      at(i, col) = l;
      if constexpr (std::is_same_v<T, double>) {
        k.axpy(n_ - col - 1, -l, &at(col, col + 1), &at(i, col + 1));
      } else {
        k.zaxpy(n_ - col - 1, -l, &at(col, col + 1), &at(i, col + 1));
      }
    }
  }
}

template <typename T, typename Mat>
double Lu<T, Mat>::pivot_growth() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double v = abs1(a_[static_cast<std::size_t>(i) * n_ + i]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

template <typename T, typename Mat>
void Lu<T, Mat>::solve_in_place(Mat& b) const {
  if (b.rows() != n_) throw DimensionMismatch("Lu::solve: rhs rows mismatch");
  if (singular_) throw NumericalBreakdown("Lu::solve: exactly singular matrix");
  const int m = b.cols();
  const auto& k = kernels::active();
  auto at = [&](int i, int j) -> const T& {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  };
  auto axpy_row = [&](int dst, int src, T coef) {
    if constexpr (std::is_same_v<T, double>) {
      k.axpy(m, coef, b.row_ptr(src), b.row_ptr(dst));
    } else {
      k.zaxpy(m, coef, b.row_ptr(src), b.row_ptr(dst));
    }
  };
  for (int i = 0; i < n_; ++i) {
    if (piv_[i] != i) {
      for (int j = 0; j < m; ++j) std::swap(b(i, j), b(piv_[i], j));
    }
  }
  for (int col = 0; col < n_; ++col) {
    for (int i = col + 1; i < n_; ++i) {
      if (at(i, col) != T{}) axpy_row(i, col, -at(i, col));
    }
  }
  for (int row = n_ - 1; row >= 0; --row) {
    for (int j = row + 1; j < n_; ++j) {
      if (at(row, j) != T{}) axpy_row(row, j, -at(row, j));
    }
    const T inv = T{1.0} / at(row, row);
    if constexpr (std::is_same_v<T, double>) {
      k.scal(m, inv, b.row_ptr(row));
    } else {
      k.zscal(m, inv, b.row_ptr(row));
    }
  }
}

template <typename T, typename Mat>
Mat Lu<T, Mat>::inverse() const {
  Mat id(n_, n_);
  for (int i = 0; i < n_; ++i) id(i, i) = T{1.0};
  solve_in_place(id);
  return id;
}

template <typename T, typename Mat>
double Lu<T, Mat>::cond1(const Mat& original) const {
  if (singular_) return std::numeric_limits<double>::infinity();
  Mat inv = inverse();
  double na = 0.0;
  double ni = 0.0;
  for (int j = 0; j < n_; ++j) {
    double sa = 0.0;
    double si = 0.0;
    for (int i = 0; i < n_; ++i) {
      sa += std::abs(original(i, j));
      si += std::abs(inv(i, j));
    }
    na = std::max(na, sa);
    ni = std::max(ni, si);
  }
  return na * ni;
}

template class Lu<double, Matrix>;
template class Lu<cplx, ComplexMatrix>;

Matrix solve(const Matrix& a, const Matrix& b) {
  LuReal lu(a);
  Matrix x = b;
  lu.solve_in_place(x);
  return x;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  LuComplex lu(a);
  ComplexMatrix x = b;
  lu.solve_in_place(x);
  return x;
}

Matrix inverse(const Matrix& a) { return LuReal(a).inverse(); }

// ---------------------------------------------------------------------------
// Cholesky
// ---------------------------------------------------------------------------

bool cholesky(const Matrix& m, Matrix& lower) {
  if (m.rows() != m.cols()) throw DimensionMismatch("cholesky: not square");
  const int n = m.rows();
  lower = Matrix(n, n);
  const auto& k = kernels::active();
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(m(i, i)));
  const double floor = scale * n * 64.0 * kEps;
  for (int j = 0; j < n; ++j) {
    double d = m(j, j) - k.dot(j, lower.row_ptr(j), lower.row_ptr(j));
    if (d <= floor) return false;
    const double lj = std::sqrt(d);
    lower(j, j) = lj;
    for (int i = j + 1; i < n; ++i) {
      const double v = m(i, j) - k.dot(j, lower.row_ptr(i), lower.row_ptr(j));
      lower(i, j) = v / lj;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Symmetric eigendecomposition (tridiagonalization + implicit QL)
// ---------------------------------------------------------------------------

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form, with
// accumulation of the orthogonal transformation in z.
void tridiagonalize(Matrix& z, std::vector<double>& d, std::vector<double>& e) {
  const int n = z.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0;
    double scale = 0.0;
    if (l > 0) {
      for (int q = 0; q <= l; ++q) scale += std::abs(z(i, q));
      if (scale == 0.0) {
        e[i] = z(i, l);
      } else {
        for (int q = 0; q <= l; ++q) {
          z(i, q) /= scale;
          h += z(i, q) * z(i, q);
        }
        double f = z(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        z(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          z(j, i) = z(i, j) / h;
          g = 0.0;
          for (int q = 0; q <= j; ++q) g += z(j, q) * z(i, q);
          for (int q = j + 1; q <= l; ++q) g += z(q, j) * z(i, q);
          e[j] = g / h;
          f += e[j] * z(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = z(i, j);
          g = e[j] - hh * f;
          e[j] = g;
          for (int q = 0; q <= j; ++q) z(j, q) -= f * e[q] + g * z(i, q);
        }
      }
    } else {
      e[i] = z(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    if (d[i] != 0.0) {
      for (int j = 0; j < i; ++j) {
        double g = 0.0;
        for (int q = 0; q < i; ++q) g += z(i, q) * z(q, j);
        for (int q = 0; q < i; ++q) z(q, j) -= g * z(q, i);
      }
    }
    d[i] = z(i, i);
    z(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      z(j, i) = 0.0;
      z(i, j) = 0.0;
    }
  }
}

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Implicit QL with shifts on the tridiagonal (d, e), rotating the columns of
// z alongside.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, Matrix& z) {
  const int n = static_cast<int>(d.size());
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw NumericalBreakdown("sym_eig: QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + sign_of(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int q = 0; q < n; ++q) {
            f = z(q, i + 1);
            z(q, i + 1) = s * z(q, i) + c * f;
            z(q, i) = c * z(q, i) - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

SymEigResult sym_eig(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("sym_eig: not square");
  const int n = m.rows();
  SymEigResult res;
  if (n == 0) {
    res.vectors = Matrix(0, 0);
    return res;
  }
  Matrix z = m;
  z.symmetrize();
  std::vector<double> d;
  std::vector<double> e;
  tridiagonalize(z, d, e);
  ql_implicit(d, e, z);
  // Stable descending sort keeps eigen-solver order within ties.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] > d[b]; });
  res.values.resize(n);
  res.vectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    res.values[k] = d[idx[k]];
    for (int i = 0; i < n; ++i) res.vectors(i, k) = z(i, idx[k]);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Balancing + Hessenberg + complex QR (Schur)
// ---------------------------------------------------------------------------

// Osborne norm balancing with power-of-two scales: A <- D^{-1} A D.
std::vector<double> osborne_balance(Matrix& a) {
  const int n = a.rows();
  std::vector<double> scale(n, 1.0);
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  bool done = false;
  int guard = 0;
  while (!done && guard++ < 50) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        const double ginv = 1.0 / f;
        scale[i] *= f;
        for (int j = 0; j < n; ++j) a(i, j) *= ginv;
        for (int j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
  return scale;
}

// Householder reduction to upper Hessenberg with optional accumulation of Q
// (A = Q H Q^T).
void hessenberg(Matrix& a, Matrix* q) {
  const int n = a.rows();
  if (q != nullptr) *q = Matrix::identity(n);
  const auto& k = kernels::active();
  std::vector<double> v(n);
  std::vector<double> w(n);
  for (int col = 0; col + 2 < n; ++col) {
    const int len = n - col - 1;
    double norm2 = 0.0;
    for (int i = 0; i < len; ++i) {
      v[i] = a(col + 1 + i, col);
      norm2 += v[i] * v[i];
    }
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    const double alpha = v[0] >= 0.0 ? -norm : norm;
    v[0] -= alpha;
    double vv = 0.0;
    for (int i = 0; i < len; ++i) vv += v[i] * v[i];
    if (vv == 0.0) continue;
    const double beta = 2.0 / vv;
    // Left update: rows col+1..n-1, columns col..n-1
    const int ncols = n - col;
    std::fill(w.begin(), w.begin() + ncols, 0.0);
    for (int i = 0; i < len; ++i) {
      k.axpy(ncols, v[i], a.row_ptr(col + 1 + i) + col, w.data());
    }
    for (int i = 0; i < len; ++i) {
      k.axpy(ncols, -beta * v[i], w.data(), a.row_ptr(col + 1 + i) + col);
    }
    // Right update: all rows, columns col+1..n-1
    for (int i = 0; i < n; ++i) {
      const double u = k.dot(len, a.row_ptr(i) + col + 1, v.data());
      k.axpy(len, -beta * u, v.data(), a.row_ptr(i) + col + 1);
    }
    if (q != nullptr) {
      for (int i = 0; i < n; ++i) {
        const double u = k.dot(len, q->row_ptr(i) + col + 1, v.data());
        k.axpy(len, -beta * u, v.data(), q->row_ptr(i) + col + 1);
      }
    }
    // Entries below the subdiagonal are exactly zero now.
    a(col + 1, col) = alpha;
    for (int i = col + 2; i < n; ++i) a(i, col) = 0.0;
  }
}

namespace {

// Unitary 2x2 [[c, s], [-conj(s), c]] with c real mapping [f; g] to [r; 0].
void zlartg(cplx f, cplx g, double& c, cplx& s, cplx& r) {
  if (g == cplx{0.0, 0.0}) {
    c = 1.0;
    s = cplx{0.0, 0.0};
    r = f;
    return;
  }
  if (f == cplx{0.0, 0.0}) {
    c = 0.0;
    const double ag = std::abs(g);
    s = std::conj(g) / ag;
    r = ag;
    return;
  }
  const double af = std::abs(f);
  const double d = std::hypot(af, std::abs(g));
  c = af / d;
  const cplx fs = f / af;
  s = fs * std::conj(g) / d;
  r = fs * d;
}

struct SchurWork {
  ComplexMatrix h;
  ComplexMatrix ut;  // U^T, rows are columns of U
  bool vectors = false;
};

cplx wilkinson_shift(const ComplexMatrix& h, int m) {
  const cplx a = h(m - 1, m - 1);
  const cplx b = h(m - 1, m);
  const cplx c = h(m, m - 1);
  const cplx d = h(m, m);
  const cplx tr2 = 0.5 * (a + d);
  const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const cplx l1 = tr2 + disc;
  const cplx l2 = tr2 - disc;
  return std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
}

// Explicit single-shift QR sweep on the active block [lo..hi].
void qr_sweep(SchurWork& wk, int lo, int hi, cplx mu) {
  ComplexMatrix& h = wk.h;
  const int n = h.rows();
  const auto& k = kernels::active();
  for (int i = lo; i <= hi; ++i) h(i, i) -= mu;
  std::vector<double> cs(hi - lo);
  std::vector<cplx> ss(hi - lo);
  for (int p = lo; p < hi; ++p) {
    double c;
    cplx s;
    cplx r;
    zlartg(h(p, p), h(p + 1, p), c, s, r);
    cs[p - lo] = c;
    ss[p - lo] = s;
    const int colend = wk.vectors ? n - 1 : hi;
    const int len = colend - p + 1;
    k.zrot(len, h.row_ptr(p) + p, h.row_ptr(p + 1) + p, c, s);
    h(p, p) = r;
    h(p + 1, p) = cplx{0.0, 0.0};
  }
  for (int p = lo; p < hi; ++p) {
    const double c = cs[p - lo];
    const cplx s = ss[p - lo];
    const cplx sc = std::conj(s);
    const int rowstart = wk.vectors ? 0 : lo;
    const int rowend = std::min(p + 1, hi);
    for (int i = rowstart; i <= rowend; ++i) {
      const cplx hp = h(i, p);
      const cplx hp1 = h(i, p + 1);
      h(i, p) = c * hp + sc * hp1;
      h(i, p + 1) = c * hp1 - s * hp;
    }
    if (wk.vectors) {
      k.zrot(n, wk.ut.row_ptr(p), wk.ut.row_ptr(p + 1), c, sc);
    }
  }
  for (int i = lo; i <= hi; ++i) h(i, i) += mu;
}

void schur_qr(SchurWork& wk) {
  ComplexMatrix& h = wk.h;
  const int n = h.rows();
  double hnorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - 1); j < n; ++j) hnorm += abs1(h(i, j));
  if (hnorm == 0.0) return;
  auto negligible = [&](int i) {
    double tol = kEps * (abs1(h(i - 1, i - 1)) + abs1(h(i, i)));
    if (tol == 0.0) tol = kEps * hnorm;
    return abs1(h(i, i - 1)) <= tol;
  };
  int hi = n - 1;
  int iters_here = 0;
  long total = 0;
  const long budget = 60L * n + 200;
  while (hi > 0) {
    if (++total > budget) {
      throw NumericalBreakdown("complex_schur: QR iteration budget exhausted");
    }
    if (negligible(hi)) {
      h(hi, hi - 1) = cplx{0.0, 0.0};
      --hi;
      iters_here = 0;
      continue;
    }
    int lo = hi;
    while (lo > 0 && !negligible(lo)) --lo;
    if (lo > 0) h(lo, lo - 1) = cplx{0.0, 0.0};
    ++iters_here;
    cplx mu;
    if (iters_here % 12 == 0) {
      mu = h(hi, hi) + 0.75 * abs1(h(hi, hi - 1));
    } else {
      mu = wilkinson_shift(h, hi);
    }
    qr_sweep(wk, lo, hi, mu);
  }
}

}  // namespace

ComplexSchurResult complex_schur(const Matrix& a, bool want_vectors) {
  if (a.rows() != a.cols()) throw DimensionMismatch("complex_schur: not square");
  const int n = a.rows();
  ComplexSchurResult res;
  res.scale.assign(n, 1.0);
  if (n == 0) {
    res.t = ComplexMatrix(0, 0);
    res.u = ComplexMatrix(0, 0);
    return res;
  }
  Matrix work = a;
  res.scale = osborne_balance(work);
  Matrix q;
  hessenberg(work, want_vectors ? &q : nullptr);
  SchurWork wk;
  wk.vectors = want_vectors;
  wk.h = ComplexMatrix(work);
  if (want_vectors) {
    wk.ut = ComplexMatrix(q.transpose());
  }
  schur_qr(wk);
  res.t = std::move(wk.h);
  if (want_vectors) res.u = wk.ut.transpose();
  res.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) res.eigenvalues[i] = res.t(i, i);
  return res;
}

std::vector<cplx> eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("eigenvalues: not square");
  const int n = a.rows();
  if (n == 0) return {};
  Matrix work = a;
  osborne_balance(work);
  hessenberg(work, nullptr);
  SchurWork wk;
  wk.vectors = false;
  wk.h = ComplexMatrix(work);
  schur_qr(wk);
  std::vector<cplx> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = wk.h(i, i);
  return ev;
}

// ---------------------------------------------------------------------------
// One-sided Jacobi SVD
// ---------------------------------------------------------------------------

SvdResult jacobi_svd(const Matrix& a) {
  const int m = a.rows();
  const int n = a.cols();
  SvdResult res;
  if (m == 0 || n == 0) {
    res.u = Matrix(m, n);
    res.v = Matrix::identity(n);
    res.sigma.assign(n, 0.0);
    return res;
  }
  // Work on A^T so the columns being orthogonalized are contiguous rows.
  Matrix at = a.transpose();
  Matrix vt = Matrix::identity(n);
  const auto& k = kernels::active();
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double app = k.dot(m, at.row_ptr(p), at.row_ptr(p));
        const double aqq = k.dot(m, at.row_ptr(q), at.row_ptr(q));
        const double apq = k.dot(m, at.row_ptr(p), at.row_ptr(q));
        if (std::abs(apq) <= 1e2 * kEps * std::sqrt(app * aqq) || apq == 0.0) {
          continue;
        }
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = sign_of(1.0, tau) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        k.rot(m, at.row_ptr(p), at.row_ptr(q), c, -s);
        k.rot(n, vt.row_ptr(p), vt.row_ptr(q), c, -s);
      }
    }
    if (!rotated) break;
  }
  res.sigma.assign(n, 0.0);
  Matrix ut(n, m);
  for (int p = 0; p < n; ++p) {
    const double nrm = std::sqrt(k.dot(m, at.row_ptr(p), at.row_ptr(p)));
    res.sigma[p] = nrm;
    if (nrm > 0.0) {
      for (int j = 0; j < m; ++j) ut(p, j) = at(p, j) / nrm;
    }
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int x, int y) { return res.sigma[x] > res.sigma[y]; });
  SvdResult out;
  out.sigma.resize(n);
  out.u = Matrix(m, n);
  out.v = Matrix(n, n);
  for (int c2 = 0; c2 < n; ++c2) {
    out.sigma[c2] = res.sigma[idx[c2]];
    for (int i = 0; i < m; ++i) out.u(i, c2) = ut(idx[c2], i);
    for (int i = 0; i < n; ++i) out.v(i, c2) = vt(idx[c2], i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// sigma_max of complex matrices
// ---------------------------------------------------------------------------

namespace {

// Hermitian H (k x k) embedded as the real symmetric [[Re, -Im], [Im, Re]].
Matrix embed_hermitian(const ComplexMatrix& h) {
  const int n = h.rows();
  Matrix e(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx v = h(i, j);
      e(i, j) = v.real();
      e(i, j + n) = -v.imag();
      e(i + n, j) = v.imag();
      e(i + n, j + n) = v.real();
    }
  }
  return e;
}

}  // namespace

double sigma_max(const ComplexMatrix& m) {
  const int r = m.rows();
  const int c = m.cols();
  if (r == 0 || c == 0) return 0.0;
  if (r == 1 || c == 1) return m.frobenius_norm();
  if (r == 2 && c == 2) {
    const double f = m.frobenius_norm();
    const double f2 = f * f;
    const double d = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
    const double disc = std::max(0.0, f2 * f2 - 4.0 * d * d);
    return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
  }
  const bool tall = r >= c;
  const ComplexMatrix g = tall ? (m.adjoint() * m) : (m * m.adjoint());
  SymEigResult eig = sym_eig(embed_hermitian(g));
  return std::sqrt(std::max(0.0, eig.values.front()));
}

SingularTriple max_singular_triple(const ComplexMatrix& m) {
  const int r = m.rows();
  const int c = m.cols();
  SingularTriple out;
  if (r == 0 || c == 0) return out;
  const ComplexMatrix g = m.adjoint() * m;  // c x c Hermitian
  SymEigResult eig = sym_eig(embed_hermitian(g));
  out.sigma = std::sqrt(std::max(0.0, eig.values.front()));
  out.v.assign(c, cplx{0.0, 0.0});
  for (int i = 0; i < c; ++i) {
    out.v[i] = cplx{eig.vectors(i, 0), eig.vectors(i + c, 0)};
  }
  double vn = 0.0;
  for (const cplx& x : out.v) vn += std::norm(x);
  vn = std::sqrt(vn);
  if (vn > 0.0) {
    for (cplx& x : out.v) x /= vn;
  }
  out.u.assign(r, cplx{0.0, 0.0});
  if (out.sigma > 0.0) {
    for (int i = 0; i < r; ++i) {
      cplx acc{0.0, 0.0};
      for (int j = 0; j < c; ++j) acc += m(i, j) * out.v[j];
      out.u[i] = acc / out.sigma;
    }
  }
  return out;
}

}  // namespace smr
