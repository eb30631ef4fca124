#include "oracles.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "smr/errors.hpp"

namespace smr::test {

Matrix randn_matrix(Rng& rng, int rows, int cols, double scale) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * dist(rng);
  return m;
}

namespace {

// Random orthogonal similarity from two Householder reflectors.
Matrix random_orthogonal(Rng& rng, int n) {
  Matrix q = Matrix::identity(n);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int rep = 0; rep < 2; ++rep) {
    std::vector<double> v(n);
    double nv = 0.0;
    for (int i = 0; i < n; ++i) {
      v[i] = dist(rng);
      nv += v[i] * v[i];
    }
    if (nv == 0.0) continue;
    const double beta = 2.0 / nv;
    // q <- q (I - beta v v^T)
    for (int i = 0; i < n; ++i) {
      double dotv = 0.0;
      for (int j = 0; j < n; ++j) dotv += q(i, j) * v[j];
      for (int j = 0; j < n; ++j) q(i, j) -= beta * dotv * v[j];
    }
  }
  return q;
}

}  // namespace

StateSpaceModel random_stable_system(Rng& rng, int n, int m, int p, double margin,
                                     bool with_d) {
  // Assemble A from 2x2 damped-rotation blocks with known eigenvalues
  // -zeta*w0 +- i*w0, then hide the structure with an orthogonal similarity.
  std::uniform_real_distribution<double> logw(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> zeta_dist(0.08, 0.6);
  Matrix a(n, n);
  int i = 0;
  while (i + 1 < n) {
    const double w0 = std::exp(logw(rng));
    const double z = zeta_dist(rng);
    a(i, i) = -z * w0 - margin;
    a(i, i + 1) = w0;
    a(i + 1, i) = -w0;
    a(i + 1, i + 1) = -z * w0 - margin;
    i += 2;
  }
  if (i < n) a(i, i) = -std::exp(logw(rng)) - margin;
  const Matrix q = random_orthogonal(rng, n);
  a = q * a * q.transpose();
  StateSpaceModel sys;
  sys.A = a;
  sys.B = randn_matrix(rng, n, m);
  sys.C = randn_matrix(rng, p, n);
  sys.D = with_d ? randn_matrix(rng, p, m, 0.3) : Matrix(p, m);
  sys.label = "random";
  return sys;
}

Matrix expm(const Matrix& a) {
  const int n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("expm: not square");
  double norm = a.norm_inf();
  int s = 0;
  while (norm > 0.125 && s < 60) {
    norm *= 0.5;
    ++s;
  }
  Matrix b = a;
  b *= std::ldexp(1.0, -s);
  Matrix result = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 20; ++k) {
    term = term * b;
    term *= 1.0 / k;
    result += term;
  }
  for (int k = 0; k < s; ++k) result = result * result;
  return result;
}

Matrix gramian_by_quadrature(const Matrix& a, const Matrix& w, double horizon,
                             int steps) {
  const int n = a.rows();
  // Extend the horizon by propagator doubling until e^{AT} has decayed to
  // noise level.
  double t_end = 1.0;
  {
    Matrix prop = expm(a);
    while ((prop.frobenius_norm() > 1e-15 || t_end < horizon / 16.0) && t_end < 1e6) {
      prop = prop * prop;
      t_end *= 2.0;
    }
  }
  const double h = t_end / steps;
  const Matrix eh = expm(h * a);
  Matrix phi = Matrix::identity(n);
  Matrix acc(n, n);
  // Composite Simpson: f0 + 4 f1 + 2 f2 + ... + 4 f_{N-1} + fN.
  for (int k = 0; k <= steps; ++k) {
    const Matrix f = phi * w * phi.transpose();
    double weight = (k == 0 || k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    Matrix fw = f;
    fw *= weight;
    acc += fw;
    if (k < steps) phi = phi * eh;
  }
  acc *= h / 3.0;
  return acc;
}

ComplexMatrix response_by_charpoly(const StateSpaceModel& sys, double omega) {
  const int n = sys.order();
  const int m = sys.inputs();
  const int p = sys.outputs();
  // Leverrier-Faddeev: N_0 = I, M = A N_{k-1}, c_k = -tr(M)/k, N_k = M + c_k I.
  std::vector<Matrix> cnb;  // C N_k B for k = 0..n-1
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0;
  Matrix nk = Matrix::identity(n);
  cnb.push_back(sys.C * nk * sys.B);
  for (int k = 1; k <= n; ++k) {
    Matrix mk = sys.A * nk;
    c[k] = -mk.trace() / k;
    nk = mk;
    for (int i = 0; i < n; ++i) nk(i, i) += c[k];
    if (k < n) cnb.push_back(sys.C * nk * sys.B);
  }
  const cplx s{0.0, omega};
  // den(s) = s^n + c1 s^{n-1} + ... + cn, num coefficient k multiplies s^{n-1-k}.
  cplx den = c[0];
  for (int k = 1; k <= n; ++k) den = den * s + c[k];
  ComplexMatrix num(p, m);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < m; ++j)
        num(i, j) = num(i, j) * s + cnb[k](i, j);
  }
  ComplexMatrix g(p, m);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = num(i, j) / den + sys.D(i, j);
  return g;
}

namespace {

// Self-contained complex Gauss solve with partial pivoting; x overwritten.
void gauss_solve(std::vector<cplx>& m, std::vector<cplx>& x, int n, int nrhs) {
  auto at = [&](int i, int j) -> cplx& { return m[static_cast<std::size_t>(i) * n + j]; };
  auto xat = [&](int i, int j) -> cplx& { return x[static_cast<std::size_t>(i) * nrhs + j]; };
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(at(col, col));
    for (int i = col + 1; i < n; ++i) {
      if (std::abs(at(i, col)) > best) {
        best = std::abs(at(i, col));
        piv = i;
      }
    }
    if (best == 0.0) throw std::runtime_error("gauss_solve: singular");
    if (piv != col) {
      for (int j = col; j < n; ++j) std::swap(at(col, j), at(piv, j));
      for (int j = 0; j < nrhs; ++j) std::swap(xat(col, j), xat(piv, j));
    }
    for (int i = col + 1; i < n; ++i) {
      const cplx f = at(i, col) / at(col, col);
      if (f == cplx{0.0, 0.0}) continue;
      for (int j = col + 1; j < n; ++j) at(i, j) -= f * at(col, j);
      for (int j = 0; j < nrhs; ++j) xat(i, j) -= f * xat(col, j);
    }
  }
  for (int row = n - 1; row >= 0; --row) {
    for (int j = row + 1; j < n; ++j) {
      const cplx f = at(row, j);
      if (f == cplx{0.0, 0.0}) continue;
      for (int r = 0; r < nrhs; ++r) xat(row, r) -= f * xat(j, r);
    }
    for (int r = 0; r < nrhs; ++r) xat(row, r) /= at(row, row);
  }
}

// Exact lambda_max of a 1x1 or 2x2 Hermitian matrix.
double hermitian_lmax_small(const std::vector<cplx>& h, int k) {
  if (k == 1) return h[0].real();
  const double a = h[0].real();
  const double c = h[3].real();
  const double babs2 = std::norm(h[1]);
  const double half = 0.5 * (a + c);
  return half + std::sqrt(0.25 * (a - c) * (a - c) + babs2);
}

// sigma_max of a p x m complex matrix with min(p, m) <= 2, via the Gram
// matrix on the thin side.
double sigma_max_small(const std::vector<cplx>& g, int p, int m) {
  const bool gram_cols = m <= p;
  const int k = gram_cols ? m : p;
  if (k > 2) throw std::runtime_error("sigma_max_small: min dimension must be <= 2");
  std::vector<cplx> h(static_cast<std::size_t>(k) * k, cplx{0.0, 0.0});
  auto gat = [&](int i, int j) { return g[static_cast<std::size_t>(i) * m + j]; };
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      cplx acc{0.0, 0.0};
      if (gram_cols) {
        for (int l = 0; l < p; ++l) acc += std::conj(gat(l, i)) * gat(l, j);
      } else {
        for (int l = 0; l < m; ++l) acc += gat(i, l) * std::conj(gat(j, l));
      }
      h[static_cast<std::size_t>(i) * k + j] = acc;
    }
  }
  return std::sqrt(std::max(0.0, hermitian_lmax_small(h, k)));
}

double sigma_point(const StateSpaceModel& sys, double omega,
                   std::vector<cplx>& mbuf, std::vector<cplx>& xbuf,
                   std::vector<cplx>& gbuf) {
  const int n = sys.order();
  const int m = sys.inputs();
  const int p = sys.outputs();
  if (n > 0) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        mbuf[static_cast<std::size_t>(i) * n + j] = cplx{-sys.A(i, j), i == j ? omega : 0.0};
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        xbuf[static_cast<std::size_t>(i) * m + j] = sys.B(i, j);
    gauss_solve(mbuf, xbuf, n, m);
  }
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < m; ++j) {
      cplx acc{sys.D(i, j), 0.0};
      for (int l = 0; l < n; ++l) {
        acc += sys.C(i, l) * xbuf[static_cast<std::size_t>(l) * m + j];
      }
      gbuf[static_cast<std::size_t>(i) * m + j] = acc;
    }
  }
  return sigma_max_small(gbuf, p, m);
}

}  // namespace

double sigma_at_oracle(const StateSpaceModel& sys, double omega) {
  const int n = sys.order();
  std::vector<cplx> mbuf(static_cast<std::size_t>(n) * n);
  std::vector<cplx> xbuf(static_cast<std::size_t>(std::max(1, n)) * sys.inputs());
  std::vector<cplx> gbuf(static_cast<std::size_t>(sys.outputs()) * sys.inputs());
  return sigma_point(sys, omega, mbuf, xbuf, gbuf);
}

ComplexMatrix response_oracle(const StateSpaceModel& sys, double omega) {
  const int n = sys.order();
  const int m = sys.inputs();
  const int p = sys.outputs();
  std::vector<cplx> mbuf(static_cast<std::size_t>(n) * n);
  std::vector<cplx> xbuf(static_cast<std::size_t>(std::max(1, n)) * m);
  if (n > 0) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        mbuf[static_cast<std::size_t>(i) * n + j] = cplx{-sys.A(i, j), i == j ? omega : 0.0};
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) xbuf[static_cast<std::size_t>(i) * m + j] = sys.B(i, j);
    gauss_solve(mbuf, xbuf, n, m);
  }
  ComplexMatrix g(p, m);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < m; ++j) {
      cplx acc{sys.D(i, j), 0.0};
      for (int l = 0; l < n; ++l) acc += sys.C(i, l) * xbuf[static_cast<std::size_t>(l) * m + j];
      g(i, j) = acc;
    }
  }
  return g;
}

RandomNetwork random_interconnection(Rng& rng, int q, int max_order, double coupling,
                                     bool dissipative) {
  std::uniform_int_distribution<int> order_dist(1, max_order);
  std::uniform_int_distribution<int> port_dist(1, 2);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<StateSpaceModel> subs;
    for (int i = 0; i < q; ++i) {
      const int n = order_dist(rng);
      const int m = port_dist(rng);
      const int p = port_dist(rng);
      StateSpaceModel s;
      if (dissipative) {
        // A = -(G G^T + mu I) + skew: symmetric part strictly negative.
        Matrix g = randn_matrix(rng, n, n, 0.6);
        Matrix sym = g * g.transpose();
        for (int d = 0; d < n; ++d) sym(d, d) += 0.4;
        Matrix skew = randn_matrix(rng, n, n);
        skew = 0.5 * (skew - skew.transpose());
        s.A = skew - sym;
        s.B = randn_matrix(rng, n, m);
        s.C = randn_matrix(rng, p, n);
        s.D = Matrix(p, m);
        s.label = "S" + std::to_string(i + 1);
      } else {
        s = random_stable_system(rng, n, m, p, 0.4);
        s.label = "S" + std::to_string(i + 1);
      }
      subs.push_back(std::move(s));
    }
    RandomNetwork out;
    out.plant = aggregate(subs);
    EdgeLists e;
    e.external_inputs = 1;
    e.external_outputs = out.plant.outputs();
    e.einedges.push_back({1, 1, 1.0});
    for (int j = 1; j <= out.plant.outputs(); ++j) e.eoutedges.push_back({j, j, 1.0});
    // sparse random internal coupling
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int from = 1; from <= out.plant.outputs(); ++from) {
      for (int to = 1; to <= out.plant.inputs(); ++to) {
        if (coin(rng) < 0.5) {
          e.iedges.push_back({from, to, coupling * nd(rng)});
        }
      }
    }
    out.edges = e;
    out.net = assemble_network(e, out.plant);
    try {
      ClosedLoop cl = close_loop(out.plant, out.net);
      if (cl.stable) return out;
    } catch (const Error&) {
      // resample
    }
  }
  throw std::runtime_error("random_interconnection: could not build a stable instance");
}

ComplexMatrix lft_formula_response(const NetworkMatrix& net,
                                   const BlockDiagonalPlant& plant, double omega) {
  const int m = plant.inputs();
  const int p = plant.outputs();
  // Block-diagonal G(j omega) from per-subsystem oracle responses.
  ComplexMatrix g(p, m);
  for (int i = 0; i < plant.count(); ++i) {
    ComplexMatrix gi = response_oracle(plant.subsystems[i], omega);
    g.set_block(plant.output_offset[i], plant.input_offset[i], gi);
  }
  // (I - G D_K) X = G D_H, solved by the oracle solver.
  ComplexMatrix gdk(p, p);
  ComplexMatrix gdh(p, net.dh.cols());
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      cplx acc{0.0, 0.0};
      for (int l = 0; l < m; ++l) acc += g(i, l) * net.dk(l, j);
      gdk(i, j) = acc;
    }
    for (int j = 0; j < net.dh.cols(); ++j) {
      cplx acc{0.0, 0.0};
      for (int l = 0; l < m; ++l) acc += g(i, l) * net.dh(l, j);
      gdh(i, j) = acc;
    }
  }
  std::vector<cplx> mbuf(static_cast<std::size_t>(p) * p);
  std::vector<cplx> xbuf(static_cast<std::size_t>(p) * gdh.cols());
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      mbuf[static_cast<std::size_t>(i) * p + j] = (i == j ? cplx{1.0, 0.0} : cplx{0.0, 0.0}) - gdk(i, j);
    }
    for (int j = 0; j < gdh.cols(); ++j) {
      xbuf[static_cast<std::size_t>(i) * gdh.cols() + j] = gdh(i, j);
    }
  }
  gauss_solve(mbuf, xbuf, p, gdh.cols());
  ComplexMatrix out(net.de.rows(), net.de.cols());
  for (int i = 0; i < out.rows(); ++i) {
    for (int j = 0; j < out.cols(); ++j) {
      cplx acc{net.de(i, j), 0.0};
      for (int l = 0; l < p; ++l) {
        acc += net.df(i, l) * xbuf[static_cast<std::size_t>(l) * gdh.cols() + j];
      }
      out(i, j) = acc;
    }
  }
  return out;
}

double sigma_grid_max(const StateSpaceModel& sys, double lo, double hi, int count,
                      double* argmax_omega) {
  const int n = sys.order();
  std::vector<cplx> mbuf(static_cast<std::size_t>(n) * n);
  std::vector<cplx> xbuf(static_cast<std::size_t>(std::max(1, n)) * sys.inputs());
  std::vector<cplx> gbuf(static_cast<std::size_t>(sys.outputs()) * sys.inputs());
  double best = sigma_point(sys, 0.0, mbuf, xbuf, gbuf);
  double best_w = 0.0;
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < count; ++i) {
    const double w = std::exp(llo + (lhi - llo) * i / (count - 1));
    const double s = sigma_point(sys, w, mbuf, xbuf, gbuf);
    if (s > best) {
      best = s;
      best_w = w;
    }
  }
  if (argmax_omega != nullptr) *argmax_omega = best_w;
  return best;
}

}  // namespace smr::test
