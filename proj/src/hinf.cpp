#include "smr/hinf.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "smr/errors.hpp"
#include "smr/kernels.hpp"
#include "smr/lyapunov.hpp"

namespace smr {

namespace {

constexpr double kGolden = 0.6180339887498949;

}  // namespace

ComplexMatrix freq_response(const StateSpaceModel& sys, double omega, double cond_limit) {
  sys.validate();
  if (!std::isfinite(omega)) throw InvalidArgument("freq_response: omega not finite");
  const int n = sys.order();
  if (n == 0) return ComplexMatrix(sys.D);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = -sys.A(i, j);
    m(i, i) += cplx{0.0, omega};
  }
  LuComplex lu(m);
  if (lu.singular() || lu.pivot_growth() > 1e12) {
    if (lu.singular() || lu.cond1(m) > cond_limit) {
      throw SingularResolvent("freq_response: resolvent numerically singular");
    }
  }
  ComplexMatrix x(sys.B);
  lu.solve_in_place(x);
  return ComplexMatrix(sys.C) * x + ComplexMatrix(sys.D);
}

double sigma_at(const StateSpaceModel& sys, double omega) {
  return sigma_max(freq_response(sys, omega));
}

SweepEvaluator::SweepEvaluator(const StateSpaceModel& sys) {
  sys.validate();
  n_ = sys.order();
  m_ = sys.inputs();
  p_ = sys.outputs();
  d_ = sys.D;
  poles_ = eigenvalues(sys.A);
  if (n_ == 0) return;
  h_ = sys.A;
  std::vector<double> scale = osborne_balance(h_);
  Matrix q;
  hessenberg(h_, &q);
  // G = (C S Q) (j w I - H)^{-1} (Q^T S^{-1} B) + D with S = diag(scale).
  Matrix bs = sys.B;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < m_; ++j) bs(i, j) /= scale[i];
  Matrix cs = sys.C;
  for (int i = 0; i < p_; ++i)
    for (int j = 0; j < n_; ++j) cs(i, j) *= scale[j];
  bt_ = ComplexMatrix(q.transpose() * bs);
  cq_ = ComplexMatrix(cs * q);
}

ComplexMatrix SweepEvaluator::response(double omega) const {
  if (n_ == 0) return ComplexMatrix(d_);
  // Solve (j w I - H) X = Bt by Givens QR of the Hessenberg matrix.
  ComplexMatrix m(n_, n_);
  for (int i = 0; i < n_; ++i) {
    const int j0 = std::max(0, i - 1);
    for (int j = j0; j < n_; ++j) m(i, j) = -h_(i, j);
    m(i, i) += cplx{0.0, omega};
  }
  ComplexMatrix x = bt_;
  const auto& k = kernels::active();
  for (int col = 0; col + 1 < n_; ++col) {
    const cplx f = m(col, col);
    const cplx g = m(col + 1, col);
    if (g == cplx{0.0, 0.0}) continue;
    const double af = std::abs(f);
    double c;
    cplx s;
    cplx r;
    if (f == cplx{0.0, 0.0}) {
      c = 0.0;
      s = std::conj(g) / std::abs(g);
      r = std::abs(g);
    } else {
      const double dnorm = std::hypot(af, std::abs(g));
      c = af / dnorm;
      const cplx fs = f / af;
      s = fs * std::conj(g) / dnorm;
      r = fs * dnorm;
    }
    const int len = n_ - col;
    k.zrot(len, m.row_ptr(col) + col, m.row_ptr(col + 1) + col, c, s);
    m(col, col) = r;
    m(col + 1, col) = cplx{0.0, 0.0};
    k.zrot(m_, x.row_ptr(col), x.row_ptr(col + 1), c, s);
  }
  for (int row = n_ - 1; row >= 0; --row) {
    for (int j = row + 1; j < n_; ++j) {
      if (m(row, j) != cplx{0.0, 0.0}) {
        k.zaxpy(m_, -m(row, j), x.row_ptr(j), x.row_ptr(row));
      }
    }
    const cplx diag = m(row, row);
    if (diag == cplx{0.0, 0.0}) {
      throw SingularResolvent("SweepEvaluator: resolvent singular");
    }
    k.zscal(m_, cplx{1.0, 0.0} / diag, x.row_ptr(row));
  }
  return cq_ * x + ComplexMatrix(d_);
}

double SweepEvaluator::sigma(double omega) const { return sigma_max(response(omega)); }

namespace {

// Maximize f over [a, b]; golden section, returns (x, f(x)).
Peak golden_max(double a, double b, const std::function<double(double)>& f) {
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 120 && (b - a) > 1e-12 * std::max(1.0, std::abs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  return Peak{xm, f(xm)};
}

Peak refine_candidate(const SweepEvaluator& ev, double lo, double hi) {
  if (lo <= 0.0) {
    return golden_max(0.0, hi, [&](double w) { return ev.sigma(w); });
  }
  Peak p = golden_max(std::log(lo), std::log(hi),
                      [&](double t) { return ev.sigma(std::exp(t)); });
  return Peak{std::exp(p.omega), p.sigma};
}

void pole_range(const std::vector<cplx>& poles, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = 0.0;
  for (const cplx& p : poles) {
    const double mag = std::abs(p);
    if (mag > 0.0) {
      lo = std::min(lo, mag);
      hi = std::max(hi, mag);
    }
  }
  if (!std::isfinite(lo) || hi == 0.0) {
    lo = 1e-2;
    hi = 1e2;
  }
  lo *= 1e-2;
  hi *= 1e2;
}

}  // namespace

std::vector<Peak> local_peaks(const SweepEvaluator& ev, int grid_count, int max_peaks) {
  double lo;
  double hi;
  pole_range(ev.poles(), lo, hi);
  std::vector<double> omegas;
  omegas.reserve(grid_count);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < grid_count; ++i) {
    omegas.push_back(std::exp(llo + (lhi - llo) * i / (grid_count - 1)));
  }
  std::vector<double> sig(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) sig[i] = ev.sigma(omegas[i]);

  const double ratio = std::exp((lhi - llo) / (grid_count - 1));
  std::vector<Peak> peaks;
  // DC candidate.
  peaks.push_back(golden_max(0.0, omegas.front(), [&](double w) { return ev.sigma(w); }));
  // Grid local maxima.
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const bool left_ok = (i == 0) || sig[i] >= sig[i - 1];
    const bool right_ok = (i + 1 == sig.size()) || sig[i] >= sig[i + 1];
    if (left_ok && right_ok) {
      const double wlo = (i == 0) ? omegas[0] / ratio : omegas[i - 1];
      const double whi = (i + 1 == sig.size()) ? omegas.back() * ratio : omegas[i + 1];
      peaks.push_back(refine_candidate(ev, wlo, whi));
    }
  }
  // Resonance candidates at |Im(pole)|.
  for (const cplx& p : ev.poles()) {
    const double w = std::abs(p.imag());
    if (w > 0.0) peaks.push_back(refine_candidate(ev, w / (ratio * ratio), w * ratio * ratio));
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.sigma > b.sigma; });
  // Deduplicate nearby frequencies.
  std::vector<Peak> out;
  for (const Peak& p : peaks) {
    bool dup = false;
    for (const Peak& q : out) {
      const double s = std::max({1e-12, std::abs(p.omega), std::abs(q.omega)});
      if (std::abs(p.omega - q.omega) <= 1e-4 * s) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(p);
    if (static_cast<int>(out.size()) >= max_peaks) break;
  }
  return out;
}

namespace {

// sigma_max(D) + 2 * sum of Hankel singular values; a certified upper bound
// used to bracket the bisection.
double hankel_upper_bound(const StateSpaceModel& sys) {
  const double d_gain = sigma_max(ComplexMatrix(sys.D));
  if (sys.order() == 0) return d_gain;
  const Matrix p = solve_lyapunov(sys.A, sys.B * sys.B.transpose());
  const Matrix q = solve_lyapunov(sys.A.transpose(), sys.C.transpose() * sys.C);
  // sigma_k = sqrt(eig(P Q)) through the symmetric form L^T Q L, P = L L^T.
  SymEigResult pe = sym_eig(p);
  const int n = sys.order();
  Matrix l(n, n);
  for (int j = 0; j < n; ++j) {
    const double lam = std::max(0.0, pe.values[j]);
    const double s = std::sqrt(lam);
    for (int i = 0; i < n; ++i) l(i, j) = pe.vectors(i, j) * s;
  }
  SymEigResult se = sym_eig(l.transpose() * q * l);
  double sum = 0.0;
  for (double lam : se.values) sum += std::sqrt(std::max(0.0, lam));
  return d_gain + 2.0 * sum;
}

bool hamiltonian_has_imaginary_eig(const StateSpaceModel& sys, double gamma,
                                   std::vector<double>* axis_omegas) {
  const int n = sys.order();
  const int m = sys.inputs();
  const int p = sys.outputs();
  Matrix r = -1.0 * (sys.D.transpose() * sys.D);
  for (int i = 0; i < m; ++i) r(i, i) += gamma * gamma;
  const Matrix rinv = inverse(r);
  const Matrix brd = sys.B * rinv;                         // n x m
  const Matrix h11 = sys.A + brd * (sys.D.transpose() * sys.C);
  const Matrix h12 = brd * sys.B.transpose();
  Matrix ip(p, p);
  for (int i = 0; i < p; ++i) ip(i, i) = 1.0;
  const Matrix h21 = -1.0 * (sys.C.transpose() * ((ip + sys.D * rinv * sys.D.transpose()) * sys.C));
  Matrix ham(2 * n, 2 * n);
  ham.set_block(0, 0, h11);
  ham.set_block(0, n, h12);
  ham.set_block(n, 0, h21);
  ham.set_block(n, n, -1.0 * h11.transpose());
  bool found = false;
  for (const cplx& ev : eigenvalues(ham)) {
    if (std::abs(ev.real()) <= 1e-7 * (1.0 + std::abs(ev.imag()))) {
      found = true;
      if (axis_omegas != nullptr) axis_omegas->push_back(std::abs(ev.imag()));
    }
  }
  return found;
}

}  // namespace

HinfResult hinf_norm(const StateSpaceModel& sys, double rel_tol) {
  sys.validate();
  if (!(rel_tol > 0.0) || rel_tol > 0.1) {
    throw InvalidArgument("hinf_norm: rel_tol must lie in (0, 0.1]");
  }
  HinfResult res;
  if (sys.order() == 0) {
    res.value = sigma_max(ComplexMatrix(sys.D));
    res.peak_omega = 0.0;
    return res;
  }
  const StabilityInfo stab = is_hurwitz(sys.A);
  if (!stab.hurwitz) {
    throw NotStable("hinf_norm: A is not Hurwitz (abscissa " +
                    std::to_string(stab.abscissa) + ")");
  }

  SweepEvaluator ev(sys);
  std::vector<Peak> peaks = local_peaks(ev, 200, 6);
  double lo = 0.0;
  double lo_omega = 0.0;
  for (const Peak& p : peaks) {
    if (p.sigma > lo) {
      lo = p.sigma;
      lo_omega = p.omega;
    }
  }
  double hi = hankel_upper_bound(sys);
  hi = std::max(hi, lo * (1.0 + 4.0 * rel_tol)) * (1.0 + 1e-12) + 1e-300;
  const double sig_d = sigma_max(ComplexMatrix(sys.D));
  // Below this absolute gap further bisection only probes roundoff noise.
  const double floor_abs = 1e-13 * std::max(1.0, hi);

  double grid_ratio = 1.1;
  {
    double glo;
    double ghi;
    pole_range(ev.poles(), glo, ghi);
    grid_ratio = std::exp(std::log(ghi / glo) / 199.0);
  }

  while (hi - lo > rel_tol * lo + floor_abs && res.bisection_steps < 200) {
    const double gamma = 0.5 * (lo + hi);
    if (gamma <= sig_d * (1.0 + tol::kHinfGammaDGap)) {
      // Ill-conditioned Hamiltonian regime; keep the measured grid value.
      res.grid_fallback = true;
      break;
    }
    ++res.bisection_steps;
    std::vector<double> crossings;
    const bool axis = hamiltonian_has_imaginary_eig(sys, gamma, &crossings);
    if (!axis) {
      hi = gamma;
      continue;
    }
    // Verify the crossing by measurement: evaluate sigma at the crossing
    // frequencies and between consecutive ones. A level-gamma crossing that
    // cannot be reproduced by measurement is treated as spurious.
    std::sort(crossings.begin(), crossings.end());
    std::vector<double> cands = crossings;
    for (std::size_t i = 0; i + 1 < crossings.size(); ++i) {
      cands.push_back(std::sqrt(std::max(crossings[i], 1e-300) * crossings[i + 1]));
    }
    double measured = 0.0;
    double measured_omega = 0.0;
    for (double w : cands) {
      const double s = ev.sigma(w);
      if (s > measured) {
        measured = s;
        measured_omega = w;
      }
    }
    if (measured > lo) {
      lo = measured;
      lo_omega = measured_omega;
    }
    if (measured < gamma * (1.0 - 1e-3)) {
      hi = gamma;  // spurious or tangent crossing
    }
  }

  // Final local polish around the best measured frequency.
  Peak best{lo_omega, lo};
  if (lo > 0.0) {
    const double wl = lo_omega > 0.0 ? lo_omega / grid_ratio : 0.0;
    const double wh = lo_omega > 0.0 ? lo_omega * grid_ratio : peaks.front().omega + 1e-6;
    Peak p = refine_candidate(ev, wl, std::max(wh, 1e-300));
    if (p.sigma > best.sigma) best = p;
  }
  res.value = best.sigma;
  res.peak_omega = best.omega;
  return res;
}

}  // namespace smr
