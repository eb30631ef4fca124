#include "smr/gramians.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "smr/errors.hpp"
#include "smr/linalg.hpp"
#include "smr/lyapunov.hpp"

namespace smr {

namespace {

void check_partition(const std::vector<int>& partition, int n) {
  int sum = 0;
  for (int ni : partition) {
    if (ni < 0) throw InvalidArgument("partition: negative block size");
    sum += ni;
  }
  if (sum != n) throw DimensionMismatch("partition: block sizes must sum to the state dimension");
}

std::vector<Matrix> extract_blocks(const Matrix& full, const std::vector<int>& partition) {
  std::vector<Matrix> blocks;
  int off = 0;
  for (int ni : partition) {
    blocks.push_back(full.block(off, off, ni, ni));
    off += ni;
  }
  return blocks;
}

Matrix assemble_blocks(const std::vector<Matrix>& blocks, int n) {
  Matrix full(n, n);
  int off = 0;
  for (const Matrix& b : blocks) {
    full.set_block(off, off, b);
    off += b.rows();
  }
  return full;
}

}  // namespace

Matrix GramianPair::p_full() const {
  int n = 0;
  for (const Matrix& b : p_blocks) n += b.rows();
  return assemble_blocks(p_blocks, n);
}

Matrix GramianPair::q_full() const {
  int n = 0;
  for (const Matrix& b : q_blocks) n += b.rows();
  return assemble_blocks(q_blocks, n);
}

GramianPair structured_gramians(const ClosedLoop& cl, const std::vector<int>& partition) {
  const int n = cl.a.rows();
  check_partition(partition, n);
  if (!cl.stable) {
    throw NotStable("structured_gramians: closed loop is not stable (abscissa " +
                    std::to_string(cl.abscissa) + ")");
  }
  const Matrix wb = cl.b * cl.b.transpose();
  const Matrix wc = cl.c.transpose() * cl.c;
  const Matrix p_full = solve_lyapunov(cl.a, wb);
  const Matrix q_full = solve_lyapunov(cl.a.transpose(), wc);

  GramianPair out;
  out.kind = GramianKind::Structured;
  out.p_blocks = extract_blocks(p_full, partition);
  out.q_blocks = extract_blocks(q_full, partition);
  out.p_residual = (cl.a * p_full + p_full * cl.a.transpose() + wb).frobenius_norm();
  out.q_residual = (cl.a.transpose() * q_full + q_full * cl.a + wc).frobenius_norm();
  return out;
}

// ---------------------------------------------------------------------------
// Block-diagonal trace-minimizing LMI solver
// ---------------------------------------------------------------------------

namespace {

// One symmetric basis direction of the block-diagonal variable.
struct BasisEntry {
  int block;
  int gi;
  int gj;
};

struct LmiWork {
  Matrix a;                      // effective A (already transposed for the Q side)
  Matrix w;                      // scaled W
  std::vector<int> partition;
  std::vector<int> offsets;
  std::vector<BasisEntry> basis;
  double delta_lmi = 0.0;        // strictness of the Lyapunov slack
  double delta_blk = 0.0;        // PSD floor on the blocks
  int n = 0;

  // A E_k + E_k A^T for every basis direction (dense, n small).
  std::vector<Matrix> m_dirs;
};

Matrix blocks_from_z(const LmiWork& wk, const std::vector<double>& z) {
  Matrix p(wk.n, wk.n);
  for (std::size_t k = 0; k < wk.basis.size(); ++k) {
    const BasisEntry& e = wk.basis[k];
    p(e.gi, e.gj) = z[k];
    p(e.gj, e.gi) = z[k];
  }
  return p;
}

// S = -(A P + P A^T) - W - delta I. Positive definite inside the domain.
Matrix lyap_slack(const LmiWork& wk, const Matrix& p) {
  Matrix s = -1.0 * (wk.a * p + p * wk.a.transpose()) - wk.w;
  for (int i = 0; i < wk.n; ++i) s(i, i) -= wk.delta_lmi;
  return s;
}

bool spd_inverse(const Matrix& m, Matrix& inv, double* logdet) {
  Matrix l;
  if (!cholesky(m, l)) return false;
  // inv = L^{-T} L^{-1}
  const int n = m.rows();
  Matrix linv = Matrix::identity(n);
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) {
      double acc = linv(row, col);
      for (int j = 0; j < row; ++j) acc -= l(row, j) * linv(j, col);
      linv(row, col) = acc / l(row, row);
    }
  }
  inv = linv.transpose() * linv;
  if (logdet != nullptr) {
    double ld = 0.0;
    for (int i = 0; i < n; ++i) ld += std::log(l(i, i));
    *logdet = 2.0 * ld;
  }
  return true;
}

double trace_product(const Matrix& a, const Matrix& b) {
  double acc = 0.0;
  const int n = a.rows();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < a.cols(); ++j) acc += a(i, j) * b(j, i);
  return acc;
}

// tr(B^{-1} E_k B^{-1} E_l) for symmetric dyad bases E = e_i e_j^T (+ e_j e_i^T
// when i != j), via the dyad expansion tr(B e_a e_b^T B e_c e_d^T)
// = B(b,c) B(d,a).
double block_hessian_term(const Matrix& binv, int i1, int j1, int i2, int j2) {
  const int dk = (i1 == j1) ? 1 : 2;
  const int dl = (i2 == j2) ? 1 : 2;
  double acc = 0.0;
  for (int u = 0; u < dk; ++u) {
    const int a = (u == 0) ? i1 : j1;
    const int b = (u == 0) ? j1 : i1;
    for (int v = 0; v < dl; ++v) {
      const int c = (v == 0) ? i2 : j2;
      const int d = (v == 0) ? j2 : i2;
      acc += binv(b, c) * binv(d, a);
    }
  }
  return acc;
}

LmiWork make_work(const LmiProblem& prob) {
  LmiWork wk;
  const int n = prob.a.rows();
  if (prob.a.cols() != n) throw DimensionMismatch("solve_block_lmi: A not square");
  if (prob.w.rows() != n || prob.w.cols() != n) {
    throw DimensionMismatch("solve_block_lmi: W shape mismatch");
  }
  check_partition(prob.partition, n);
  wk.n = n;
  wk.a = prob.side == LmiSide::Controllability ? prob.a : prob.a.transpose();
  const double wscale = std::max(1.0, prob.w.frobenius_norm());
  wk.w = prob.w;
  wk.w *= 1.0 / wscale;
  wk.partition = prob.partition;
  wk.offsets.assign(1, 0);
  for (int ni : prob.partition) wk.offsets.push_back(wk.offsets.back() + ni);
  // Interior-point strictness relative to the (scaled) W norm.
  const double wnorm = wk.w.frobenius_norm();
  wk.delta_lmi = 1e-9 * std::max(1e-3, wnorm);
  wk.delta_blk = wk.delta_lmi;
  for (int b = 0; b < static_cast<int>(prob.partition.size()); ++b) {
    for (int i = 0; i < prob.partition[b]; ++i) {
      for (int j = i; j < prob.partition[b]; ++j) {
        wk.basis.push_back({b, wk.offsets[b] + i, wk.offsets[b] + j});
      }
    }
  }
  wk.m_dirs.reserve(wk.basis.size());
  for (const BasisEntry& e : wk.basis) {
    Matrix dp(n, n);
    dp(e.gi, e.gj) = 1.0;
    dp(e.gj, e.gi) = 1.0;
    wk.m_dirs.push_back(wk.a * dp + dp * wk.a.transpose());
  }
  return wk;
}

struct BarrierEval {
  bool in_domain = false;
  double phi = 0.0;     // barrier value (without the linear objective)
  Matrix s_inv;
  std::vector<Matrix> blk_inv;
};

BarrierEval eval_barrier(const LmiWork& wk, const Matrix& p, double slack_shift) {
  // slack_shift: phase I uses S = sI - L(P); phase II uses S = -L(P) - delta I
  // (slack_shift = s for phase I with delta_lmi = 0 semantics folded by caller).
  BarrierEval ev;
  Matrix s = -1.0 * (wk.a * p + p * wk.a.transpose()) - wk.w;
  for (int i = 0; i < wk.n; ++i) s(i, i) += slack_shift;
  double logdet_s;
  if (!spd_inverse(s, ev.s_inv, &logdet_s)) return ev;
  double phi = -logdet_s;
  ev.blk_inv.resize(wk.partition.size());
  for (std::size_t b = 0; b < wk.partition.size(); ++b) {
    const int ni = wk.partition[b];
    Matrix blk = p.block(wk.offsets[b], wk.offsets[b], ni, ni);
    for (int i = 0; i < ni; ++i) blk(i, i) -= wk.delta_blk;
    double logdet_b;
    if (ni == 0) {
      ev.blk_inv[b] = Matrix(0, 0);
      continue;
    }
    if (!spd_inverse(blk, ev.blk_inv[b], &logdet_b)) return ev;
    phi -= logdet_b;
  }
  ev.in_domain = true;
  ev.phi = phi;
  return ev;
}

// Shared Newton machinery for both phases. Variables: z (block entries) and,
// in phase I, the extra slack scalar s. The linear objective is
// t * (c_z . z + c_s * s).
struct NewtonState {
  std::vector<double> z;
  double s = 0.0;
  bool phase1 = false;
};

}  // namespace

LmiSolution solve_block_lmi(const LmiProblem& prob, double tol, int max_newton_iterations) {
  LmiWork wk = make_work(prob);
  const int n = wk.n;
  const std::size_t kvar = wk.basis.size();
  const double wscale = std::max(1.0, prob.w.frobenius_norm());
  const double nu = static_cast<double>(n) +
                    static_cast<double>(std::accumulate(wk.partition.begin(),
                                                        wk.partition.end(), 0));
  int newton_budget = max_newton_iterations;
  int newton_used = 0;

  // ---- Phase I: minimize s subject to L(P) < s I, blocks > delta I. ----
  std::vector<double> z(kvar, 0.0);
  {
    const double c0 = std::max(4.0 * wk.delta_blk, 0.25);
    for (std::size_t k = 0; k < kvar; ++k) {
      if (wk.basis[k].gi == wk.basis[k].gj) z[k] = c0;
    }
  }
  double s_aux;
  {
    Matrix p = blocks_from_z(wk, z);
    Matrix l = wk.a * p + p * wk.a.transpose() + wk.w;
    SymEigResult eig = sym_eig(l);
    s_aux = eig.values.front() + 0.1 * std::max(1.0, wk.w.frobenius_norm());
  }

  bool feasible = false;
  double phase1_bound = s_aux;  // certified lower bound on min s
  for (double t = 1.0; t <= 1e10 && !feasible; t *= 10.0) {
    bool stage_converged = false;
    for (int inner = 0; inner < 80; ++inner) {
      if (newton_used >= newton_budget) break;
      Matrix p = blocks_from_z(wk, z);
      BarrierEval ev = eval_barrier(wk, p, s_aux);
      if (!ev.in_domain) {
        throw NumericalBreakdown("solve_block_lmi: phase I iterate left the domain");
      }
      if (s_aux <= -2.0 * wk.delta_lmi) {
        feasible = true;
        break;
      }
      ++newton_used;
      // Gradient and Hessian over (z, s).
      std::vector<double> g(kvar + 1, 0.0);
      std::vector<Matrix> zdirs(kvar);
      for (std::size_t k = 0; k < kvar; ++k) {
        zdirs[k] = ev.s_inv * wk.m_dirs[k];
        g[k] = trace_product(ev.s_inv, wk.m_dirs[k]);
        const BasisEntry& e = wk.basis[k];
        const Matrix& binv = ev.blk_inv[e.block];
        const int li = e.gi - wk.offsets[e.block];
        const int lj = e.gj - wk.offsets[e.block];
        g[k] -= (li == lj) ? binv(li, lj) : 2.0 * binv(li, lj);
      }
      g[kvar] = t - ev.s_inv.trace();
      Matrix h(kvar + 1, kvar + 1);
      for (std::size_t k = 0; k < kvar; ++k) {
        for (std::size_t l2 = k; l2 < kvar; ++l2) {
          double v = trace_product(zdirs[k], zdirs[l2]);
          const BasisEntry& ek = wk.basis[k];
          const BasisEntry& el = wk.basis[l2];
          if (ek.block == el.block) {
            const Matrix& binv = ev.blk_inv[ek.block];
            const int o = wk.offsets[ek.block];
            v += block_hessian_term(binv, ek.gi - o, ek.gj - o, el.gi - o, el.gj - o);
          }
          h(k, l2) = v;
          h(l2, k) = v;
        }
        // cross term with s: d2/dz dk ds of -logdet(sI - L) = -tr(Sinv M_k Sinv)
        const double cross = -trace_product(zdirs[k], ev.s_inv);
        h(k, kvar) = cross;
        h(kvar, k) = cross;
      }
      h(kvar, kvar) = trace_product(ev.s_inv, ev.s_inv);
      // Solve H d = -g with a small adaptive ridge.
      std::vector<double> d(kvar + 1, 0.0);
      {
        Matrix rhs(kvar + 1, 1);
        for (std::size_t k = 0; k <= kvar; ++k) rhs(k, 0) = -g[k];
        double ridge = 0.0;
        for (int attempt = 0; attempt < 6; ++attempt) {
          Matrix hr = h;
          if (ridge > 0.0) {
            for (std::size_t k = 0; k <= kvar; ++k) hr(k, k) += ridge;
          }
          Matrix l;
          if (cholesky(hr, l)) {
            Matrix sol = rhs;
            // forward/back substitution with l
            const int kn = static_cast<int>(kvar) + 1;
            for (int i = 0; i < kn; ++i) {
              double acc = sol(i, 0);
              for (int j = 0; j < i; ++j) acc -= l(i, j) * sol(j, 0);
              sol(i, 0) = acc / l(i, i);
            }
            for (int i = kn - 1; i >= 0; --i) {
              double acc = sol(i, 0);
              for (int j = i + 1; j < kn; ++j) acc -= l(j, i) * sol(j, 0);
              sol(i, 0) = acc / l(i, i);
            }
            for (std::size_t k = 0; k <= kvar; ++k) d[k] = sol(k, 0);
            break;
          }
          ridge = ridge == 0.0 ? 1e-10 : ridge * 100.0;
          if (attempt == 5) {
            throw NumericalBreakdown("solve_block_lmi: Newton system not SPD");
          }
        }
      }
      double decrement = 0.0;
      for (std::size_t k = 0; k <= kvar; ++k) decrement -= g[k] * d[k];
      if (decrement <= 1e-11 * (1.0 + std::abs(s_aux) * t)) {
        stage_converged = true;
        break;
      }
      // Backtracking line search staying inside the barrier domain.
      const double f0 = t * s_aux + ev.phi;
      double alpha = 1.0;
      bool stepped = false;
      for (int ls = 0; ls < 50; ++ls) {
        std::vector<double> zc = z;
        for (std::size_t k = 0; k < kvar; ++k) zc[k] += alpha * d[k];
        const double sc = s_aux + alpha * d[kvar];
        Matrix pc = blocks_from_z(wk, zc);
        BarrierEval evc = eval_barrier(wk, pc, sc);
        if (evc.in_domain && t * sc + evc.phi <= f0 - 0.25 * alpha * decrement) {
          z = std::move(zc);
          s_aux = sc;
          stepped = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!stepped) break;
    }
    if (!feasible) {
      if (stage_converged) {
        phase1_bound = s_aux - nu / t;
        if (phase1_bound > 0.0) {
          throw Infeasible(
              "solve_block_lmi: no block-diagonal solution exists; phase-I "
              "certificate min-slack >= " +
              std::to_string(phase1_bound * wscale));
        }
      }
      if (newton_used >= newton_budget) {
        throw Infeasible(
            "solve_block_lmi: Newton budget exhausted before a strictly "
            "feasible point was found (best slack " +
            std::to_string(s_aux * wscale) + ")");
      }
    }
  }
  if (!feasible) {
    throw Infeasible("solve_block_lmi: phase I failed to reach strict feasibility");
  }

  // ---- Phase II: minimize trace(P) along the central path. ----
  const double gap_target = 1e-6 * std::max(1, n);
  double gap = nu;
  for (double t = 1.0; ; t *= 10.0) {
    for (int inner = 0; inner < 80; ++inner) {
      if (newton_used >= newton_budget) break;
      Matrix p = blocks_from_z(wk, z);
      BarrierEval ev = eval_barrier(wk, p, -wk.delta_lmi);
      if (!ev.in_domain) {
        throw NumericalBreakdown("solve_block_lmi: phase II iterate left the domain");
      }
      ++newton_used;
      std::vector<double> g(kvar, 0.0);
      std::vector<Matrix> zdirs(kvar);
      for (std::size_t k = 0; k < kvar; ++k) {
        zdirs[k] = ev.s_inv * wk.m_dirs[k];
        const BasisEntry& e = wk.basis[k];
        g[k] = (e.gi == e.gj ? t : 0.0) + trace_product(ev.s_inv, wk.m_dirs[k]);
        const Matrix& binv = ev.blk_inv[e.block];
        const int li = e.gi - wk.offsets[e.block];
        const int lj = e.gj - wk.offsets[e.block];
        g[k] -= (li == lj) ? binv(li, lj) : 2.0 * binv(li, lj);
      }
      Matrix h(kvar, kvar);
      for (std::size_t k = 0; k < kvar; ++k) {
        for (std::size_t l2 = k; l2 < kvar; ++l2) {
          double v = trace_product(zdirs[k], zdirs[l2]);
          const BasisEntry& ek = wk.basis[k];
          const BasisEntry& el = wk.basis[l2];
          if (ek.block == el.block) {
            const Matrix& binv = ev.blk_inv[ek.block];
            const int o = wk.offsets[ek.block];
            v += block_hessian_term(binv, ek.gi - o, ek.gj - o, el.gi - o, el.gj - o);
          }
          h(k, l2) = v;
          h(l2, k) = v;
        }
      }
      std::vector<double> d(kvar, 0.0);
      {
        double ridge = 0.0;
        bool ok = false;
        for (int attempt = 0; attempt < 6 && !ok; ++attempt) {
          Matrix hr = h;
          if (ridge > 0.0)
            for (std::size_t k = 0; k < kvar; ++k) hr(k, k) += ridge;
          Matrix l;
          if (cholesky(hr, l)) {
            std::vector<double> sol(kvar);
            for (std::size_t i = 0; i < kvar; ++i) {
              double acc = -g[i];
              for (std::size_t j = 0; j < i; ++j) acc -= l(i, j) * sol[j];
              sol[i] = acc / l(i, i);
            }
            for (int i = static_cast<int>(kvar) - 1; i >= 0; --i) {
              double acc = sol[i];
              for (std::size_t j = i + 1; j < kvar; ++j) acc -= l(j, i) * sol[j];
              sol[i] = acc / l(i, i);
            }
            d = std::move(sol);
            ok = true;
          } else {
            ridge = ridge == 0.0 ? 1e-10 : ridge * 100.0;
          }
        }
        if (!ok) throw NumericalBreakdown("solve_block_lmi: Newton system not SPD");
      }
      double decrement = 0.0;
      for (std::size_t k = 0; k < kvar; ++k) decrement -= g[k] * d[k];
      if (decrement <= 1e-10 * (1.0 + t)) break;
      double trace0 = 0.0;
      for (std::size_t k = 0; k < kvar; ++k) {
        if (wk.basis[k].gi == wk.basis[k].gj) trace0 += z[k];
      }
      const double f0 = t * trace0 + ev.phi;
      double alpha = 1.0;
      bool stepped = false;
      for (int ls = 0; ls < 50; ++ls) {
        std::vector<double> zc = z;
        for (std::size_t k = 0; k < kvar; ++k) zc[k] += alpha * d[k];
        Matrix pc = blocks_from_z(wk, zc);
        BarrierEval evc = eval_barrier(wk, pc, -wk.delta_lmi);
        if (evc.in_domain) {
          double trc = 0.0;
          for (std::size_t k = 0; k < kvar; ++k) {
            if (wk.basis[k].gi == wk.basis[k].gj) trc += zc[k];
          }
          if (t * trc + evc.phi <= f0 - 0.25 * alpha * decrement) {
            z = std::move(zc);
            stepped = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!stepped) break;
    }
    gap = nu / t;
    if (gap <= gap_target || newton_used >= newton_budget) break;
    if (t > 1e14) break;
  }

  // Assemble the solution in original units.
  LmiSolution sol;
  Matrix p = blocks_from_z(wk, z);
  p *= wscale;
  sol.blocks = extract_blocks(p, wk.partition);
  Matrix resid = wk.a * p + p * wk.a.transpose() + prob.w;
  SymEigResult eig = sym_eig(resid);
  sol.residual_lmax = eig.values.front();
  sol.gap = gap * wscale;
  sol.newton_iterations = newton_used;
  if (sol.residual_lmax > tol * std::max(1.0, prob.w.frobenius_norm())) {
    throw NumericalBreakdown("solve_block_lmi: exit residual above tolerance");
  }
  return sol;
}

GramianPair generalized_gramians(const ClosedLoop& cl, const std::vector<int>& partition,
                                 double tol, int max_newton_iterations) {
  const int n = cl.a.rows();
  check_partition(partition, n);
  if (!cl.stable) {
    throw NotStable("generalized_gramians: closed loop is not stable");
  }
  LmiProblem pprob{cl.a, cl.b * cl.b.transpose(), partition, LmiSide::Controllability};
  LmiProblem qprob{cl.a, cl.c.transpose() * cl.c, partition, LmiSide::Observability};
  LmiSolution psol = solve_block_lmi(pprob, tol, max_newton_iterations);
  LmiSolution qsol = solve_block_lmi(qprob, tol, max_newton_iterations);
  GramianPair out;
  out.kind = GramianKind::Generalized;
  out.p_blocks = psol.blocks;
  out.q_blocks = qsol.blocks;
  out.p_residual = psol.residual_lmax;
  out.q_residual = qsol.residual_lmax;
  out.p_gap = psol.gap;
  out.q_gap = qsol.gap;
  return out;
}

Matrix LmiSolution::assembled() const {
  int n = 0;
  for (const Matrix& b : blocks) n += b.rows();
  return assemble_blocks(blocks, n);
}

std::optional<std::string> minimality_warning(const ClosedLoop& cl) {
  if (!cl.stable) return std::nullopt;
  const Matrix p = solve_lyapunov(cl.a, cl.b * cl.b.transpose());
  const Matrix q = solve_lyapunov(cl.a.transpose(), cl.c.transpose() * cl.c);
  SymEigResult pe = sym_eig(p);
  SymEigResult qe = sym_eig(q);
  const double pratio = pe.values.back() / std::max(pe.values.front(), 1e-300);
  const double qratio = qe.values.back() / std::max(qe.values.front(), 1e-300);
  if (pratio < 1e-12) {
    return "closed-loop realization may not be controllable (Gramian eigenvalue "
           "ratio " +
           std::to_string(pratio) + "); minimality is assumed, not verified";
  }
  if (qratio < 1e-12) {
    return "closed-loop realization may not be observable (Gramian eigenvalue ratio " +
           std::to_string(qratio) + "); minimality is assumed, not verified";
  }
  return std::nullopt;
}

}  // namespace smr
