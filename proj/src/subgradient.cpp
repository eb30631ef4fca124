#include "smr/subgradient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smr/errors.hpp"
#include "smr/linalg.hpp"
#include "smr/lyapunov.hpp"

namespace smr {

namespace {

constexpr double kObjectiveFloor = 1e-10;

}  // namespace

ErrorPlant build_error_plant(const NetworkMatrix& net, const BlockDiagonalPlant& plant,
                             const OrderVector& r) {
  r.validate(plant);
  ErrorPlant ep;
  ep.ext_inputs = net.external_inputs();
  ep.ext_outputs = net.external_outputs();
  ep.m_total = plant.inputs();
  ep.p_total = plant.outputs();
  ep.r = r.r;
  ep.r_total = r.total();
  for (const auto& s : plant.subsystems) {
    ep.m_i.push_back(s.inputs());
    ep.p_i.push_back(s.outputs());
    ep.labels.push_back(s.label);
  }

  const ClosedLoop cl = close_loop(plant, net);
  const int n = cl.a.rows();
  const int rt = ep.r_total;
  const int mx = ep.ext_inputs;
  const int px = ep.ext_outputs;
  const int m = ep.m_total;
  const int p = ep.p_total;

  Matrix a(n + rt, n + rt);
  a.set_block(0, 0, cl.a);

  Matrix b(n + rt, mx + rt + p);
  b.set_block(0, 0, cl.b);
  for (int i = 0; i < rt; ++i) b(n + i, mx + i) = 1.0;

  Matrix c(px + rt + m, n + rt);
  c.set_block(0, 0, cl.c);
  for (int i = 0; i < rt; ++i) c(px + i, n + i) = 1.0;

  Matrix d(px + rt + m, mx + rt + p);
  d.set_block(0, 0, cl.d - net.de);
  d.set_block(0, mx + rt, -1.0 * net.df);
  d.set_block(px + rt, 0, net.dh);
  d.set_block(px + rt, mx + rt, net.dk);

  ep.p = StateSpaceModel(std::move(a), std::move(b), std::move(c), std::move(d),
                         "error-plant");
  return ep;
}

ProjectionMask ProjectionMask::assemble(const std::vector<int>& r,
                                        const std::vector<int>& m_i,
                                        const std::vector<int>& p_i) {
  if (r.size() != m_i.size() || r.size() != p_i.size()) {
    throw DimensionMismatch("ProjectionMask: partition sizes disagree");
  }
  int rt = 0;
  int m = 0;
  int p = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    rt += r[i];
    m += m_i[i];
    p += p_i[i];
  }
  ProjectionMask mask;
  mask.pattern = Matrix(rt + p, rt + m);
  int ro = 0;
  int mo = 0;
  int po = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (int a = 0; a < r[i]; ++a) {
      for (int b = 0; b < r[i]; ++b) mask.pattern(ro + a, ro + b) = 1.0;      // Psi_A
      for (int b = 0; b < m_i[i]; ++b) mask.pattern(ro + a, rt + mo + b) = 1.0;  // Psi_B
    }
    for (int a = 0; a < p_i[i]; ++a) {
      for (int b = 0; b < r[i]; ++b) mask.pattern(rt + po + a, ro + b) = 1.0;    // Psi_C
      for (int b = 0; b < m_i[i]; ++b) mask.pattern(rt + po + a, rt + mo + b) = 1.0;  // Psi_D
    }
    ro += r[i];
    mo += m_i[i];
    po += p_i[i];
  }
  return mask;
}

Matrix project_subgradient(const Matrix& g, const ProjectionMask& mask) {
  if (g.rows() != mask.pattern.rows() || g.cols() != mask.pattern.cols()) {
    throw DimensionMismatch("project_subgradient: shape mismatch");
  }
  Matrix out = g;
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      if (mask.pattern(i, j) == 0.0) out(i, j) = 0.0;
    }
  }
  return out;
}

Matrix encode_gain(const ErrorPlant& ep, const BlockDiagonalPlant& reduced) {
  if (reduced.count() != static_cast<int>(ep.r.size())) {
    throw DimensionMismatch("encode_gain: subsystem count mismatch");
  }
  Matrix phi(ep.phi_rows(), ep.phi_cols());
  const int rt = ep.r_total;
  int ro = 0;
  int mo = 0;
  int po = 0;
  for (std::size_t i = 0; i < ep.r.size(); ++i) {
    const StateSpaceModel& s = reduced.subsystems[i];
    if (s.order() != ep.r[i] || s.inputs() != ep.m_i[i] || s.outputs() != ep.p_i[i]) {
      throw DimensionMismatch("encode_gain: reduced subsystem " + std::to_string(i + 1) +
                              " does not match the target partition");
    }
    phi.set_block(ro, ro, s.A);
    phi.set_block(ro, rt + mo, s.B);
    phi.set_block(rt + po, ro, s.C);
    phi.set_block(rt + po, rt + mo, s.D);
    ro += ep.r[i];
    mo += ep.m_i[i];
    po += ep.p_i[i];
  }
  return phi;
}

BlockDiagonalPlant decode_gain(const ErrorPlant& ep, const Matrix& phi) {
  if (phi.rows() != ep.phi_rows() || phi.cols() != ep.phi_cols()) {
    throw DimensionMismatch("decode_gain: gain shape mismatch");
  }
  std::vector<StateSpaceModel> subs;
  const int rt = ep.r_total;
  int ro = 0;
  int mo = 0;
  int po = 0;
  for (std::size_t i = 0; i < ep.r.size(); ++i) {
    subs.emplace_back(phi.block(ro, ro, ep.r[i], ep.r[i]),
                      phi.block(ro, rt + mo, ep.r[i], ep.m_i[i]),
                      phi.block(rt + po, ro, ep.p_i[i], ep.r[i]),
                      phi.block(rt + po, rt + mo, ep.p_i[i], ep.m_i[i]), ep.labels[i]);
    ro += ep.r[i];
    mo += ep.m_i[i];
    po += ep.p_i[i];
  }
  return aggregate(subs);
}

StateSpaceModel close_error_plant(const ErrorPlant& ep, const Matrix& phi) {
  if (phi.rows() != ep.phi_rows() || phi.cols() != ep.phi_cols()) {
    throw DimensionMismatch("close_error_plant: gain shape mismatch");
  }
  const StateSpaceModel& p = ep.p;
  const int mx = ep.ext_inputs;
  const int px = ep.ext_outputs;
  const int nu = ep.phi_rows();  // feedback inputs u_phi
  const int ny = ep.phi_cols();  // feedback outputs y_phi
  const int n = p.order();
  const Matrix b1 = p.B.block(0, 0, n, mx);
  const Matrix b2 = p.B.block(0, mx, n, nu);
  const Matrix c1 = p.C.block(0, 0, px, n);
  const Matrix c2 = p.C.block(px, 0, ny, n);
  const Matrix d11 = p.D.block(0, 0, px, mx);
  const Matrix d12 = p.D.block(0, mx, px, nu);
  const Matrix d21 = p.D.block(px, 0, ny, mx);
  const Matrix d22 = p.D.block(px, mx, ny, nu);

  Matrix iphid = -1.0 * (phi * d22);
  for (int i = 0; i < nu; ++i) iphid(i, i) += 1.0;
  LuReal lu(iphid);
  if (lu.singular() || lu.cond1(iphid) > tol::kWellPosedCond) {
    throw IllPosed("close_error_plant: I - Phi D22 is numerically singular");
  }
  const Matrix k = lu.inverse() * phi;  // Phi (I - D22 Phi)^{-1} = (I - Phi D22)^{-1} Phi

  StateSpaceModel cl;
  cl.A = p.A + b2 * k * c2;
  cl.B = b1 + b2 * k * d21;
  cl.C = c1 + d12 * k * c2;
  cl.D = d11 + d12 * k * d21;
  cl.label = "error-closure";
  return cl;
}

ErrorGainEval evaluate_error_gain(const ErrorPlant& ep, const Matrix& phi,
                                  int grid_count, int max_peaks) {
  ErrorGainEval out;
  StateSpaceModel err;
  try {
    err = close_error_plant(ep, phi);
  } catch (const IllPosed&) {
    out.objective = std::numeric_limits<double>::infinity();
    return out;
  }
  SweepEvaluator ev(err);
  double abscissa = -std::numeric_limits<double>::infinity();
  for (const cplx& pole : ev.poles()) abscissa = std::max(abscissa, pole.real());
  if (err.order() > 0 && abscissa >= tol::kStabilityMargin) {
    out.objective = std::numeric_limits<double>::infinity();
    return out;
  }
  out.stable = true;
  out.peaks = local_peaks(ev, grid_count, max_peaks);
  out.objective = out.peaks.empty() ? 0.0 : out.peaks.front().sigma;
  return out;
}

Matrix hinf_subgradient_at(const ErrorPlant& ep, const Matrix& phi, double omega) {
  // The open-loop P(s) carries the integrator bank and is singular at
  // omega = 0, so the chain factors are evaluated through the stable closed
  // loop augmented with an injection d at the gain input and a tap at the
  // gain output:
  //   z'/d = P12 (I - Phi P22)^{-1},   y_phi/w = (I - P22 Phi)^{-1} P21.
  const StateSpaceModel& p = ep.p;
  const int mx = ep.ext_inputs;
  const int px = ep.ext_outputs;
  const int nu = ep.phi_rows();
  const int ny = ep.phi_cols();
  const int n = p.order();
  const Matrix b1 = p.B.block(0, 0, n, mx);
  const Matrix b2 = p.B.block(0, mx, n, nu);
  const Matrix c1 = p.C.block(0, 0, px, n);
  const Matrix c2 = p.C.block(px, 0, ny, n);
  const Matrix d11 = p.D.block(0, 0, px, mx);
  const Matrix d12 = p.D.block(0, mx, px, nu);
  const Matrix d21 = p.D.block(px, 0, ny, mx);
  const Matrix d22 = p.D.block(px, mx, ny, nu);

  Matrix iphid = -1.0 * (phi * d22);
  for (int i = 0; i < nu; ++i) iphid(i, i) += 1.0;
  LuReal lu(iphid);
  if (lu.singular() || lu.cond1(iphid) > tol::kWellPosedCond) {
    throw IllPosed("hinf_subgradient: I - Phi D22 is numerically singular");
  }
  const Matrix kd = lu.inverse();       // (I - Phi D22)^{-1}
  const Matrix k = kd * phi;            // Phi (I - D22 Phi)^{-1}

  StateSpaceModel aug;
  aug.A = p.A + b2 * k * c2;
  aug.B = hcat(b1 + b2 * k * d21, b2 * kd);
  aug.C = vcat(c1 + d12 * k * c2, c2 + d22 * k * c2);
  aug.D = Matrix(px + ny, mx + nu);
  aug.D.set_block(0, 0, d11 + d12 * k * d21);
  aug.D.set_block(0, mx, d12 * kd);
  aug.D.set_block(px, 0, d21 + d22 * k * d21);
  aug.D.set_block(px, mx, d22 * kd);
  aug.label = "error-closure-augmented";

  const ComplexMatrix resp = freq_response(aug, omega);
  const ComplexMatrix t = resp.block(0, 0, px, mx);           // F_l(P, Phi)
  const ComplexMatrix t_zd = resp.block(0, mx, px, nu);       // P12 (I - Phi P22)^{-1}
  const ComplexMatrix t_yw = resp.block(px, 0, ny, mx);       // (I - P22 Phi)^{-1} P21

  SingularTriple triple = max_singular_triple(t);
  if (triple.sigma < kObjectiveFloor) {
    throw ObjectiveAtZero(
        "hinf_subgradient: objective is numerically zero; the peak direction is "
        "undefined");
  }
  std::vector<cplx> lrow(nu, cplx{0.0, 0.0});
  for (int j = 0; j < nu; ++j) {
    cplx acc{0.0, 0.0};
    for (int i = 0; i < px; ++i) acc += std::conj(triple.u[i]) * t_zd(i, j);
    lrow[j] = acc;
  }
  std::vector<cplx> rcol(ny, cplx{0.0, 0.0});
  for (int i = 0; i < ny; ++i) {
    cplx acc{0.0, 0.0};
    for (int j = 0; j < mx; ++j) acc += t_yw(i, j) * triple.v[j];
    rcol[i] = acc;
  }
  Matrix grad(nu, ny);
  for (int a = 0; a < nu; ++a) {
    for (int b = 0; b < ny; ++b) {
      grad(a, b) = (lrow[a] * rcol[b]).real();
    }
  }
  return grad;
}

Matrix hinf_subgradient(const ErrorPlant& ep, const Matrix& phi) {
  ErrorGainEval eval = evaluate_error_gain(ep, phi);
  if (!eval.stable) {
    throw UnstableIterate("hinf_subgradient: error closure is unstable");
  }
  if (eval.objective < kObjectiveFloor) {
    throw ObjectiveAtZero("hinf_subgradient: objective is numerically zero");
  }
  return hinf_subgradient_at(ep, phi, eval.peaks.front().omega);
}

namespace {

double frob_inner(const Matrix& a, const Matrix& b) {
  double acc = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) acc += a(i, j) * b(i, j);
  return acc;
}

}  // namespace

std::pair<ReducedModel, DescentReport> improve(const ErrorPlant& ep,
                                               const ReducedModel& init,
                                               const ImproveOptions& opts) {
  DescentReport report;
  ProjectionMask mask = ProjectionMask::assemble(ep.r, ep.m_i, ep.p_i);
  Matrix phi = project_subgradient(encode_gain(ep, init.plant), mask);

  ErrorGainEval cur = evaluate_error_gain(ep, phi);
  ++report.objective_evaluations;
  if (!cur.stable) {
    throw UnstableInit("improve: the seed reduced model closes an unstable loop");
  }
  const Matrix phi_init = phi;
  report.objective_history.push_back(cur.objective);
  report.initial_objective = cur.objective;

  if (cur.objective < kObjectiveFloor) {
    report.termination = "objective_negligible";
    report.final_objective = cur.objective;
    ReducedModel out = init;
    out.achieved_error = cur.objective;
    return {out, report};
  }

  Matrix prev_phi = phi;
  Matrix prev_grad(phi.rows(), phi.cols());
  bool have_prev = false;
  int stall = 0;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    ++report.iterations;
    Matrix g = project_subgradient(hinf_subgradient_at(ep, phi, cur.peaks.front().omega),
                                   mask);
    // Coalescing peaks: take the minimum-norm convex combination of the top
    // two subgradients.
    if (cur.peaks.size() >= 2 &&
        cur.peaks[1].sigma >= (1.0 - 1e-3) * cur.peaks[0].sigma) {
      Matrix g2 = project_subgradient(
          hinf_subgradient_at(ep, phi, cur.peaks[1].omega), mask);
      Matrix diff = g - g2;
      const double denom = frob_inner(diff, diff);
      double lambda = denom > 0.0 ? frob_inner(g2, diff) / denom : 0.5;
      lambda = std::clamp(lambda, 0.0, 1.0);
      Matrix combo = g;
      combo *= lambda;
      Matrix g2s = g2;
      g2s *= (1.0 - lambda);
      g = combo + g2s;
    }
    const double gnorm2 = frob_inner(g, g);
    if (gnorm2 <= 1e-24) {
      report.termination = "stationary";
      break;
    }

    // Barzilai-Borwein step seed, then Armijo backtracking.
    double step = 0.0;
    if (have_prev) {
      Matrix dphi = phi - prev_phi;
      Matrix dg = g - prev_grad;
      const double denom = frob_inner(dphi, dg);
      if (denom > 0.0) step = frob_inner(dphi, dphi) / denom;
    }
    if (!(step > 0.0) || !std::isfinite(step)) {
      step = 0.1 * std::max(1e-3, phi.frobenius_norm()) / std::sqrt(gnorm2);
    }
    prev_phi = phi;
    prev_grad = g;
    have_prev = true;

    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      Matrix cand = phi;
      Matrix gd = g;
      gd *= step;
      cand -= gd;
      ErrorGainEval ev = evaluate_error_gain(ep, cand);
      ++report.objective_evaluations;
      if (ev.stable && ev.objective <= cur.objective - 1e-4 * step * gnorm2) {
        phi = std::move(cand);
        cur = std::move(ev);
        accepted = true;
        break;
      }
      step *= 0.5;
    }

    if (accepted) {
      ++report.accepted_steps;
      const double prev = report.objective_history.back();
      report.objective_history.push_back(cur.objective);
      if (opts.on_accept) opts.on_accept(phi, cur.objective);
      const double rel = (prev - cur.objective) / std::max(prev, 1e-300);
      stall = rel < opts.tol ? stall + 1 : 0;
    } else {
      ++stall;
    }
    if (stall >= opts.patience) {
      report.termination = "converged";
      break;
    }
    if (cur.objective < kObjectiveFloor) {
      report.termination = "objective_negligible";
      break;
    }
  }
  if (report.termination.empty()) report.termination = "max_iter";

  // Verified comparison: never hand back a model worse than the seed.
  const double init_norm = hinf_norm(close_error_plant(ep, phi_init), opts.hinf_rel_tol).value;
  double final_norm = hinf_norm(close_error_plant(ep, phi), opts.hinf_rel_tol).value;
  report.initial_objective = init_norm;
  if (final_norm > init_norm) {
    phi = phi_init;
    final_norm = init_norm;
    report.termination += "+regression_guard";
  } else {
    report.improved = final_norm < init_norm;
  }
  report.final_objective = final_norm;

  ReducedModel out;
  out.plant = decode_gain(ep, phi);
  out.orders = OrderVector{ep.r};
  out.method = init.method;
  out.gramian_kind = init.gramian_kind;
  out.achieved_error = final_norm;
  return {out, report};
}

}  // namespace smr
