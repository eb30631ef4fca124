#pragma once

#include <functional>
#include <string>
#include <vector>

#include "smr/hinf.hpp"
#include "smr/matrix.hpp"
#include "smr/network.hpp"
#include "smr/reduction.hpp"
#include "smr/statespace.hpp"

namespace smr {

// Augmented plant P(s) whose lower LFT with the static gain
// Phi = [Ahat Bhat; Chat Dhat] realizes F(N, G) - F(N, Ghat). States are the
// full closed loop plus an integrator bank of size r; the feedback channel
// carries u_phi = [xhat'; yhat] and y_phi = [xhat; uhat].
struct ErrorPlant {
  StateSpaceModel p;
  int ext_inputs = 0;   // m'
  int ext_outputs = 0;  // p'
  int r_total = 0;
  int m_total = 0;
  int p_total = 0;
  std::vector<int> r;
  std::vector<int> m_i;
  std::vector<int> p_i;
  std::vector<std::string> labels;

  int phi_rows() const { return r_total + p_total; }
  int phi_cols() const { return r_total + m_total; }
};

ErrorPlant build_error_plant(const NetworkMatrix& net, const BlockDiagonalPlant& plant,
                             const OrderVector& r);

// 0/1 block-diagonal sparsity pattern [Psi_A Psi_B; Psi_C Psi_D] that keeps
// descent from coupling reduced subsystems.
struct ProjectionMask {
  Matrix pattern;

  static ProjectionMask assemble(const std::vector<int>& r, const std::vector<int>& m_i,
                                 const std::vector<int>& p_i);
};

// Hadamard product with the mask; idempotent.
Matrix project_subgradient(const Matrix& g, const ProjectionMask& mask);

// Packing of a block-diagonal reduced model into the feedback gain and back.
Matrix encode_gain(const ErrorPlant& ep, const BlockDiagonalPlant& reduced);
BlockDiagonalPlant decode_gain(const ErrorPlant& ep, const Matrix& phi);

// State-space closure F_lower(P, Phi).
StateSpaceModel close_error_plant(const ErrorPlant& ep, const Matrix& phi);

// Refined-grid evaluation of ||F(P, Phi)||_inf with its dominant peaks; the
// objective is +infinity when the closure is unstable.
struct ErrorGainEval {
  double objective = 0.0;
  bool stable = false;
  std::vector<Peak> peaks;
};
ErrorGainEval evaluate_error_gain(const ErrorPlant& ep, const Matrix& phi,
                                  int grid_count = 300, int max_peaks = 4);

// Clarke subgradient of the peak gain with respect to Phi, evaluated from the
// singular triple at `omega` through the open-loop channel responses of
// P(j omega) around the gain.
Matrix hinf_subgradient_at(const ErrorPlant& ep, const Matrix& phi, double omega);

// Subgradient at the peak frequency of the current iterate. Throws
// UnstableIterate when the closure is unstable and ObjectiveAtZero when the
// objective is too small to define a useful descent direction.
Matrix hinf_subgradient(const ErrorPlant& ep, const Matrix& phi);

struct ImproveOptions {
  double tol = 1e-5;
  int patience = 5;
  int max_iter = 300;
  double hinf_rel_tol = 1e-4;  // used for the initial/final verified norms
  // Called after every accepted step with the iterate and its objective.
  std::function<void(const Matrix&, double)> on_accept;
};

struct DescentReport {
  std::vector<double> objective_history;  // accepted steps, nonincreasing
  std::string termination;
  int iterations = 0;
  int objective_evaluations = 0;
  int accepted_steps = 0;
  double initial_objective = 0.0;  // bisection-verified
  double final_objective = 0.0;    // bisection-verified
  bool improved = false;
};

// Projected subgradient descent on ||F(P, Phi)||_inf from a stable seed, with
// Barzilai-Borwein step initialization, Armijo backtracking and a two-point
// minimum-norm direction at coalescing peaks. The result never degrades the
// seed: on regression the seed is returned unchanged.
std::pair<ReducedModel, DescentReport> improve(const ErrorPlant& ep,
                                               const ReducedModel& init,
                                               const ImproveOptions& opts = {});

}  // namespace smr
