#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smr/config.hpp"
#include "smr/matrix.hpp"
#include "smr/network.hpp"

namespace smr {

enum class GramianKind { Structured, Generalized };

// Block-diagonal controllability/observability Gramian pair, partitioned by
// subsystem state dimensions.
struct GramianPair {
  std::vector<Matrix> p_blocks;
  std::vector<Matrix> q_blocks;
  GramianKind kind = GramianKind::Structured;
  // Structured: Frobenius residual of the two full Lyapunov solves.
  // Generalized: lambda_max of the two LMI residuals (negative on success)
  // plus the solver's duality-gap bound.
  double p_residual = 0.0;
  double q_residual = 0.0;
  double p_gap = 0.0;
  double q_gap = 0.0;

  Matrix p_full() const;
  Matrix q_full() const;
};

// Diagonal blocks of the regular closed-loop Gramians.
GramianPair structured_gramians(const ClosedLoop& cl, const std::vector<int>& partition);

enum class LmiSide { Controllability, Observability };

// min trace(P) over block-diagonal PSD P subject to the Lyapunov LMI
// A P + P A^T + W <= 0 (Controllability) or A^T P + P A + W <= 0
// (Observability).
struct LmiProblem {
  Matrix a;
  Matrix w;
  std::vector<int> partition;
  LmiSide side = LmiSide::Controllability;
};

struct LmiSolution {
  std::vector<Matrix> blocks;
  double residual_lmax = 0.0;  // lambda_max(A P + P A^T + W)
  double gap = 0.0;            // duality-gap bound at exit
  int newton_iterations = 0;

  Matrix assembled() const;
};

// Logarithmic-barrier interior point with Newton steps; phase I searches for
// a strictly feasible point through an auxiliary slack and certifies
// infeasibility through the barrier lower bound when none exists.
LmiSolution solve_block_lmi(const LmiProblem& prob, double tol = tol::kLmiResidual,
                            int max_newton_iterations = 1200);

// Trace-minimizing generalized structured Gramians from the two LMIs.
GramianPair generalized_gramians(const ClosedLoop& cl, const std::vector<int>& partition,
                                 double tol = tol::kLmiResidual,
                                 int max_newton_iterations = 1200);

// Warning-only minimality diagnostic: near-singular regular Gramians suggest
// the closed-loop realization is not minimal.
std::optional<std::string> minimality_warning(const ClosedLoop& cl);

}  // namespace smr
