#pragma once

// Test-side oracles. Everything here recomputes reference values through
// routes independent of the library code paths they are used to check.

#include <random>
#include <vector>

#include "smr/matrix.hpp"
#include "smr/network.hpp"
#include "smr/statespace.hpp"

namespace smr::test {

using Rng = std::mt19937_64;

Matrix randn_matrix(Rng& rng, int rows, int cols, double scale = 1.0);

// Random system with spectral abscissa moved to -margin; damping stays
// moderate so grid sweeps resolve every peak.
StateSpaceModel random_stable_system(Rng& rng, int n, int m, int p,
                                     double margin = 0.5, bool with_d = false);

// Matrix exponential by scaling-and-squaring of a Taylor series.
Matrix expm(const Matrix& a);

// Controllability Gramian integral \int_0^T e^{At} W e^{A^T t} dt by
// composite Simpson quadrature.
Matrix gramian_by_quadrature(const Matrix& a, const Matrix& w,
                             double horizon = 60.0, int steps = 8000);

// Frequency response through the characteristic polynomial and the
// Leverrier-Faddeev adjugate recurrence.
ComplexMatrix response_by_charpoly(const StateSpaceModel& sys, double omega);

// Dense log-grid lower bound on the H-infinity norm with its argmax. The
// per-point resolvent solve is a self-contained Gaussian elimination, not
// the library solver.
double sigma_grid_max(const StateSpaceModel& sys, double lo, double hi,
                      int count, double* argmax_omega);

// sigma_max(G(j omega)) via the same self-contained path.
double sigma_at_oracle(const StateSpaceModel& sys, double omega);

// Full response G(j omega) via the self-contained Gaussian elimination.
ComplexMatrix response_oracle(const StateSpaceModel& sys, double omega);

// Random interconnected instance. With `dissipative` set, every A_i has a
// strictly negative-definite symmetric part, so weakly coupled closures stay
// dissipative and block-diagonal Lyapunov certificates exist.
struct RandomNetwork {
  BlockDiagonalPlant plant;
  EdgeLists edges;
  NetworkMatrix net;
};
RandomNetwork random_interconnection(Rng& rng, int q, int max_order,
                                     double coupling, bool dissipative);

// Transfer-level lower LFT D_E + D_F (I - G D_K)^{-1} G D_H at one frequency,
// evaluated with the oracle solver only.
ComplexMatrix lft_formula_response(const NetworkMatrix& net,
                                   const BlockDiagonalPlant& plant, double omega);

}  // namespace smr::test
