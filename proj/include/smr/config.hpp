#pragma once

namespace smr {

// Numerical tolerances used across the library. Call sites take these as
// defaulted parameters, so each one can be overridden per call.
namespace tol {

// "Stable" means spectral abscissa strictly below this margin.
inline constexpr double kStabilityMargin = -1e-12;

// Residual check threshold for Lyapunov solves, relative to max(1, ||W||_F).
inline constexpr double kLyapunovResidual = 1e-8;

// Condition-number ceiling for (I - D_K D_G); above it the interconnection
// is reported ill-posed.
inline constexpr double kWellPosedCond = 1e12;

// Condition-number ceiling for resolvent solves in freq_response.
inline constexpr double kResolventCond = 1e14;

// Condition-number ceiling for the fast block in singular perturbation.
inline constexpr double kFastBlockCond = 1e12;

// Default relative tolerance of the H-infinity norm bisection.
inline constexpr double kHinfRelTol = 1e-4;

// Bisection falls back to grid refinement when gamma comes within this
// relative distance of a singular value of D.
inline constexpr double kHinfGammaDGap = 1e-8;

// Generalized-Gramian LMI residual target, relative to max(1, ||W||).
inline constexpr double kLmiResidual = 1e-7;

// Balancing rejects blocks whose Hankel spread exceeds this.
inline constexpr double kDegenerateGramian = 1e-12;

// suggest_orders default: a "significant drop" is two decades.
inline constexpr double kDropRatio = 100.0;

}  // namespace tol

}  // namespace smr
