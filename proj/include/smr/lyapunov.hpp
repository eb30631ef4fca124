#pragma once

#include "smr/config.hpp"
#include "smr/matrix.hpp"

namespace smr {

struct StabilityInfo {
  bool hurwitz = false;
  double abscissa = 0.0;  // max real part over the spectrum
};

// Spectral abscissa test. `margin` is the stability threshold: the matrix is
// reported Hurwitz only when abscissa < margin.
StabilityInfo is_hurwitz(const Matrix& a, double margin = tol::kStabilityMargin);

// Solves A X + X A^T + W = 0 for symmetric X via complex Schur reduction and
// triangular back-substitution. Requires A Hurwitz and W symmetric.
Matrix solve_lyapunov(const Matrix& a, const Matrix& w,
                      double stability_margin = tol::kStabilityMargin);

}  // namespace smr
