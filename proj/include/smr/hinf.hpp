#pragma once

#include <vector>

#include "smr/config.hpp"
#include "smr/linalg.hpp"
#include "smr/matrix.hpp"
#include "smr/statespace.hpp"

namespace smr {

// G(j omega) = C (j omega I - A)^{-1} B + D via a pivoted complex solve.
ComplexMatrix freq_response(const StateSpaceModel& sys, double omega,
                            double cond_limit = tol::kResolventCond);

// Largest singular value of the response at one frequency.
double sigma_at(const StateSpaceModel& sys, double omega);

// Repeated-frequency evaluation: reduces A to Hessenberg form once so each
// frequency costs O(n^2) instead of O(n^3).
class SweepEvaluator {
 public:
  explicit SweepEvaluator(const StateSpaceModel& sys);

  ComplexMatrix response(double omega) const;
  double sigma(double omega) const;
  const std::vector<cplx>& poles() const { return poles_; }

 private:
  int n_ = 0;
  int m_ = 0;
  int p_ = 0;
  Matrix h_;          // upper Hessenberg similar to A
  ComplexMatrix bt_;  // transformed B
  ComplexMatrix cq_;  // transformed C
  Matrix d_;
  std::vector<cplx> poles_;
};

struct Peak {
  double omega = 0.0;
  double sigma = 0.0;
};

// Local maxima of sigma_max(G(j omega)) over a pole-anchored log grid, each
// refined by golden-section search, sorted by descending gain. Includes
// omega = 0 and the resonance frequencies |Im(pole)| as candidates.
std::vector<Peak> local_peaks(const SweepEvaluator& ev, int grid_count = 400,
                              int max_peaks = 8);

struct HinfResult {
  double value = 0.0;
  double peak_omega = 0.0;
  int bisection_steps = 0;
  bool grid_fallback = false;
};

// H-infinity norm by bisection on gamma with an imaginary-axis eigenvalue
// test of the associated Hamiltonian, bracketed by a coarse grid lower bound
// and the Hankel upper bound sigma_max(D) + 2 sum(sigma_hankel). Falls back
// to grid refinement when gamma approaches a singular value of D.
HinfResult hinf_norm(const StateSpaceModel& sys, double rel_tol = tol::kHinfRelTol);

}  // namespace smr
