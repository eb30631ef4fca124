#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smr/config.hpp"
#include "smr/gramians.hpp"
#include "smr/statespace.hpp"

namespace smr {

// Balancing transformation and balanced realization of one subsystem:
// Sigma = T P T^T = T^{-T} Q T^{-1} and (Abar, Bbar, Cbar, Dbar) =
// (T A T^{-1}, T B, C T^{-1}, D).
struct SubsystemBalance {
  Matrix t;
  Matrix t_inv;
  std::vector<double> sigma;  // structured Hankel singular values, descending
  StateSpaceModel balanced;
};

struct BalancedRealization {
  std::vector<SubsystemBalance> subsystems;
  GramianKind gramian_kind = GramianKind::Structured;
  BlockDiagonalPlant source;
};

// Square-root balancing per subsystem (Cholesky with a symmetric
// eigendecomposition fallback, then an SVD of the cross factor). Zero-order
// subsystems pass through untouched.
BalancedRealization balance(const BlockDiagonalPlant& plant, const GramianPair& grams);

enum class ReductionMethod { Truncation, Perturbation };

struct ReducedModel {
  BlockDiagonalPlant plant;
  OrderVector orders;
  ReductionMethod method = ReductionMethod::Truncation;
  GramianKind gramian_kind = GramianKind::Structured;
  std::vector<std::string> warnings;
  std::optional<double> achieved_error;
};

// Keep the leading r_i balanced states of each subsystem; D is unchanged, so
// the closed loop matches the original exactly at infinite frequency.
ReducedModel truncate(const BalancedRealization& bal, const OrderVector& r);

// Residualize the trailing balanced states; the closed loop matches the
// original at DC.
ReducedModel singular_perturbation(const BalancedRealization& bal, const OrderVector& r);

// 2 * sum of truncated tails sigma_{i,k}, k > r_i. Only generalized-Gramian
// balancing carries the guarantee; for structured Gramians the value is
// reported with `heuristic` set and must not be asserted against.
struct ErrorBound {
  double value = 0.0;
  std::vector<double> tail_sums;  // per subsystem, not doubled
  bool heuristic = false;
};

ErrorBound theorem1_bound(const BalancedRealization& bal, const OrderVector& r);

// Smallest k with sigma_{i,k} / sigma_{i,k+1} >= drop_ratio, else n_i.
OrderVector suggest_orders(const BalancedRealization& bal,
                           double drop_ratio = tol::kDropRatio);

// Hankel singular values of one isolated subsystem (regular Gramians).
std::vector<double> hankel_singular_values(const StateSpaceModel& sys);

}  // namespace smr
