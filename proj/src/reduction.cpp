#include "smr/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smr/errors.hpp"
#include "smr/linalg.hpp"
#include "smr/lyapunov.hpp"

namespace smr {

namespace {

// Factor M = L L^T for PSD M: Cholesky when definite, clamped symmetric
// eigendecomposition otherwise.
Matrix psd_factor(const Matrix& m) {
  Matrix l;
  if (cholesky(m, l)) return l;
  SymEigResult eig = sym_eig(m);
  const int n = m.rows();
  Matrix f(n, n);
  for (int j = 0; j < n; ++j) {
    const double s = std::sqrt(std::max(0.0, eig.values[j]));
    for (int i = 0; i < n; ++i) f(i, j) = eig.vectors(i, j) * s;
  }
  return f;
}

SubsystemBalance balance_block(const StateSpaceModel& sub, const Matrix& p,
                               const Matrix& q) {
  SubsystemBalance out;
  const int n = sub.order();
  if (n == 0) {
    out.t = Matrix(0, 0);
    out.t_inv = Matrix(0, 0);
    out.balanced = sub;
    return out;
  }
  const Matrix lp = psd_factor(p);
  const Matrix lq = psd_factor(q);
  SvdResult svd = jacobi_svd(lq.transpose() * lp);
  out.sigma = svd.sigma;
  const double smax = svd.sigma.front();
  if (!(smax > 0.0) || svd.sigma.back() < tol::kDegenerateGramian * smax) {
    throw DegenerateGramian(sub.label +
                            ": Gramian block is numerically rank deficient; full-rank "
                            "balancing transformation does not exist");
  }
  Matrix shalf_inv = Matrix(n, n);
  for (int i = 0; i < n; ++i) shalf_inv(i, i) = 1.0 / std::sqrt(svd.sigma[i]);
  out.t = shalf_inv * svd.u.transpose() * lq.transpose();
  out.t_inv = lp * svd.v * shalf_inv;
  out.balanced = StateSpaceModel(out.t * sub.A * out.t_inv, out.t * sub.B,
                                 sub.C * out.t_inv, sub.D, sub.label);
  return out;
}

void validate_orders(const BalancedRealization& bal, const OrderVector& r) {
  r.validate(bal.source);
}

void attach_near_singular_warnings(const BalancedRealization& bal, const OrderVector& r,
                                   ReducedModel& model) {
  for (std::size_t i = 0; i < bal.subsystems.size(); ++i) {
    const auto& sigma = bal.subsystems[i].sigma;
    if (sigma.empty()) continue;
    for (int k = 0; k < r.r[i]; ++k) {
      if (sigma[k] < 1e-12 * sigma.front()) {
        model.warnings.push_back(
            bal.source.subsystems[i].label +
            ": NearSingularBalance: kept state " + std::to_string(k + 1) +
            " has a negligible Hankel value");
        break;
      }
    }
  }
}

}  // namespace

BalancedRealization balance(const BlockDiagonalPlant& plant, const GramianPair& grams) {
  if (static_cast<int>(grams.p_blocks.size()) != plant.count() ||
      static_cast<int>(grams.q_blocks.size()) != plant.count()) {
    throw DimensionMismatch("balance: Gramian partition does not match the plant");
  }
  BalancedRealization out;
  out.gramian_kind = grams.kind;
  out.source = plant;
  for (int i = 0; i < plant.count(); ++i) {
    const StateSpaceModel& sub = plant.subsystems[i];
    if (grams.p_blocks[i].rows() != sub.order() || grams.q_blocks[i].rows() != sub.order()) {
      throw DimensionMismatch("balance: Gramian block size mismatch at subsystem " +
                              std::to_string(i + 1));
    }
    out.subsystems.push_back(balance_block(sub, grams.p_blocks[i], grams.q_blocks[i]));
  }
  return out;
}

ReducedModel truncate(const BalancedRealization& bal, const OrderVector& r) {
  validate_orders(bal, r);
  ReducedModel out;
  out.method = ReductionMethod::Truncation;
  out.gramian_kind = bal.gramian_kind;
  out.orders = r;
  std::vector<StateSpaceModel> reduced;
  for (std::size_t i = 0; i < bal.subsystems.size(); ++i) {
    const StateSpaceModel& b = bal.subsystems[i].balanced;
    const int ri = r.r[i];
    reduced.emplace_back(b.A.block(0, 0, ri, ri), b.B.block(0, 0, ri, b.inputs()),
                         b.C.block(0, 0, b.outputs(), ri), b.D, b.label);
  }
  out.plant = aggregate(reduced);
  attach_near_singular_warnings(bal, r, out);
  return out;
}

ReducedModel singular_perturbation(const BalancedRealization& bal, const OrderVector& r) {
  validate_orders(bal, r);
  ReducedModel out;
  out.method = ReductionMethod::Perturbation;
  out.gramian_kind = bal.gramian_kind;
  out.orders = r;
  std::vector<StateSpaceModel> reduced;
  for (std::size_t i = 0; i < bal.subsystems.size(); ++i) {
    const StateSpaceModel& b = bal.subsystems[i].balanced;
    const int n = b.order();
    const int ri = r.r[i];
    const int nf = n - ri;  // fast block size
    if (nf == 0) {
      reduced.push_back(b);
      continue;
    }
    const Matrix a11 = b.A.block(0, 0, ri, ri);
    const Matrix a12 = b.A.block(0, ri, ri, nf);
    const Matrix a21 = b.A.block(ri, 0, nf, ri);
    const Matrix a22 = b.A.block(ri, ri, nf, nf);
    const Matrix b1 = b.B.block(0, 0, ri, b.inputs());
    const Matrix b2 = b.B.block(ri, 0, nf, b.inputs());
    const Matrix c1 = b.C.block(0, 0, b.outputs(), ri);
    const Matrix c2 = b.C.block(0, ri, b.outputs(), nf);
    LuReal lu(a22);
    if (lu.singular() || lu.cond1(a22) > tol::kFastBlockCond) {
      throw SingularFastBlock(b.label + ": fast block A22 is numerically singular");
    }
    const Matrix a22_inv = lu.inverse();
    reduced.emplace_back(a11 - a12 * a22_inv * a21, b1 - a12 * a22_inv * b2,
                         c1 - c2 * a22_inv * a21, b.D - c2 * a22_inv * b2, b.label);
  }
  out.plant = aggregate(reduced);
  attach_near_singular_warnings(bal, r, out);
  return out;
}

ErrorBound theorem1_bound(const BalancedRealization& bal, const OrderVector& r) {
  validate_orders(bal, r);
  ErrorBound out;
  out.heuristic = bal.gramian_kind == GramianKind::Structured;
  for (std::size_t i = 0; i < bal.subsystems.size(); ++i) {
    const auto& sigma = bal.subsystems[i].sigma;
    double tail = 0.0;
    for (std::size_t k = static_cast<std::size_t>(r.r[i]); k < sigma.size(); ++k) {
      tail += sigma[k];
    }
    out.tail_sums.push_back(tail);
    out.value += 2.0 * tail;
  }
  return out;
}

OrderVector suggest_orders(const BalancedRealization& bal, double drop_ratio) {
  if (!(drop_ratio > 1.0)) {
    throw InvalidArgument("suggest_orders: drop_ratio must exceed 1");
  }
  OrderVector out;
  for (const SubsystemBalance& sb : bal.subsystems) {
    const auto& sigma = sb.sigma;
    const int n = static_cast<int>(sigma.size());
    int pick = n;
    for (int k = 1; k < n; ++k) {
      const double ratio = sigma[k - 1] / sigma[k];
      if (ratio >= drop_ratio) {
        pick = k;
        break;
      }
    }
    out.r.push_back(pick);
  }
  return out;
}

std::vector<double> hankel_singular_values(const StateSpaceModel& sys) {
  const int n = sys.order();
  if (n == 0) return {};
  const Matrix p = solve_lyapunov(sys.A, sys.B * sys.B.transpose());
  const Matrix q = solve_lyapunov(sys.A.transpose(), sys.C.transpose() * sys.C);
  const Matrix lp = psd_factor(p);
  const Matrix lq = psd_factor(q);
  return jacobi_svd(lq.transpose() * lp).sigma;
}

}  // namespace smr
