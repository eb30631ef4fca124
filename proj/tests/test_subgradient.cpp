#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "smr/errors.hpp"
#include "smr/gramians.hpp"
#include "smr/hinf.hpp"
#include "smr/network.hpp"
#include "smr/reduction.hpp"
#include "smr/subgradient.hpp"

using smr::BlockDiagonalPlant;
using smr::ComplexMatrix;
using smr::ErrorPlant;
using smr::Matrix;
using smr::OrderVector;
using smr::ProjectionMask;
using smr::ReducedModel;
using smr::StateSpaceModel;

namespace {

smr::test::Rng rng(11235);

struct Setup {
  smr::test::RandomNetwork inst;
  smr::ClosedLoop cl;
  std::vector<int> part;
  OrderVector orders;
  ErrorPlant ep;
  ProjectionMask mask;
  ReducedModel seed;  // structured-Gramian truncation at `orders`
};

Setup make_setup(int q, bool reduce_orders = true) {
  for (int attempt = 0; attempt < 40; ++attempt) {
    Setup s;
    s.inst = smr::test::random_interconnection(rng, q, 3, 0.15, false);
    s.cl = smr::close_loop(s.inst.plant, s.inst.net);
    for (const auto& sub : s.inst.plant.subsystems) s.part.push_back(sub.order());
    s.orders.r = s.part;
    if (reduce_orders) {
      for (int& r : s.orders.r) r = std::max(1, r - 1);
    }
    try {
      auto grams = smr::structured_gramians(s.cl, s.part);
      auto bal = smr::balance(s.inst.plant, grams);
      s.seed = smr::truncate(bal, s.orders);
      if (!smr::close_loop(s.seed.plant, s.inst.net).stable) continue;
      s.ep = smr::build_error_plant(s.inst.net, s.inst.plant, s.orders);
      s.mask = ProjectionMask::assemble(s.ep.r, s.ep.m_i, s.ep.p_i);
      return s;
    } catch (const smr::Error&) {
      continue;
    }
  }
  throw std::runtime_error("make_setup: no usable instance");
}

Matrix random_masked_gain(const ErrorPlant& ep, const ProjectionMask& mask, double scale) {
  Matrix g = smr::test::randn_matrix(rng, ep.phi_rows(), ep.phi_cols(), scale);
  return smr::project_subgradient(g, mask);
}

}  // namespace

TEST_CASE("error plant closure equals the two-closure difference") {
  Setup s = make_setup(2);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix phi = random_masked_gain(s.ep, s.mask, 0.4);
    BlockDiagonalPlant ghat = smr::decode_gain(s.ep, phi);
    StateSpaceModel closed = smr::close_error_plant(s.ep, phi);
    std::uniform_real_distribution<double> lw(std::log(1e-2), std::log(1e2));
    for (int k = 0; k < 20; ++k) {
      const double w = std::exp(lw(rng));
      ComplexMatrix lhs = smr::freq_response(closed, w);
      ComplexMatrix full = smr::freq_response(smr::to_statespace(s.cl), w);
      ComplexMatrix red = smr::freq_response(
          smr::to_statespace(smr::close_loop(ghat, s.inst.net)), w);
      ComplexMatrix rhs = full - red;
      CHECK((lhs - rhs).frobenius_norm() <= 1e-8 * (1.0 + rhs.frobenius_norm()));
    }
  }
}

TEST_CASE("error plant at a full-order gain is numerically zero") {
  Setup s = make_setup(2, /*reduce_orders=*/false);
  Matrix phi = smr::encode_gain(s.ep, s.inst.plant);
  StateSpaceModel closed = smr::close_error_plant(s.ep, phi);
  for (double w : {0.0, 0.1, 1.0, 10.0, 100.0}) {
    CHECK(smr::sigma_max(smr::freq_response(closed, w)) <= 1e-9);
  }
}

TEST_CASE("error plant at Phi = 0 reduces to the static-gain difference") {
  Setup s = make_setup(2);
  Matrix phi(s.ep.phi_rows(), s.ep.phi_cols());
  BlockDiagonalPlant ghat = smr::decode_gain(s.ep, phi);
  for (const auto& sub : ghat.subsystems) {
    CHECK(sub.order() >= 0);
    CHECK(sub.D.max_abs() == 0.0);
  }
  StateSpaceModel closed = smr::close_error_plant(s.ep, phi);
  // The zero gain leaves the integrator bank marginally stable; the response
  // is defined pointwise away from omega = 0.
  for (double w : {0.3, 0.5, 3.0}) {
    ComplexMatrix lhs = smr::freq_response(closed, w);
    ComplexMatrix full = smr::freq_response(smr::to_statespace(s.cl), w);
    ComplexMatrix red = smr::freq_response(
        smr::to_statespace(smr::close_loop(ghat, s.inst.net)), w);
    CHECK((lhs - (full - red)).frobenius_norm() <= 1e-9 * (1.0 + full.frobenius_norm()));
  }
}

TEST_CASE("objective routes agree: ||F(P, Phi)||_inf vs closed_loop_error") {
  Setup s = make_setup(2);
  Matrix phi = smr::encode_gain(s.ep, s.seed.plant);
  const double via_plant = smr::hinf_norm(smr::close_error_plant(s.ep, phi), 1e-5).value;
  const double via_error =
      smr::closed_loop_error(s.inst.net, s.inst.plant, s.seed.plant, 1e-5);
  CHECK(via_plant == doctest::Approx(via_error).epsilon(1e-7));
}

TEST_CASE("projection mask: assembly, idempotence, off-block zeroing") {
  ProjectionMask mask = ProjectionMask::assemble({1, 2}, {1, 1}, {1, 1});
  // q = 1 collapse: all-ones mask acts as identity.
  ProjectionMask ones = ProjectionMask::assemble({2}, {1}, {1});
  Matrix g = smr::test::randn_matrix(rng, 3, 3);
  CHECK((smr::project_subgradient(g, ones) - g).max_abs() == 0.0);

  // Off-block entries vanish; in-block entries are preserved bitwise.
  Matrix h = smr::test::randn_matrix(rng, 5, 5);
  Matrix ph = smr::project_subgradient(h, mask);
  Matrix pph = smr::project_subgradient(ph, mask);
  CHECK((ph - pph).max_abs() == 0.0);
  // Psi_A block structure: rows 0 (r1), 1..2 (r2); entry (0,1) couples
  // subsystems and must be zero.
  CHECK(ph(0, 1) == 0.0);
  CHECK(ph(0, 2) == 0.0);
  CHECK(ph(1, 0) == 0.0);
  CHECK(ph(0, 0) == h(0, 0));
  CHECK(ph(1, 2) == h(1, 2));
  // Psi_B: row 0 with column 3 (input of subsystem 1) kept, column 4 zeroed.
  CHECK(ph(0, 3) == h(0, 3));
  CHECK(ph(0, 4) == 0.0);
}

TEST_CASE("encode/decode round trip is exact") {
  Setup s = make_setup(2);
  Matrix phi = smr::encode_gain(s.ep, s.seed.plant);
  BlockDiagonalPlant back = smr::decode_gain(s.ep, phi);
  for (int i = 0; i < back.count(); ++i) {
    CHECK((back.subsystems[i].A - s.seed.plant.subsystems[i].A).max_abs() == 0.0);
    CHECK((back.subsystems[i].B - s.seed.plant.subsystems[i].B).max_abs() == 0.0);
    CHECK((back.subsystems[i].C - s.seed.plant.subsystems[i].C).max_abs() == 0.0);
    CHECK((back.subsystems[i].D - s.seed.plant.subsystems[i].D).max_abs() == 0.0);
  }
  Matrix phi2 = smr::encode_gain(s.ep, back);
  CHECK((phi - phi2).max_abs() == 0.0);
}

TEST_CASE("subgradient matches masked central finite differences") {
  int tested = 0;
  while (tested < 6) {
    Setup s = make_setup(2);
    Matrix phi = smr::encode_gain(s.ep, s.seed.plant);
    auto eval = smr::evaluate_error_gain(s.ep, phi);
    if (!eval.stable || eval.objective < 1e-6) continue;
    // require a simple, unique peak
    if (eval.peaks.size() >= 2 && eval.peaks[1].sigma > 0.9 * eval.peaks[0].sigma) {
      continue;
    }
    ++tested;
    Matrix g = smr::project_subgradient(smr::hinf_subgradient(s.ep, phi), s.mask);
    Matrix fd(g.rows(), g.cols());
    for (int a = 0; a < g.rows(); ++a) {
      for (int b = 0; b < g.cols(); ++b) {
        if (s.mask.pattern(a, b) == 0.0) continue;
        const double h = 1e-5 * (1.0 + std::abs(phi(a, b)));
        Matrix plus = phi;
        plus(a, b) += h;
        Matrix minus = phi;
        minus(a, b) -= h;
        const double fp = smr::evaluate_error_gain(s.ep, plus).objective;
        const double fm = smr::evaluate_error_gain(s.ep, minus).objective;
        fd(a, b) = (fp - fm) / (2.0 * h);
      }
    }
    const double diff = (g - fd).frobenius_norm();
    const double scale = std::max(fd.frobenius_norm(), 1e-12);
    CHECK(diff <= 1e-4 * scale);
  }
}

TEST_CASE("scalar case: gradient matches the fixed-frequency derivative of |T|") {
  Setup s = make_setup(1);
  Matrix phi = smr::encode_gain(s.ep, s.seed.plant);
  auto eval = smr::evaluate_error_gain(s.ep, phi);
  REQUIRE(eval.stable);
  if (eval.objective < 1e-9) return;
  const double wstar = eval.peaks.front().omega;
  Matrix g = smr::hinf_subgradient_at(s.ep, phi, wstar);
  // |T(j w*)| as a function of Phi with w* held fixed.
  auto t_abs = [&](const Matrix& gain) {
    StateSpaceModel closed = smr::close_error_plant(s.ep, gain);
    return smr::sigma_max(smr::freq_response(closed, wstar));
  };
  for (int a = 0; a < g.rows(); ++a) {
    for (int b = 0; b < g.cols(); ++b) {
      const double h = 1e-6 * (1.0 + std::abs(phi(a, b)));
      Matrix plus = phi;
      plus(a, b) += h;
      Matrix minus = phi;
      minus(a, b) -= h;
      const double ref = (t_abs(plus) - t_abs(minus)) / (2.0 * h);
      CHECK(g(a, b) == doctest::Approx(ref).epsilon(1e-6));
    }
  }
}

TEST_CASE("subgradient refuses zero objectives and unstable iterates") {
  Setup s = make_setup(2, /*reduce_orders=*/false);
  Matrix phi = smr::encode_gain(s.ep, s.inst.plant);  // exact full-order gain
  CHECK_THROWS_AS(smr::hinf_subgradient(s.ep, phi), smr::ObjectiveAtZero);

  Setup t = make_setup(2);
  Matrix bad = smr::encode_gain(t.ep, t.seed.plant);
  // An anti-stable Ahat block destabilizes the reduced closure.
  for (int i = 0; i < t.ep.r_total; ++i) {
    for (int j = 0; j < t.ep.r_total; ++j) bad(i, j) = 0.0;
    bad(i, i) = 10.0;
  }
  CHECK_THROWS_AS(smr::hinf_subgradient(t.ep, bad), smr::UnstableIterate);
}

TEST_CASE("improve: monotone descent that never regresses the seed") {
  for (int rep = 0; rep < 3; ++rep) {
    Setup s = make_setup(2);
    smr::ImproveOptions opts;
    opts.max_iter = 40;
    std::vector<Matrix> iterates;
    opts.on_accept = [&](const Matrix& m, double) { iterates.push_back(m); };
    auto [model, report] = smr::improve(s.ep, s.seed, opts);

    CHECK(report.final_objective <= report.initial_objective);
    for (std::size_t i = 1; i < report.objective_history.size(); ++i) {
      CHECK(report.objective_history[i] <= report.objective_history[i - 1]);
    }
    // Mask conservation is exact on every accepted iterate.
    for (const Matrix& it : iterates) {
      Matrix proj = smr::project_subgradient(it, s.mask);
      CHECK((proj - it).max_abs() == 0.0);
    }
    // The improved model closes a stable loop.
    CHECK(smr::close_loop(model.plant, s.inst.net).stable);
    // Achieved error equals closed_loop_error of the decoded model.
    const double err =
        smr::closed_loop_error(s.inst.net, s.inst.plant, model.plant, 1e-4);
    CHECK(err == doctest::Approx(*model.achieved_error).epsilon(1e-6));
  }
}

TEST_CASE("improve: full-order seed returns unchanged with zero steps") {
  Setup s = make_setup(2, /*reduce_orders=*/false);
  ReducedModel full_seed;
  full_seed.plant = s.inst.plant;
  full_seed.orders = s.orders;
  auto [model, report] = smr::improve(s.ep, full_seed);
  CHECK(report.accepted_steps == 0);
  CHECK(report.termination == "objective_negligible");
  for (int i = 0; i < model.plant.count(); ++i) {
    CHECK((model.plant.subsystems[i].A - s.inst.plant.subsystems[i].A).max_abs() == 0.0);
  }
}

TEST_CASE("improve rejects unstable seeds") {
  Setup s = make_setup(2);
  ReducedModel bad = s.seed;
  auto subs = bad.plant.subsystems;
  for (auto& sub : subs) {
    sub.A *= -1.0;  // anti-stable reduced subsystems
  }
  bad.plant = smr::aggregate(subs);
  bool ok = smr::close_loop(bad.plant, s.inst.net).stable;
  if (!ok) {
    CHECK_THROWS_AS(smr::improve(s.ep, bad), smr::UnstableInit);
  }
}

TEST_CASE("improve: batch of random seeds ends stable and no worse") {
  int runs = 0;
  for (int rep = 0; rep < 6 && runs < 6; ++rep) {
    Setup s = make_setup(2);
    smr::ImproveOptions opts;
    opts.max_iter = 25;
    auto [model, report] = smr::improve(s.ep, s.seed, opts);
    ++runs;
    CHECK(report.final_objective <= report.initial_objective);
    CHECK(smr::close_loop(model.plant, s.inst.net).stable);
  }
  CHECK(runs > 0);
}
