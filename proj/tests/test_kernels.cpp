#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "smr/kernels.hpp"

using smr::kernels::cplx;
using smr::kernels::Dispatch;

namespace {

std::mt19937_64 rng(20240817);

std::vector<double> randvec(std::size_t n) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

std::vector<cplx> randzvec(std::size_t n) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<cplx> v(n);
  for (cplx& x : v) x = cplx{d(rng), d(rng)};
  return v;
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

bool close(cplx a, cplx b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace

TEST_CASE("scalar kernels compute the textbook definitions") {
  const Dispatch& k = smr::kernels::scalar();
  // dot / axpy / scal on a tiny fixed case
  std::vector<double> x{1.0, 2.0, 3.0};
  std::vector<double> y{4.0, -1.0, 0.5};
  CHECK(k.dot(3, x.data(), y.data()) == doctest::Approx(1.0 * 4.0 - 2.0 + 1.5));
  k.axpy(3, 2.0, x.data(), y.data());
  CHECK(y[0] == doctest::Approx(6.0));
  CHECK(y[2] == doctest::Approx(6.5));
  k.scal(3, -1.0, y.data());
  CHECK(y[0] == doctest::Approx(-6.0));

  // gemm against a hand-multiplied 2x2
  std::vector<double> a{1.0, 2.0, 3.0, 4.0};
  std::vector<double> b{5.0, 6.0, 7.0, 8.0};
  std::vector<double> c(4, 0.0);
  k.gemm(2, 2, 2, a.data(), 2, b.data(), 2, c.data(), 2);
  CHECK(c[0] == doctest::Approx(19.0));
  CHECK(c[1] == doctest::Approx(22.0));
  CHECK(c[2] == doctest::Approx(43.0));
  CHECK(c[3] == doctest::Approx(50.0));

  // rot is an orthogonal rotation: norms preserved
  std::vector<double> u{3.0, 0.0};
  std::vector<double> v{4.0, 1.0};
  const double c0 = 0.6;
  const double s0 = 0.8;
  k.rot(2, u.data(), v.data(), c0, s0);
  CHECK(u[0] == doctest::Approx(0.6 * 3.0 + 0.8 * 4.0));
  CHECK(v[0] == doctest::Approx(0.6 * 4.0 - 0.8 * 3.0));
}

TEST_CASE("complex kernels match std::complex arithmetic") {
  const Dispatch& k = smr::kernels::scalar();
  auto x = randzvec(7);
  auto y = randzvec(7);
  cplx expected{0.0, 0.0};
  for (int i = 0; i < 7; ++i) expected += x[i] * y[i];
  CHECK(close(k.zdotu(7, x.data(), y.data()), expected, 1e-14));

  const cplx a{0.3, -1.1};
  auto y2 = y;
  k.zaxpy(7, a, x.data(), y2.data());
  for (int i = 0; i < 7; ++i) CHECK(close(y2[i], y[i] + a * x[i], 1e-14));

  // zrot keeps the stacked vector norm (unitary pair rotation)
  auto u = randzvec(5);
  auto v = randzvec(5);
  double before = 0.0;
  for (int i = 0; i < 5; ++i) before += std::norm(u[i]) + std::norm(v[i]);
  const double c0 = 0.8;
  const cplx s0 = cplx{0.36, 0.48};  // c^2 + |s|^2 = 1
  k.zrot(5, u.data(), v.data(), c0, s0);
  double after = 0.0;
  for (int i = 0; i < 5; ++i) after += std::norm(u[i]) + std::norm(v[i]);
  CHECK(close(after, before, 1e-13));
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const Dispatch* avx = smr::kernels::avx2();
  if (avx == nullptr) {
    MESSAGE("AVX2 not available on this host; dispatch falls back to scalar");
    CHECK(&smr::kernels::active() == &smr::kernels::scalar());
    return;
  }
  const Dispatch& ref = smr::kernels::scalar();

  // Odd sizes exercise the vector tails.
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 65}) {
    auto x = randvec(n);
    auto y = randvec(n);
    const double tol = 1e-13 * (1.0 + static_cast<double>(n));

    CHECK(close(avx->dot(n, x.data(), y.data()), ref.dot(n, x.data(), y.data()), tol));

    auto y1 = y;
    auto y2 = y;
    avx->axpy(n, 1.7, x.data(), y1.data());
    ref.axpy(n, 1.7, x.data(), y2.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(close(y1[i], y2[i], tol));

    auto u1 = x;
    auto v1 = y;
    auto u2 = x;
    auto v2 = y;
    avx->rot(n, u1.data(), v1.data(), 0.6, 0.8);
    ref.rot(n, u2.data(), v2.data(), 0.6, 0.8);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(close(u1[i], u2[i], tol));
      CHECK(close(v1[i], v2[i], tol));
    }

    auto zx = randzvec(n);
    auto zy = randzvec(n);
    CHECK(close(avx->zdotu(n, zx.data(), zy.data()), ref.zdotu(n, zx.data(), zy.data()), tol));

    auto zy1 = zy;
    auto zy2 = zy;
    const cplx za{-0.4, 0.9};
    avx->zaxpy(n, za, zx.data(), zy1.data());
    ref.zaxpy(n, za, zx.data(), zy2.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(close(zy1[i], zy2[i], tol));

    auto zu1 = zx;
    auto zv1 = zy;
    auto zu2 = zx;
    auto zv2 = zy;
    const cplx zs{0.48, -0.36};
    avx->zrot(n, zu1.data(), zv1.data(), 0.8, zs);
    ref.zrot(n, zu2.data(), zv2.data(), 0.8, zs);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(close(zu1[i], zu2[i], tol));
      CHECK(close(zv1[i], zv2[i], tol));
    }
  }
}

TEST_CASE("avx2 matrix kernels agree with the scalar reference") {
  const Dispatch* avx = smr::kernels::avx2();
  if (avx == nullptr) return;
  const Dispatch& ref = smr::kernels::scalar();

  for (int rep = 0; rep < 20; ++rep) {
    std::uniform_int_distribution<int> dim(1, 23);
    const std::size_t m = dim(rng);
    const std::size_t n = dim(rng);
    const std::size_t kk = dim(rng);
    auto a = randvec(m * kk);
    auto b = randvec(kk * n);
    auto c1 = randvec(m * n);
    auto c2 = c1;
    avx->gemm(m, n, kk, a.data(), kk, b.data(), n, c1.data(), n);
    ref.gemm(m, n, kk, a.data(), kk, b.data(), n, c2.data(), n);
    const double tol = 1e-13 * (1.0 + static_cast<double>(kk));
    for (std::size_t i = 0; i < m * n; ++i) CHECK(close(c1[i], c2[i], tol));

    auto x = randvec(n);
    auto y1 = randvec(m);
    auto y2 = y1;
    avx->gemv(m, n, b.data(), n, x.data(), 0.5, y1.data());
    ref.gemv(m, n, b.data(), n, x.data(), 0.5, y2.data());
    for (std::size_t i = 0; i < m; ++i) CHECK(close(y1[i], y2[i], tol));

    auto g1 = randvec(m * n);
    auto g2 = g1;
    auto xv = randvec(m);
    auto yv = randvec(n);
    avx->ger(m, n, -1.3, xv.data(), yv.data(), g1.data(), n);
    ref.ger(m, n, -1.3, xv.data(), yv.data(), g2.data(), n);
    for (std::size_t i = 0; i < m * n; ++i) CHECK(close(g1[i], g2[i], tol));

    auto za = randzvec(m * kk);
    auto zb = randzvec(kk * n);
    auto zc1 = randzvec(m * n);
    auto zc2 = zc1;
    avx->zgemm(m, n, kk, za.data(), kk, zb.data(), n, zc1.data(), n);
    ref.zgemm(m, n, kk, za.data(), kk, zb.data(), n, zc2.data(), n);
    for (std::size_t i = 0; i < m * n; ++i) CHECK(close(zc1[i], zc2[i], tol));
  }
}
