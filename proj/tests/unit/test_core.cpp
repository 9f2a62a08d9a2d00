#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "liouville/constants.hpp"
#include "liouville/errors.hpp"
#include "liouville/grid.hpp"
#include "liouville/norms.hpp"
#include "liouville/quadrature.hpp"

using namespace liouville;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("closed-form constants, m = 1") {
  const Constants c = constants_for(1);
  CHECK(c.Lambda2m() == doctest::Approx(8.0 * kPi).epsilon(1e-14));
  CHECK(c.alpha2m() == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(c.bm() == doctest::Approx(4.0 * kPi).epsilon(1e-14));
  CHECK(c.c0.value() == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(c.c1.value() == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(c.t == 2);
  CHECK(c.omega2m() == doctest::Approx(2.0 * kPi).epsilon(1e-14));
}

TEST_CASE("closed-form constants, m = 2") {
  const Constants c = constants_for(2);
  CHECK(c.Lambda2m() == doctest::Approx(64.0 * kPi * kPi).epsilon(1e-14));
  // alpha_4 = 2^{2m+1} m (m-1)! ; the exact t_2 = alpha_4 3! / 2^4 = 24 pins it.
  CHECK(c.alpha2m() == doctest::Approx(64.0).epsilon(1e-14));
  CHECK(c.t == 24);
  CHECK(c.omega2m() == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));
  CHECK(c.c1.value() == doctest::Approx(5.0 * kPi * kPi / 36.0).epsilon(1e-14));
}

TEST_CASE("constants reject bad order") {
  CHECK_THROWS_AS(constants_for(0), ConfigError);
  CHECK_THROWS_AS(constants_for(-3), ConfigError);
}

TEST_CASE("c1 = c0 * (psi(2m)-psi(m)) exactly and both match quadrature") {
  for (int m = 1; m <= 3; ++m) {
    const Constants c = constants_for(m);
    CHECK(c.c1.pi_pow == c.c0.pi_pow);
    // rational identity c1 = c0 * sum_{j=m}^{2m-1} 1/j; at m = 1 this is c1 = c0
    long long hn = 0, hd = 1;
    for (int j = m; j <= 2 * m - 1; ++j) {
      hn = hn * j + hd;
      hd *= j;
    }
    CHECK(c.c1.num * c.c0.den * hd == c.c0.num * c.c1.den * hn);
    if (m == 1) CHECK(c.c1.value() == c.c0.value());

    const auto q0 = appendix_integral_oracle(m, AppendixIntegral::C0);
    const auto q1 = appendix_integral_oracle(m, AppendixIntegral::C1);
    CHECK(std::abs(q0.value - c.c0.value()) / c.c0.value() < 1e-8);
    CHECK(std::abs(q1.value - c.c1.value()) / c.c1.value() < 1e-8);
  }
}

TEST_CASE("c1 for m = 1 agrees with the 1-D substitution oracle") {
  // int_{R^2} log(1+|y|^2) (1+|y|^2)^{-2} = pi * int_1^inf log(s)/s^2 ds = pi.
  QuadOptions opts;
  opts.rel_tol = 1e-13;
  const auto tail = integrate([](double s) { return std::log(s) / (s * s); }, 1.0, 1e12, opts);
  CHECK(tail.value == doctest::Approx(1.0).epsilon(1e-9));
  const auto q1 = appendix_integral_oracle(1, AppendixIntegral::C1);
  CHECK(q1.value == doctest::Approx(kPi * tail.value).epsilon(1e-8));
}

TEST_CASE("adaptive quadrature sanity") {
  const auto q = integrate([](double x) { return std::sin(x); }, 0.0, kPi);
  CHECK(q.value == doctest::Approx(2.0).epsilon(1e-12));
  // Radial Gaussian over R^2: integral = pi.
  const auto g = integrate_radial_entire(1, [](double r) { return std::exp(-r * r); });
  CHECK(g.value == doctest::Approx(kPi).epsilon(1e-10));
}

TEST_CASE("grid geometry masks and flux calibration") {
  // -Delta(4 log 1/r) carries total mass Lambda_2 = 8 pi; the discrete sum
  // over a disc telescopes to the staircase flux.
  const auto dom = Domain2D::disc(Vec2(0, 0), 1.0);
  const auto geom = GridGeometry::build(dom, 1.0 / 128);
  GridField f(geom, Frame::Physical);
  // Keep the singularity off the lattice.
  const Vec2 ctr(0.5 / 128, 0.5 / 128);
  f.fill([&](const Vec2& p) { return 4.0 * std::log(1.0 / (p - ctr).norm()); });
  std::vector<std::uint8_t> ok;
  GridField lap = f.polyharmonic_stencil(1, &ok);
  double mass = 0.0;
  const double h2 = geom->h * geom->h;
  const auto& g = *geom;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!ok[g.idx(i, j)]) continue;
      if ((g.node(i, j) - ctr).norm() > 0.5) continue;
      mass += lap.at(i, j) * h2;
    }
  CHECK(std::abs(mass - 8.0 * kPi) / (8.0 * kPi) < 1e-3);
}

TEST_CASE("star norm basics") {
  const auto dom = Domain2D::disc(Vec2(0, 0), 1.0);
  const auto geom = GridGeometry::build(dom, 1.0 / 64);
  const double eps = 0.05;
  std::vector<Vec2> xp = {Vec2(0.0, 0.0)};

  GridField zero(geom, Frame::Expanded, eps);
  CHECK(star_norm(zero, xp, 1, eps) == 0.0);

  GridField floor_field(geom, Frame::Expanded, eps);
  floor_field.fill([&](const Vec2&) { return eps * eps; });
  const double v = star_norm(floor_field, xp, 1, eps);
  CHECK(v > 0.9);
  CHECK(v <= 1.0 + 1e-12);

  CHECK_THROWS_AS(star_norm(zero, {}, 1, eps), ConfigError);
}

TEST_CASE("star norm is a norm on random fields") {
  const auto dom = Domain2D::disc(Vec2(0, 0), 1.0);
  const auto geom = GridGeometry::build(dom, 1.0 / 48);
  const double eps = 0.1;
  std::vector<Vec2> xp = {Vec2(1.0, 0.0), Vec2(-2.0, 1.0)};
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  GridField a(geom, Frame::Expanded, eps), b(geom, Frame::Expanded, eps);
  for (auto& v : a.values()) v = gauss(rng);
  for (auto& v : b.values()) v = gauss(rng);

  const double na = star_norm(a, xp, 1, eps);
  GridField a3 = a;
  for (auto& v : a3.values()) v *= -3.0;
  CHECK(star_norm(a3, xp, 1, eps) == doctest::Approx(3.0 * na).epsilon(1e-12));

  GridField s = a;
  for (size_t i = 0; i < s.values().size(); ++i) s.values()[i] += b.values()[i];
  CHECK(star_norm(s, xp, 1, eps) <= na + star_norm(b, xp, 1, eps) + 1e-12);
}

TEST_CASE("interior/exterior split norm on simple fields") {
  const auto dom = Domain2D::disc(Vec2(0, 0), 1.0);
  const auto geom = GridGeometry::build(dom, 1.0 / 64);
  const double eps = 0.1;
  std::vector<Vec2> xp = {Vec2(2.0, 0.0), Vec2(-2.0, 0.0)};

  GridField zero(geom, Frame::Expanded, eps);
  CHECK(starstar_norm(zero, xp, 1) == 0.0);

  GridField one(geom, Frame::Expanded, eps);
  one.fill([](const Vec2&) { return 1.0; });
  CHECK(starstar_norm(one, xp, 1) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(starstar_norm(one, xp, 2), ResolutionError);
}

TEST_CASE("grid field round-trips through csv") {
  const auto dom = Domain2D::rectangle(Vec2(0, 0), Vec2(1, 0.5));
  const auto geom = GridGeometry::build(dom, 1.0 / 96);
  GridField f(geom, Frame::Physical);
  f.fill([](const Vec2& p) { return std::sin(3 * p.x()) * p.y(); });
  f.save_csv("core_field_roundtrip.csv");
  GridField g = GridField::load_csv("core_field_roundtrip.csv", dom);
  double worst = 0.0;
  for (int j = 0; j < geom->ny; ++j)
    for (int i = 0; i < geom->nx; ++i)
      if (geom->is_interior[geom->idx(i, j)])
        worst = std::max(worst, std::abs(f.at(i, j) - g.at(i, j)));
  CHECK(worst < 1e-5);  // csv stores shortened decimals
}

TEST_CASE("derivative stencils converge at second order") {
  const auto dom = Domain2D::rectangle(Vec2(-1, -1), Vec2(1, 1));
  auto value = [](const Vec2& p) { return std::sin(2 * p.x()) * std::cos(p.y()); };
  double prev_err = 0.0;
  std::vector<double> errs;
  for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    const auto geom = GridGeometry::build(dom, h);
    GridField f(geom, Frame::Physical);
    f.fill(value);
    const int i = geom->nx / 2 + 3, j = geom->ny / 2 - 2;
    const Vec2 p = geom->node(i, j);
    const double exact = -4.0 * std::sin(2 * p.x()) * std::cos(p.y());
    errs.push_back(std::abs(f.derivative(i, j, 2, 0) - exact));
  }
  CHECK(errs[0] / errs[1] > 3.0);
  CHECK(errs[1] / errs[2] > 3.0);
  (void)prev_err;
}
