#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "masslab/error.hpp"
#include "masslab/grid.hpp"
#include "masslab/spline.hpp"
#include "support.hpp"

using namespace masslab;
using masslab::test::rel_err;

namespace {
const double kPi = std::numbers::pi;

double gaussian_mass(int n) { return std::pow(kPi, 0.5 * n); }
}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("quadrature integrates Gaussian moments over R^N") {
    for (int n = 1; n <= 3; ++n) {
      auto g = build_grid(n, 12.0, 1024);
      std::vector<double> f0, f2;
      for (double r : g->nodes()) {
        f0.push_back(std::exp(-r * r));
        f2.push_back(r * r * std::exp(-r * r));
      }
      CHECK(rel_err(integrate(*g, f0), gaussian_mass(n)) < 1e-10);
      CHECK(rel_err(integrate(*g, f2), 0.5 * n * gaussian_mass(n)) < 1e-10);
    }
  }

  TEST_CASE("weights are positive and the grid is uniform") {
    auto g = build_grid(3, 10.0, 257);
    CHECK(g->node(0) == 0.0);
    CHECK(g->node(g->size() - 1) == doctest::Approx(10.0));
    CHECK(g->spacing() == doctest::Approx(10.0 / 256));
    for (double w : g->weights()) CHECK(w > 0.0);
    CHECK(g->surface_factor() == doctest::Approx(4.0 * kPi));
  }

  TEST_CASE("Dirichlet integral of a Gaussian converges at fourth order") {
    for (int n = 1; n <= 3; ++n) {
      double prev = 0.0;
      for (std::size_t m : {257u, 513u, 1025u}) {
        auto g = build_grid(n, 12.0, m);
        auto u = Field::sample(g, [](double r) { return std::exp(-0.5 * r * r); });
        const double err = rel_err(dirichlet_integral(u), 0.5 * n * gaussian_mass(n));
        if (prev > 0.0) CHECK(prev / err > 12.0);
        prev = err;
      }
      CHECK(prev < 1e-8);
    }
  }

  TEST_CASE("Dirichlet integral equals the kinetic quadratic form") {
    for (int n = 1; n <= 3; ++n) {
      auto g = build_grid(n, 10.0, 400);
      auto u = test::smooth_random(g, 7 + n);
      std::vector<double> ku(u.size());
      g->kinetic().apply(u.values(), ku);
      double form = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) form += u[i] * ku[i];
      CHECK(rel_err(dirichlet_integral(u), form) < 1e-11);
      CHECK(dirichlet_integral(u) > 0.0);
    }
  }

  TEST_CASE("radial Laplacian of a Gaussian") {
    for (int n = 1; n <= 3; ++n) {
      auto g = build_grid(n, 12.0, 1024);
      auto u = Field::sample(g, [](double r) { return std::exp(-0.5 * r * r); });
      auto lap = radial_laplacian(u);
      double worst = 0.0;
      for (std::size_t i = 0; i + 8 < g->size(); ++i) {
        const double r = g->node(i);
        worst = std::max(worst, std::abs(lap[i] - (r * r - n) * u[i]));
      }
      CHECK(worst < 1e-4);
      CHECK(lap[0] == doctest::Approx(-n).epsilon(1e-4));
    }
  }

  TEST_CASE("radial Laplacian is symmetric under the quadrature inner product") {
    auto g = build_grid(3, 10.0, 300);
    auto a = test::smooth_random(g, 1), b = test::smooth_random(g, 2);
    const double lhs = inner(radial_laplacian(a), b), rhs = inner(a, radial_laplacian(b));
    CHECK(std::abs(lhs - rhs) < 1e-11 * std::abs(lhs));
  }

  TEST_CASE("field mass, rescaling and cache invalidation") {
    auto g = build_grid(3, 12.0, 512);
    auto u = Field::sample(g, [](double r) { return std::exp(-0.5 * r * r); });
    CHECK(rel_err(u.mass(), gaussian_mass(3)) < 1e-10);
    CHECK(rel_err(u.with_mass(2.5).mass(), 2.5) < 1e-14);
    CHECK(rel_err(u.scaled(2.0).mass(), 4.0 * u.mass()) < 1e-14);
    const double before = u.mass();
    u.transform([](std::size_t, double v) { return 3.0 * v; });
    CHECK(rel_err(u.mass(), 9.0 * before) < 1e-14);
    CHECK(rel_err(l2_norm(u) * l2_norm(u), u.mass()) < 1e-14);
  }

  TEST_CASE("dilation preserves mass and matches the analytic profile") {
    auto g = build_grid(3, 14.0, 1024);
    auto u = Field::sample(g, [](double r) { return std::exp(-0.5 * r * r); });
    for (double t : {0.7, 1.0, 1.6}) {
      auto d = dilate(u, t);
      CHECK_FALSE(d.truncated);
      CHECK(d.mass_loss < 1e-8);
      const double r = g->node(100);
      CHECK(d.field[100] == doctest::Approx(std::pow(t, 1.5) * std::exp(-0.5 * t * t * r * r)).epsilon(1e-7));
    }
    CHECK(dilate(u, 0.05).truncated);
    CHECK_THROWS_AS(dilate(u, 0.0), DomainError);
  }

  TEST_CASE("rescaled grid divides the nodes by t") {
    auto g = build_grid(2, 8.0, 128);
    auto h = g->rescaled(2.0);
    CHECK(h->size() == g->size());
    CHECK(h->node(17) == doctest::Approx(g->node(17) / 2.0));
    CHECK(h->dim() == 2);
    CHECK(g->same_as(*build_grid(2, 8.0, 128)));
    CHECK_FALSE(g->same_as(*h));
  }

  TEST_CASE("invalid grids and fields are rejected") {
    CHECK_THROWS_AS(build_grid(4, 1.0, 64), ConfigError);
    CHECK_THROWS_AS(build_grid(3, 0.0, 64), ConfigError);
    CHECK_THROWS_AS(build_grid(3, 1.0, 8), ConfigError);
    auto g = build_grid(3, 5.0, 64);
    CHECK_THROWS_AS(Field(g, std::vector<double>(10)), ShapeError);
    CHECK_THROWS_AS(Field::zeros(g).with_mass(1.0), DomainError);
    CHECK_THROWS_AS(integrate(*g, std::vector<double>(3)), ShapeError);
  }

  TEST_CASE("cubic spline interpolates knots and smooth data") {
    std::vector<double> x, y;
    for (int i = 0; i <= 200; ++i) {
      x.push_back(0.05 * i);
      y.push_back(std::cos(x.back()));
    }
    CubicSpline s(x, y, 0.0, -7.0);
    CHECK(s(x[13]) == doctest::Approx(y[13]).epsilon(1e-14));
    CHECK(s(3.3333) == doctest::Approx(std::cos(3.3333)).epsilon(1e-6));
    CHECK(s.derivative(2.0) == doctest::Approx(-std::sin(2.0)).epsilon(1e-4));
    CHECK(s(11.0) == -7.0);
  }
}
