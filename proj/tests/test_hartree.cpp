#include <doctest.h>

#include <cmath>
#include <numbers>

#include "masslab/error.hpp"
#include "masslab/families.hpp"
#include "masslab/hartree.hpp"
#include "support.hpp"

using namespace masslab;
using masslab::test::rel_err;

namespace {
const double kPi = std::numbers::pi;

// u = exp(-a r^2 / 2): u^2 has total charge (pi/a)^{3/2}.
Field gaussian(GridPtr g, double a) {
  return Field::sample(g, [a](double r) { return std::exp(-0.5 * a * r * r); });
}
}  // namespace

TEST_SUITE("hartree") {
  TEST_CASE("Coulomb potential of Gaussian densities") {
    auto g = build_grid(3, 16.0, 2048);
    for (double a : {0.5, 1.0, 2.0}) {
      const auto s = coulomb_potential(gaussian(g, a));
      double worst = 0.0;
      for (std::size_t i = 0; i < g->size(); ++i) {
        const double r = g->node(i);
        const double q = std::pow(kPi / a, 1.5);
        const double exact = i == 0 ? q * 2.0 * std::sqrt(a / kPi) : q * std::erf(std::sqrt(a) * r) / r;
        worst = std::max(worst, rel_err(s.phi[i], exact));
      }
      CAPTURE(a);
      // The narrowest density is resolved by fewer nodes.
      CHECK(worst < (a > 1.0 ? 1e-5 : 1e-6));
    }
  }

  TEST_CASE("Hartree energy of a Gaussian has the closed form") {
    // 1/4 of the self-interaction of exp(-a r^2): sqrt(2) pi^{5/2} a^{-5/2} / 4.
    auto g = build_grid(3, 16.0, 2048);
    for (double a : {0.8, 1.0, 1.7}) {
      const double exact = std::sqrt(2.0) * std::pow(kPi, 2.5) * std::pow(a, -2.5) / 4.0;
      CHECK(rel_err(hartree_energy(gaussian(g, a)), exact) < 1e-7);
    }
  }

  TEST_CASE("far field carries the total charge") {
    auto g = build_grid(3, 16.0, 1024);
    auto u = gaussian(g, 1.0);
    const auto s = coulomb_potential(u);
    const std::size_t last = g->size() - 1;
    CHECK(rel_err(g->node(last) * s.phi[last], u.mass()) < 1e-10);
  }

  TEST_CASE("potential is positive and radially decreasing") {
    auto g = build_grid(3, 12.0, 512);
    const auto s = coulomb_potential(test::smooth_random(g, 3));
    for (std::size_t i = 1; i < g->size(); ++i) {
      CHECK(s.phi[i] > 0.0);
      CHECK(s.phi[i] <= s.phi[i - 1]);
    }
    CHECK(s.energy_B > 0.0);
  }

  TEST_CASE("B scales linearly under mass-preserving dilation") {
    auto g = build_grid(3, 16.0, 1024);
    auto u = gaussian(g, 1.0);
    const double b = hartree_energy(u);
    for (double t : {0.25, 0.5, 2.0, 4.0}) CHECK(rel_err(hartree_energy(dilation_family(u, u.mass(), t).field), t * b) < 1e-12);
  }

  TEST_CASE("B is quartic in the amplitude") {
    auto g = build_grid(3, 12.0, 512);
    auto u = test::smooth_random(g, 11);
    CHECK(rel_err(hartree_energy(u.scaled(1.5)), std::pow(1.5, 4) * hartree_energy(u)) < 1e-13);
  }

  TEST_CASE("Hartree term needs three dimensions") {
    auto g = build_grid(2, 8.0, 128);
    CHECK_THROWS_AS(coulomb_potential(gaussian(g, 1.0)), ModelError);
  }
}
