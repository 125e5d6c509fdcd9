#include <doctest.h>

#include <cmath>
#include <numbers>

#include "masslab/error.hpp"
#include "masslab/weighted_eigen.hpp"
#include "support.hpp"

using namespace masslab;
using masslab::test::rel_err;

namespace {
const double kPi = std::numbers::pi;
Potential flat(double v) { return Potential::table({0.0, 1.0, 2.0}, {v, v, v}); }
}  // namespace

TEST_SUITE("eigen") {
  TEST_CASE("constant weight reproduces Dirichlet ball eigenvalues") {
    // First zeros: pi/2 (even mode on the interval), j_{0,1}, pi.
    const double zeros[] = {0.0, kPi / 2.0, 2.404825557695773, kPi};
    for (int n = 1; n <= 3; ++n) {
      for (double r : {2.0, 4.0}) {
        const auto e = compute_mu1(flat(1.0), r, 2048, n);
        CAPTURE(n);
        CHECK(rel_err(e.mu1, zeros[n] * zeros[n] / (r * r)) < 1e-8);
      }
    }
  }

  TEST_CASE("eigenvalue scales inversely with the weight") {
    const auto a = compute_mu1(Potential::gaussian(1.0), 4.0);
    const auto b = compute_mu1(Potential::gaussian(2.5), 4.0);
    CHECK(rel_err(b.mu1, a.mu1 / 2.5) < 1e-10);
  }

  TEST_CASE("eigenfunction normalization and sign") {
    const auto e = compute_mu1(Potential::gaussian(1.0), 4.0);
    const auto& phi = e.eigenfunction;
    CHECK(phi[phi.size() - 1] == 0.0);
    for (std::size_t i = 0; i + 1 < phi.size(); ++i) CHECK(phi[i] > 0.0);
    const auto v = Potential::gaussian(1.0).sample(phi.grid());
    double norm = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) norm += phi.grid().weight(i) * v[i] * phi[i] * phi[i];
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.domain_radius == 4.0);
    CHECK(rayleigh_quotient(Potential::gaussian(1.0), phi) == doctest::Approx(e.mu1).epsilon(1e-10));
  }

  TEST_CASE("Rayleigh quotient is minimized by the eigenfunction") {
    const auto pot = Potential::gaussian(1.0);
    const auto e = compute_mu1(pot, 4.0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto v = test::smooth_random(e.eigenfunction.grid_ptr(), seed);
      CHECK(rayleigh_quotient(pot, v) >= e.mu1 * (1.0 - 1e-12));
    }
  }

  TEST_CASE("larger balls lower the eigenvalue") {
    const auto pot = Potential::gaussian(1.0);
    CHECK(compute_mu1(pot, 6.0).mu1 < compute_mu1(pot, 4.0).mu1);
  }

  TEST_CASE("invalid domains") {
    CHECK_THROWS_AS(compute_mu1(Potential::gaussian(1.0), 0.0), DomainError);
    CHECK_THROWS_AS(compute_mu1(Potential::table({0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}), 4.0), DomainError);
  }
}
