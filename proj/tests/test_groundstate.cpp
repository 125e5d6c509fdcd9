#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "masslab/error.hpp"
#include "masslab/functionals.hpp"
#include "masslab/groundstate.hpp"
#include "support.hpp"

using namespace masslab;
using masslab::test::rel_err;

TEST_SUITE("groundstate") {
  TEST_CASE("N = 1 matches the sech profile") {
    const auto& gs = test::ground_state(1);
    CHECK(std::abs(gs.cstar - std::sqrt(3.0) * std::numbers::pi / 2.0) < 1e-8);
    CHECK(gs.q0 == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-8));
  }

  TEST_CASE("profile is positive, decreasing and decays like exp(-r)") {
    for (int n = 1; n <= 3; ++n) {
      const auto& gs = test::ground_state(n);
      const auto& q = gs.profile;
      for (std::size_t i = 1; i + 1 < q.size(); ++i) {
        CHECK(q[i] > 0.0);
        CHECK(q[i] < q[i - 1]);
      }
      CHECK(q[q.size() - 1] == 0.0);
      CHECK(gs.decay_check < 0.05);
      CHECK(gs.q0 == doctest::Approx(q[0]).epsilon(1e-6));
    }
  }

  TEST_CASE("integral identities and action") {
    for (int n = 1; n <= 3; ++n) {
      const auto& gs = test::ground_state(n);
      const auto& q = gs.profile;
      const double lp = lp_integral(q, 2.0 + 4.0 / n);
      const double k = dirichlet_integral(q);
      CHECK(rel_err((n + 2.0) / n * k, lp) < 1e-7);
      CHECK(rel_err((n + 2.0) / 2.0 * gs.cstar, lp) < 1e-7);
      CHECK(rel_err(action_functional(q), gs.cstar / 2.0) < 1e-7);
      CHECK(rel_err(action(gs), gs.cstar / 2.0) < 1e-7);
      CHECK(rel_err(q.mass(), gs.cstar) < 1e-14);
      CHECK(rel_err(gs.cstar_ode, gs.cstar) < 1e-5);
    }
  }

  TEST_CASE("gradient flow reproduces the shooting ground state") {
    for (int n = 1; n <= 3; ++n) {
      const auto& gs = test::ground_state(n);
      const auto flow = solve_ground_state_flow(n, gs.profile.grid_ptr());
      CHECK(flow.converged);
      CHECK(rel_err(flow.cstar, gs.cstar) < 1e-8);
      double worst = 0.0;
      for (std::size_t i = 0; i < gs.profile.size(); ++i) worst = std::max(worst, std::abs(flow.profile[i] - gs.profile[i]));
      CHECK(worst < 1e-6 * gs.q0);
    }
  }

  TEST_CASE("two-dimensional threshold mass") {
    CHECK(std::abs(test::ground_state(2).cstar - 11.70) < 5e-3);
  }

  TEST_CASE("c* is stable under grid refinement") {
    GroundStateConfig cfg;
    cfg.points = default_points(3) * 2;
    const auto fine = solve_ground_state(3, cfg);
    CHECK(rel_err(fine.cstar, test::ground_state(3).cstar) < 1e-8);
  }

  TEST_CASE("persistence round trip") {
    const auto& gs = test::ground_state(2);
    const auto path = (std::filesystem::temp_directory_path() / "masslab_gs_roundtrip.txt").string();
    save_ground_state(gs, path);
    const auto back = load_ground_state(path);
    CHECK(back.dim == 2);
    CHECK(back.cstar == gs.cstar);
    CHECK(back.q0 == gs.q0);
    CHECK(back.profile.size() == gs.profile.size());
    for (std::size_t i = 0; i < gs.profile.size(); i += 50) CHECK(back.profile[i] == gs.profile[i]);
    CHECK(back.identity_residuals[0] == doctest::Approx(gs.identity_residuals[0]));
    std::filesystem::remove(path);
  }

  TEST_CASE("malformed files are rejected") {
    const auto path = (std::filesystem::temp_directory_path() / "masslab_gs_bad.txt").string();
    std::ofstream(path) << "not a ground state\n1 2\n";
    CHECK_THROWS_AS(load_ground_state(path), ConfigError);
    CHECK_THROWS_AS(load_ground_state(path + ".missing"), ConfigError);
    std::filesystem::remove(path);
  }

  TEST_CASE("invalid configurations") {
    CHECK_THROWS_AS(solve_ground_state(4), ConfigError);
    GroundStateConfig cfg;
    cfg.bracket_lo = 5.0;
    cfg.bracket_hi = 6.0;
    CHECK_THROWS_AS(solve_ground_state(3, cfg), SolverError);
  }
}
