#include <doctest.h>

#include <cmath>
#include <limits>

#include "masslab/error.hpp"
#include "masslab/minimize.hpp"
#include "support.hpp"

using namespace masslab;
using masslab::test::rel_err;

namespace {
const Model kConfined = Model::sp_confined(Potential::harmonic(1.0));
}

TEST_SUITE("minimize") {
  TEST_CASE("confined SP minimizer at half the threshold") {
    const auto& gs = test::ground_state(3);
    const double c = 0.5 * gs.cstar;
    const auto r = minimize_on_sphere(kConfined, c, gs.profile.grid_ptr(), SolverConfig{});
    REQUIRE(r.status == MinimizeStatus::CONVERGED);
    CHECK(r.energy > 0.0);
    CHECK(r.lagrange > 0.0);
    CHECK(rel_err(r.minimizer.mass(), c) < 1e-12);
    CHECK(r.minimizer[r.minimizer.size() - 1] == 0.0);
    CHECK(r.energy == r.energy_trace.back());
    CHECK(r.energy_uncertainty < 1e-8 * r.energy);
    CHECK(rel_err(lagrange_multiplier(kConfined, r.minimizer), r.lagrange) < 1e-8);
    CHECK(std::abs(pohozaev_residual(kConfined, r.minimizer, r.lagrange)) < 1e-6 * r.breakdown.A);
  }

  TEST_CASE("energy trace never rises above rounding") {
    const auto& gs = test::ground_state(3);
    for (const auto& m : {kConfined, Model::nls_decaying(3, Potential::gaussian(1.0), 6.0)}) {
      const auto r = minimize_on_sphere(m, 0.4 * gs.cstar, gs.profile.grid_ptr(), SolverConfig{});
      REQUIRE(r.energy_trace.size() >= 2);
      const double noise = 1e3 * std::numeric_limits<double>::epsilon() * std::abs(r.energy_trace.front());
      for (std::size_t k = 1; k < r.energy_trace.size(); ++k) CHECK(r.energy_trace[k] <= r.energy_trace[k - 1] + noise);
    }
  }

  TEST_CASE("same seed gives the same result, other seeds the same minimum") {
    const auto& gs = test::ground_state(3);
    SolverConfig cfg;
    const auto a = minimize_on_sphere(kConfined, 0.3 * gs.cstar, gs.profile.grid_ptr(), cfg);
    const auto b = minimize_on_sphere(kConfined, 0.3 * gs.cstar, gs.profile.grid_ptr(), cfg);
    CHECK(a.energy == b.energy);
    CHECK(a.iterations == b.iterations);
    cfg.seed = 99;
    const auto c = minimize_on_sphere(kConfined, 0.3 * gs.cstar, gs.profile.grid_ptr(), cfg);
    CHECK(std::abs(c.energy - a.energy) <= 10.0 * (a.energy_uncertainty + c.energy_uncertainty));
  }

  TEST_CASE("decaying potential binds below zero") {
    const auto& gs = test::ground_state(3);
    const auto r = minimize_on_sphere(Model::nls_decaying(3, Potential::gaussian(1.0), 6.0), 0.5 * gs.cstar,
                                      gs.profile.grid_ptr(), SolverConfig{});
    REQUIRE(r.status == MinimizeStatus::CONVERGED);
    CHECK(r.energy < 0.0);
    CHECK(r.lagrange < 0.0);
  }

  TEST_CASE("minimizing above threshold runs away") {
    // On a fixed grid the collapse stops at the mesh scale, so the flow keeps
    // descending without converging rather than crossing the divergence floor.
    const auto& gs = test::ground_state(3);
    SolverConfig cfg;
    cfg.max_iter = 2000;
    const auto r = minimize_on_sphere(Model::nls(3), 1.5 * gs.cstar, gs.profile.grid_ptr(), cfg);
    CHECK(r.status != MinimizeStatus::CONVERGED);
    CHECK(r.energy < -1e3);
  }

  TEST_CASE("classification of the SP infimum") {
    const auto& gs = test::ground_state(3);
    const auto below = classify_infimum(Model::sp(), 0.7 * gs.cstar, gs);
    CHECK(below.classification == Classification::ZERO_NOT_ATTAINED);
    CHECK(below.lower_bound_ok);
    CHECK(below.energy == 0.0);
    // The dilation probe approaches zero from above.
    CHECK(below.energies.back() >= 0.0);
    CHECK(below.energies.back() < below.energies.front());
    const auto above = classify_infimum(Model::sp(), 1.3 * gs.cstar, gs);
    CHECK(above.classification == Classification::MINUS_INFINITY);
    CHECK(std::isinf(above.energy));
    CHECK_THROWS_AS(classify_infimum(Model::nls(2), 1.0, gs), ModelError);
  }

  TEST_CASE("random initial field") {
    const auto g = build_grid(3, 10.0, 256);
    const auto u = random_initial_field(g, 4);
    CHECK(u[u.size() - 1] == 0.0);
    CHECK(u.mass() > 0.0);
    const auto v = random_initial_field(g, 4);
    for (std::size_t i = 0; i < u.size(); i += 17) CHECK(u[i] == v[i]);
  }

  TEST_CASE("solver configuration is validated") {
    const auto& gs = test::ground_state(3);
    auto bad = [](auto edit) {
      SolverConfig cfg;
      edit(cfg);
      return cfg;
    };
    const SolverConfig configs[] = {bad([](SolverConfig& c) { c.step = 0.0; }),
                                    bad([](SolverConfig& c) { c.max_iter = 0; }),
                                    bad([](SolverConfig& c) { c.grad_tol = -1.0; }),
                                    bad([](SolverConfig& c) { c.backtracking = 1.0; }),
                                    bad([](SolverConfig& c) { c.divergence_floor = 1.0; })};
    for (const auto& cfg : configs) {
      CHECK_THROWS_AS(cfg.validate(), ConfigError);
      CHECK_THROWS_AS(minimize_on_sphere(kConfined, 1.0, gs.profile.grid_ptr(), cfg), ConfigError);
    }
    CHECK_THROWS_AS(lagrange_multiplier(kConfined, Field::zeros(gs.profile.grid_ptr())), DomainError);
  }
}
