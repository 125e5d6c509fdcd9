#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "masslab/analysis.hpp"
#include "masslab/error.hpp"
#include "support.hpp"

using namespace masslab;

namespace {
const Model kConfined = Model::sp_confined(Potential::harmonic(1.0));

std::vector<double> times_cstar(std::initializer_list<double> f) {
  std::vector<double> out;
  for (double x : f) out.push_back(x * test::ground_state(3).cstar);
  return out;
}
}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("parallel_for visits every index once") {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, 4);
    for (const auto& h : hits) CHECK(h.load() == 1);
  }

  TEST_CASE("parallel_for rethrows the lowest failing index") {
    try {
      parallel_for(
          20,
          [](std::size_t i) {
            if (i == 7 || i == 13) throw std::runtime_error("index " + std::to_string(i));
          },
          3);
      FAIL("no exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "index 7");
    }
  }

  TEST_CASE("confined scan has the threshold structure") {
    const auto s = scan(kConfined, times_cstar({0.3, 0.6, 1.3}), test::ground_state(3));
    CHECK(s.classifications[0] == Classification::ATTAINED);
    CHECK(s.classifications[1] == Classification::ATTAINED);
    CHECK(s.classifications[2] == Classification::MINUS_INFINITY);
    CHECK(threshold_structure_ok(s));
    CHECK(s.energies[0] < s.energies[1]);
    CHECK(std::isnan(s.lagranges[2]));
    CHECK(s.reports[0].has_value());
  }

  TEST_CASE("scan results do not depend on the thread count") {
    const auto grid = times_cstar({0.2, 0.5, 0.8, 1.2});
    const auto a = scan(kConfined, grid, test::ground_state(3), SolverConfig{}, 1);
    const auto b = scan(kConfined, grid, test::ground_state(3), SolverConfig{}, 4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(a.classifications[i] == b.classifications[i]);
      CHECK(std::memcmp(&a.energies[i], &b.energies[i], sizeof(double)) == 0);
      CHECK(a.iterations[i] == b.iterations[i]);
    }
  }

  TEST_CASE("threshold structure detects a finite entry after -infinity") {
    ScanResult s;
    s.classifications = {Classification::ATTAINED, Classification::MINUS_INFINITY, Classification::ATTAINED};
    CHECK_FALSE(threshold_structure_ok(s));
    s.classifications.pop_back();
    CHECK(threshold_structure_ok(s));
  }

  TEST_CASE("scan input validation") {
    const auto& gs = test::ground_state(3);
    CHECK_THROWS_AS(scan(kConfined, {}, gs), DomainError);
    CHECK_THROWS_AS(scan(kConfined, {2.0, 1.0}, gs), DomainError);
    CHECK_THROWS_AS(scan(kConfined, {-1.0}, gs), DomainError);
    CHECK_THROWS_AS(scan(Model::nls(1), {1.0}, gs), ModelError);
  }

  TEST_CASE("monotonicity of I_c / c^2") {
    const auto s = scan(kConfined, times_cstar({0.25, 0.5, 0.75, 1.0}), test::ground_state(3));
    const auto m = monotonicity_check(s, 10.0);
    CHECK(m.passed);
    REQUIRE(m.ratios.size() == 4);
    for (std::size_t i = 0; i < m.gaps.size(); ++i) CHECK(m.gaps[i] > m.required[i]);
    CHECK_THROWS_AS(monotonicity_check(scan(Model::sp(), times_cstar({0.5}), test::ground_state(3))), DomainError);
    const auto short_scan = scan(kConfined, times_cstar({0.25, 0.5}), test::ground_state(3));
    CHECK_THROWS_AS(monotonicity_check(short_scan), DomainError);
  }

  TEST_CASE("small-mass limit") {
    const auto r = small_mass_check(scan(kConfined, times_cstar({0.05, 0.1, 0.2}), test::ground_state(3)));
    CHECK(r.passed);
    CHECK(std::abs(r.intercept) < r.energies.front());
  }

  TEST_CASE("continuity probe") {
    const auto& gs = test::ground_state(3);
    const double c = 0.4 * gs.cstar;
    const auto r = continuity_probe(kConfined, c, {0.1 * c, 0.05 * c, 0.02 * c}, gs);
    CHECK(r.passed);
    CHECK(r.decreasing);
    CHECK(std::abs(r.limit) <= r.bound);
    CHECK_THROWS_AS(continuity_probe(Model::sp(), c, {0.1 * c}, gs), ModelError);
    CHECK_THROWS_AS(continuity_probe(kConfined, c, {2.0 * c}, gs), DomainError);
  }

  TEST_CASE("decaying potential: subadditivity, theta scaling, coercivity") {
    const auto& gs = test::ground_state(3);
    const auto eig = compute_mu1(Potential::gaussian(1.0), 4.0);
    const auto model = Model::nls_decaying(3, Potential::gaussian(1.0), 1.5 * eig.mu1);
    const double c = 0.6 * gs.cstar;
    const auto sub = subadditivity_check(model, c, {0.3 * c, 0.5 * c}, gs, eig);
    CHECK(sub.passed);
    for (const auto& e : sub.entries) CHECK(e.status == SubadditivityStatus::STRICT);
    const auto weak = Model::nls_decaying(3, Potential::gaussian(1.0), 0.5 * eig.mu1);
    CHECK_THROWS_AS(subadditivity_check(weak, c, {0.3 * c}, gs, eig), DomainError);
    const auto th = theta_scaling_check(model, 0.4 * gs.cstar, 1.5, gs);
    CHECK(th.passed);
    CHECK(th.gap > th.margin);
    CHECK_THROWS_AS(theta_scaling_check(model, 0.8 * gs.cstar, 1.5, gs), DomainError);
    const auto co = coercivity_probe(model, 0.9 * gs.cstar, gs);
    CHECK(co.passed);
    CHECK(co.bound_ok);
    CHECK_THROWS_AS(coercivity_probe(model, 1.1 * gs.cstar, gs), DomainError);
  }

  TEST_CASE("below-threshold flows end on boundary-held states") {
    const auto& gs = test::ground_state(3);
    const auto nls = nonexistence_evidence(Model::nls(3), 0.5 * gs.cstar, gs, {1, 2});
    CHECK(nls.consistent);
    // L2-critical scaling: the box state energy is exactly proportional to R^{-2}.
    for (double r : nls.ratios) CHECK(r == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(nls.label.rfind("weak evidence only", 0) == 0);
    const auto sp = nonexistence_evidence(Model::sp(), 0.5 * gs.cstar, gs, {3}, 500);
    CHECK(sp.consistent);
    CHECK(sp.ratios[0] > 0.25);
    CHECK_THROWS_AS(nonexistence_evidence(kConfined, 1.0, gs, {1}), ModelError);
    CHECK_THROWS_AS(nonexistence_evidence(Model::sp(), 1.2 * gs.cstar, gs, {1}), DomainError);
  }

  TEST_CASE("status names") {
    CHECK(std::string(to_string(SubadditivityStatus::STRICT)) == "STRICT");
    CHECK(std::string(to_string(Classification::MINUS_INFINITY)) == "MINUS_INFINITY");
  }
}
