#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "masslab/groundstate.hpp"

namespace masslab::test {

// Ground states are solved once per process.
inline const GroundState& ground_state(int dim) {
  static GroundState cache[4];
  if (cache[dim].dim == 0) cache[dim] = solve_ground_state(dim);
  return cache[dim];
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Smooth random field that vanishes at r_max.
inline Field smooth_random(GridPtr grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = u(rng), b = u(rng), s = 1.5 + u(rng);
  const std::size_t last = grid->size() - 1;
  Field f = Field::sample(grid, [&](double r) {
    return std::exp(-r * r / (s * s)) * (1.0 + 0.4 * a * std::cos(r) + 0.3 * b * r * r / (1.0 + r * r));
  });
  f.transform([&](std::size_t i, double v) { return i == last ? 0.0 : v; });
  return f;
}

}  // namespace masslab::test
