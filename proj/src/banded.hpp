#pragma once

#include <Eigen/SparseCore>
#include <span>
#include <vector>

#include "masslab/grid.hpp"

namespace masslab::detail {

// K + diag(d) on the first n nodes (Dirichlet rows beyond n dropped).
inline Eigen::SparseMatrix<double> kinetic_plus_diag(const RadialGrid& g, std::span<const double> d,
                                                     std::size_t n) {
  const auto& k = g.kinetic();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(5 * n);
  for (std::size_t i = 0; i < n; ++i) {
    t.emplace_back(i, i, k.d0[i] + d[i]);
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, k.d1[i]);
      t.emplace_back(i + 1, i, k.d1[i]);
    }
    if (i + 2 < n) {
      t.emplace_back(i, i + 2, k.d2[i]);
      t.emplace_back(i + 2, i, k.d2[i]);
    }
  }
  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

}  // namespace masslab::detail
