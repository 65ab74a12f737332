#pragma once

#include "graphonlab/random.hpp"
#include "graphonlab/step_graphon.hpp"

#include <cmath>
#include <vector>

namespace testing {

using graphonlab::Index;
using graphonlab::Matrix;
using graphonlab::Rng;
using graphonlab::Vector;

inline Vector<double> random_measures(Rng& rng, Index k) {
  Vector<double> m(k);
  for (Index i = 0; i < k; ++i) m(i) = 0.2 + rng.uniform();
  return m / m.sum();
}

inline Matrix<double> random_symmetric(Rng& rng, Index k, double lo, double hi) {
  Matrix<double> v(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = i; j < k; ++j) v(i, j) = v(j, i) = lo + (hi - lo) * rng.uniform();
  }
  return v;
}

inline graphonlab::StepGraphon random_graphon(Rng& rng, Index k) {
  return graphonlab::StepGraphon(random_measures(rng, k), random_symmetric(rng, k, 0.0, 1.0));
}

inline graphonlab::Kernel random_kernel(Rng& rng, Index k) {
  return graphonlab::Kernel(random_measures(rng, k), random_symmetric(rng, k, -1.0, 1.0));
}

/// Lattice points {0, 1/r, ..., 1}^k, visited one at a time.
template <typename Fn>
void for_each_lattice_point(Index k, int r, Fn fn) {
  std::vector<int> c(static_cast<std::size_t>(k), 0);
  Vector<double> t = Vector<double>::Zero(k);
  while (true) {
    fn(t);
    Index i = 0;
    while (i < k && c[static_cast<std::size_t>(i)] == r) {
      c[static_cast<std::size_t>(i)] = 0;
      t(i) = 0.0;
      ++i;
    }
    if (i == k) return;
    ++c[static_cast<std::size_t>(i)];
    t(i) = static_cast<double>(c[static_cast<std::size_t>(i)]) / r;
  }
}

}  // namespace testing
