#include "graphonlab/families.hpp"

#include "graphonlab/random.hpp"

#include <stdexcept>
#include <vector>

namespace graphonlab {

StepGraphon bipartite_chessboard() {
  Matrix<double> v(2, 2);
  v << 0, 1, 1, 0;
  return StepGraphon::uniform(v);
}

StepGraphon constant_graphon(double c) { return StepGraphon::constant(c); }

PermutedBipartite permuted_bipartite(int n, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("permuted_bipartite needs an even n >= 2");
  Rng rng(seed);
  std::vector<int> side(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) side[static_cast<std::size_t>(i)] = i < n / 2 ? 0 : 1;
  rng.shuffle(side);
  Matrix<double> v(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) v(i, j) = side[static_cast<std::size_t>(i)] != side[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
  }
  std::vector<bool> mask(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) mask[static_cast<std::size_t>(i)] = side[static_cast<std::size_t>(i)] == 0;
  StepGraphon g = StepGraphon::uniform(v);
  return {g, Subset(g.measures(), std::move(mask))};
}

}  // namespace graphonlab
