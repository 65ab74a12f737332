#pragma once

#include "graphonlab/partition.hpp"
#include "graphonlab/step_graphon.hpp"

#include <cstdint>

namespace graphonlab {

/// The 2x2 chessboard [[0,1],[1,0]] on halves: the limit of K_{n,n} with
/// vertices grouped by side.
StepGraphon bipartite_chessboard();

StepGraphon constant_graphon(double c);

/// K_{n/2,n/2} on n equal cells with the vertex order shuffled, together with
/// the cells of the first side (a cut-norm witness against the constant 1/2).
struct PermutedBipartite {
  StepGraphon graphon;
  Subset side;
};

PermutedBipartite permuted_bipartite(int n, std::uint64_t seed);

}  // namespace graphonlab
