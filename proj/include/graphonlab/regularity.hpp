#pragma once

#include "graphonlab/functional.hpp"
#include "graphonlab/step_graphon.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphonlab {

/// Simple undirected graph on vertices 0..n-1 stored as a dense 0/1 matrix.
class Graph {
 public:
  explicit Graph(Matrix<double> adjacency);

  static Graph empty(int n);
  static Graph complete_bipartite(int a, int b);
  static Graph cycle(int n);
  /// G(n, p): each pair independently, pairs (i < j) visited row by row.
  static Graph gnp(int n, double p, std::uint64_t seed);
  /// "u v" per line, 0-based; blank lines and lines starting with '#' are skipped.
  /// Vertex count is max index + 1 unless `n` is larger.
  static Graph from_edge_list(const std::string& text, int n = 0);

  int order() const noexcept { return static_cast<int>(adjacency_.rows()); }
  const Matrix<double>& adjacency() const noexcept { return adjacency_; }
  bool adjacent(int u, int v) const { return adjacency_(u, v) != 0.0; }
  long long edge_count() const;
  /// e(G[B]) for a vertex set given as indicator.
  long long edges_within(const std::vector<bool>& in) const;
  std::string to_edge_list() const;

  /// The equal-measure {0,1} step graphon of the adjacency matrix.
  StepGraphon graphon() const;

 private:
  Matrix<double> adjacency_;
};

/// Assignment of every vertex to one of `parts()` non-empty parts.
class VertexPartition {
 public:
  explicit VertexPartition(std::vector<int> assignment);

  static VertexPartition trivial(int n);
  static VertexPartition discrete(int n);

  const std::vector<int>& assignment() const noexcept { return assignment_; }
  int part_of(int v) const { return assignment_[static_cast<std::size_t>(v)]; }
  int parts() const noexcept { return parts_; }
  int order() const noexcept { return static_cast<int>(assignment_.size()); }
  std::vector<int> sizes() const;
  /// Parts renumbered by first appearance (canonical form for comparisons).
  VertexPartition canonical() const;

  friend bool operator==(const VertexPartition& a, const VertexPartition& b) {
    return a.assignment_ == b.assignment_;
  }

 private:
  std::vector<int> assignment_;
  int parts_ = 0;
};

/// Ordered-pair edge densities d_ij between parts, 0/0 = 0.
Matrix<double> densities(const Graph& g, const VertexPartition& p);

/// Sum over parts of |P_i||P_j|/n^2 f(d_ij).
double partition_index(const Graph& g, const VertexPartition& p, const ConcaveFunctional& f);

/// The step graphon with steps |P_i|/n and values d_ij.
StepGraphon quotient_graphon(const Graph& g, const VertexPartition& p);

struct RegularityReport {
  double epsilon = 0.0;
  bool regular = true;
  std::optional<std::vector<int>> witness;
  /// max found |e(G[B]) - (1/2) sum d_ij |B∩P_i||B∩P_j|| / n^2
  double violation = 0.0;
  /// e(G[B]) minus the prediction, / n^2, for the best B found (signed).
  double deviation = 0.0;
  bool exhaustive = false;
};

struct RegularityOptions {
  int restarts = 50;
  std::uint64_t seed = 0;
  /// Enumerate all 2^n sets when n is at most this.
  int exhaustive_up_to = 0;
  int threads = 1;
};

/// Searches for B violating weak eps-regularity. `regular` means no witness
/// was found (exhaustive mode: none exists).
RegularityReport weak_regularity_check(const Graph& g, const VertexPartition& p, double eps,
                                       const RegularityOptions& options = {});

/// Signed e(G[B]) - (1/2) sum d_ij |B∩P_i||B∩P_j|, divided by n^2.
double regularity_deviation(const Graph& g, const VertexPartition& p, const std::vector<bool>& in);

struct PumpResult {
  VertexPartition partition;
  /// False when B splits no part (B empty, full, or a union of parts).
  bool refined = false;
};

/// Splits every part C into C ∩ B and C \ B, dropping empty pieces.
PumpResult index_pump(const Graph& g, const VertexPartition& p, const std::vector<int>& b);

struct PumpRound {
  int round = 0;
  int parts = 0;
  double index = 0.0;      ///< INT_{-x^2}(G; P) before the round's check
  double violation = 0.0;  ///< violation found by the check
  double decrease = 0.0;   ///< index drop caused by the pump (0 on the last row)
  bool below_quarter_eps_sq = false;
};

struct RegularityTrace {
  VertexPartition partition;
  std::vector<PumpRound> rounds;
  int pumps = 0;
};

class RegularityError : public std::runtime_error {
 public:
  RegularityError(const std::string& what, std::vector<PumpRound> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<PumpRound>& trace() const noexcept { return trace_; }

 private:
  std::vector<PumpRound> trace_;
};

/// Starting from the trivial partition, pumps with found witnesses until the
/// check passes. At most ceil(4/eps^2) pumps; each must strictly decrease the
/// index INT_{-x^2}.
RegularityTrace weak_regularity_partition(const Graph& g, double eps, const RegularityOptions& options = {});

struct MinPartitionOptions {
  long long moves = 200000;
  int restarts = 8;
  std::uint64_t seed = 0;
  /// Exhaustive search when n <= 12 and k <= 3.
  bool allow_exhaustive = true;
};

struct MinPartitionResult {
  VertexPartition partition;
  double index = 0.0;
  bool exhaustive = false;
  /// Distinct local optima seen across restarts, with their indices.
  std::vector<std::pair<VertexPartition, double>> local_optima;
};

/// Partition with exactly k non-empty parts minimizing INT_f(G; .).
MinPartitionResult min_int_partition(const Graph& g, int k, const ConcaveFunctional& f,
                                     const MinPartitionOptions& options = {});

struct IndexStage {
  int parts = 0;
  double index_f = 0.0;
  double index_negsq = 0.0;
  bool regular = false;
  double violation = 0.0;
  bool exhaustive = false;
};

struct StabilityRow {
  int parts = 0;
  double min_index = 0.0;
  int near_minimal = 0;
  int near_minimal_regular = 0;
};

struct FiniteIndexReport {
  int chosen = 0;  ///< first M in X whose minimizing partition passed
  std::vector<int> candidates;
  std::vector<IndexStage> chain;
  std::vector<StabilityRow> stability;
};

/// Walks M through {1, 2, 4, ..., 2^ceil(4/eps^2)}, minimizing INT_f with M
/// parts and checking weak eps-regularity, until one passes.
FiniteIndexReport finite_index_experiment(const Graph& g, double eps, const ConcaveFunctional& f,
                                          const RegularityOptions& check, const MinPartitionOptions& search);

}  // namespace graphonlab
