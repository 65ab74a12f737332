#pragma once

#include "graphonlab/step_graphon.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphonlab {

/// Largest step count handled by exhaustive bilinear enumeration (2^k sets).
inline constexpr Index kBilinearExactBudget = 24;
/// Largest step count for which the symmetric cut-norm is certified exactly.
inline constexpr Index kSymmetricExactSteps = 3;
/// Largest cell count for exhaustive permutation search in cut_distance.
inline constexpr Index kCutDistanceExactCells = 8;

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CutMode { symmetric, bilinear };

/// A cut-norm value with a certificate. Witnesses hold per-step inclusion
/// fractions t_i = |A ∩ step_i| / |step_i|.
struct CutNormResult {
  double value = 0.0;
  /// Sign of the attained integral (+1, -1, or 0 for a zero kernel).
  int sign = 0;
  std::vector<double> witness_a;
  std::vector<double> witness_b;
  CutMode mode = CutMode::bilinear;
  bool exact = false;
  /// Certified upper bound (the bilinear value in symmetric mode).
  double upper_bound = 0.0;
  std::vector<std::string> warnings;
};

/// Integral of D over A x B for fractional witnesses (signed).
double cut_objective(const Kernel& d, const std::vector<double>& a, const std::vector<double>& b);

/// sup over A, B of |∫_A ∫_B D|, exact, by enumerating A over unions of steps.
/// Throws BudgetError for more than kBilinearExactBudget steps.
CutNormResult cutnorm_bilinear_exact(const Kernel& d);

struct SymmetricOptions {
  int restarts = 16;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// sup over A of |∫_A ∫_A D|. Exact (face enumeration of the box) for at most
/// kSymmetricExactSteps steps, multi-start coordinate ascent otherwise.
CutNormResult cutnorm_symmetric(const Kernel& d, const SymmetricOptions& options = {});

/// Exact maximum of t' M t over t in [0,1]^k by enumerating the 3^k faces of
/// the box and solving for the stationary point inside each.
double max_box_quadratic_exact(const Matrix<double>& m, std::vector<double>* argmax = nullptr);

struct CutWitness {
  std::vector<double> fractions;  ///< per-step fractions on the common grid of Gamma and W
  std::vector<double> grid;       ///< breakpoints of that grid
  double deviation = 0.0;         ///< ∫_B∫_B (Gamma - W), signed
  int sign = 0;
};

/// A set B with |∫_B∫_B (Gamma - W)| >= eps, if the symmetric search finds one.
std::optional<CutWitness> cutnorm_witness_set(const StepGraphon& gamma, const StepGraphon& w, double eps,
                                              const SymmetricOptions& options = {});

enum class CutDistanceMode { exact_small, heuristic };

struct CutDistanceOptions {
  CutDistanceMode mode = CutDistanceMode::exact_small;
  /// Annealing iterations in heuristic mode.
  int budget = 2000;
  /// In heuristic mode, split every common cell into this many equal pieces.
  int split = 1;
  std::uint64_t seed = 0;
};

struct CutDistanceResult {
  /// min over the searched cell permutations of the bilinear cut-norm of
  /// (W1 permuted) - W2: an upper bound on the cut distance.
  double value = 0.0;
  std::vector<int> permutation;
  std::vector<double> grid;
  long long evaluated = 0;
  bool exact_in_class = false;
};

CutDistanceResult cut_distance(const StepGraphon& w1, const StepGraphon& w2,
                               const CutDistanceOptions& options = {});

/// Smallest n <= max_cells with every breakpoint of both graphons on the
/// grid {0, 1/n, ..., 1}; nullopt if none.
std::optional<Index> common_uniform_grid(const StepGraphon& w1, const StepGraphon& w2, Index max_cells);

}  // namespace graphonlab
