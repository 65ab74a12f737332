#pragma once

#include "graphonlab/functional.hpp"
#include "graphonlab/partition.hpp"
#include "graphonlab/step_graphon.hpp"

#include <cstdint>
#include <vector>

namespace graphonlab {

inline constexpr int kMaxProfileDepth = 12;

/// Integrals of a graphon over the dyadic cells of depth D, with prefix sums
/// for grid-aligned rectangles.
class RectProfile {
 public:
  RectProfile(int depth, Matrix<double> cells);

  int depth() const noexcept { return depth_; }
  Index side() const noexcept { return cells_.rows(); }
  /// Integral over base cell (i, j) of the 2^D x 2^D grid.
  const Matrix<double>& cells() const noexcept { return cells_; }
  /// Integral over [x0, x1) x [y0, y1) in units of 2^-D.
  double rectangle(Index x0, Index x1, Index y0, Index y1) const;
  /// Integral over the dyadic cell (i, j) of the coarser depth `level`.
  double at(int level, Index i, Index j) const;

 private:
  int depth_;
  Matrix<double> cells_;
  Matrix<double> prefix_;  // (N+1) x (N+1)
};

RectProfile rect_profile(const StepGraphon& w, int depth);

/// max over grid-aligned rectangles at depth D of |∫∫ (W1 - W2)|.
double weakstar_pseudometric(const StepGraphon& w1, const StepGraphon& w2, int depth);

/// Stepping of W onto the uniform grid with 2^D cells.
StepGraphon dyadic_stepping(const StepGraphon& w, int depth);

/// Mean of the depth-D steppings.
StepGraphon dyadic_aggregate(const std::vector<StepGraphon>& ws, int depth);

struct StripeSampleConfig {
  OrderedPartition base_partition = OrderedPartition::trivial();
  int stripes_per_part = 1;
  std::uint64_t seed = 0;
};

struct StripeSample {
  StepGraphon graphon;
  /// permutations[j][q]: source stripe placed at position q of part j.
  std::vector<std::vector<int>> permutations;
};

/// Cuts every part into s equal-measure stripes (in the part's own left to
/// right order) and permutes them uniformly at random within each part.
StripeSample sample_stripe_version(const StepGraphon& gamma, const StripeSampleConfig& config);

struct TestRectangle {
  double x0 = 0.0, x1 = 0.5, y0 = 0.0, y1 = 0.5;
};

struct AttainmentRow {
  int n = 0;
  int stripes = 0;
  double pseudometric = 0.0;  ///< against the stepping of Gamma_n over P at depth D
  double deviation = 0.0;     ///< |∫∫_R U_n - ∫∫_R stepping| on the test rectangle R
  double threshold = 0.0;     ///< n^{-1/4} + 4/n
  bool event = false;         ///< deviation > threshold
  double block_error = 0.0;   ///< max over parts K, L of |∫∫_{KxL} U_n - ∫∫_{KxL} Gamma_n|
};

struct AttainmentReport {
  std::vector<AttainmentRow> rows;
  double event_frequency = 0.0;
  double max_block_error = 0.0;
};

/// 2 exp(-sqrt(n)/4).
double sampler_tail_bound(int n);

AttainmentRow attainment_row(const StepGraphon& gamma, const OrderedPartition& p, int n, int stripes,
                             std::uint64_t seed, int depth, const TestRectangle& rect = {});

/// One sample U_n ~ W(Gamma_n, P, s_n) per entry; n_values[i] labels entry i.
AttainmentReport stepping_attainment_trial(const std::vector<StepGraphon>& gammas, const std::vector<int>& n_values,
                                           const std::vector<int>& stripes, const OrderedPartition& p,
                                           std::uint64_t seed, int depth, int threads = 1);

/// The version with B packed to the left of I and I \ B after it.
StepGraphon shift_left_version(const StepGraphon& gamma, const Subset& b);

/// Empirical psi on the dyadic grid and its cumulative maps, sampled at the
/// grid points 0, 1/N, ..., 1.
struct ShiftData {
  Vector<double> psi;
  Vector<double> theta;
  Vector<double> xi;
};

ShiftData shift_data(const std::vector<Subset>& sets, int depth);

struct ImprovementReport {
  StepGraphon w_hat;
  StepGraphon w_tilde_hat;
  double int_hat = 0.0;
  double int_tilde = 0.0;
  double gap = 0.0;  ///< int_tilde - int_hat
  ShiftData shift;
  double epsilon = 0.0;        ///< min over the tail of |∫∫_{B_n^2} (Gamma_n - W_hat)|
  int sign = 0;                ///< sign of the mean tail deviation
  double shifted_block = 0.0;  ///< ∫∫ over [0, theta(1)]^2 of W_tilde_hat
  double baseline = 0.0;       ///< ∫∫ W_hat psi(x) psi(y)
  double claim_margin = 0.0;   ///< sign * (shifted_block - baseline) - epsilon / 2
  int tail = 0;
};

/// Number of trailing elements used for aggregates: ceil(N / 2).
int tail_length(std::size_t n);

ImprovementReport improvement_experiment(const std::vector<StepGraphon>& gammas, const std::vector<Subset>& sets,
                                         const ConcaveFunctional& f, int depth);

struct EllShiftReport {
  int ell = 0;
  /// int_f of the stage aggregates S_0, ..., S_ell.
  std::vector<double> chain;
};

/// Stage i applies (C_{l-i+1}, ..., C_l, rest) to each Gamma_n, so stage l
/// is the full ordered partition and each stage shifts one more part left.
EllShiftReport ell_part_shift_experiment(const std::vector<StepGraphon>& gammas,
                                         const std::vector<OrderedPartition>& partitions,
                                         const ConcaveFunctional& f, int depth);

inline constexpr double kNoelValue = 0.7;

/// Seeded G(n, 1/2) graphon with the top-left (n/l) x (n/l) block set to 0.7.
StepGraphon noel_family(int ell, int n, std::uint64_t seed);

struct NoelRegionReport {
  double min_region_average = 0.0;
  double max_region_average = 0.0;
  int cells_meeting = 0;
  int cells_inside = 0;
  /// Aggregate values on cells inside the region.
  double min_inside_value = 0.0;
  double max_inside_value = 0.0;
};

/// Shuffles vertices within [0, 1/l) and within the rest, aggregates `copies`
/// samples at depth D, and reports averages over the 0.7 region per cell.
NoelRegionReport noel_region_check(int ell, int n, std::uint64_t seed, int copies, int depth);

struct NoelMixingReport {
  StepGraphon aggregate;
  double max_gap = 0.0;  ///< max |aggregate - 1/2|
  double int_h = 0.0;
};

/// Uniform vertex shuffles of noel_family(l, n), aggregated at a coarse depth.
NoelMixingReport noel_mixing(int ell, int n, std::uint64_t seed, int copies, int depth);

/// 2(k+2) equal cells: 0/1 chessboard on the first 2(k+1), 1/2 on the rest.
StepGraphon chessboard_family(int k);

}  // namespace graphonlab
