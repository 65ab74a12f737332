#include "graphonlab/weakstar.hpp"

#include "graphonlab/operations.hpp"
#include "graphonlab/parallel.hpp"
#include "graphonlab/random.hpp"
#include "graphonlab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace graphonlab {

// ----------------------------------------------------------- RectProfile

RectProfile::RectProfile(int depth, Matrix<double> cells) : depth_(depth), cells_(std::move(cells)) {
  const Index n = cells_.rows();
  if (cells_.cols() != n || n != (Index(1) << depth)) throw std::invalid_argument("profile must be 2^D x 2^D");
  prefix_ = Matrix<double>::Zero(n + 1, n + 1);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      prefix_(i + 1, j + 1) = cells_(i, j) + prefix_(i, j + 1) + prefix_(i + 1, j) - prefix_(i, j);
    }
  }
}

double RectProfile::rectangle(Index x0, Index x1, Index y0, Index y1) const {
  const Index n = side();
  if (x0 < 0 || y0 < 0 || x1 > n || y1 > n || x0 > x1 || y0 > y1) {
    throw std::out_of_range("rectangle outside the dyadic grid");
  }
  return prefix_(x1, y1) - prefix_(x0, y1) - prefix_(x1, y0) + prefix_(x0, y0);
}

double RectProfile::at(int level, Index i, Index j) const {
  if (level < 0 || level > depth_) throw std::out_of_range("level deeper than the profile");
  const Index scale = Index(1) << (depth_ - level);
  return rectangle(i * scale, (i + 1) * scale, j * scale, (j + 1) * scale);
}

namespace {

void check_depth(int depth) {
  if (depth < 0 || depth > kMaxProfileDepth) {
    throw std::invalid_argument("dyadic depth must be in [0, " + std::to_string(kMaxProfileDepth) + "]");
  }
}

Vector<double> dyadic_breakpoints(int depth) { return grid::uniform_breakpoints<double>(Index(1) << depth); }

}  // namespace

RectProfile rect_profile(const StepGraphon& w, int depth) {
  check_depth(depth);
  return RectProfile(depth, grid_integrals(w, dyadic_breakpoints(depth)));
}

double weakstar_pseudometric(const StepGraphon& w1, const StepGraphon& w2, int depth) {
  const Matrix<double> diff = rect_profile(w1, depth).cells() - rect_profile(w2, depth).cells();
  const Index n = diff.rows();
  double best = 0.0;
  Vector<double> column(n);
  for (Index a = 0; a < n; ++a) {
    column.setZero();
    for (Index b = a; b < n; ++b) {
      column += diff.row(b).transpose();
      double run = 0.0, hi = 0.0, lo = 0.0;
      for (Index j = 0; j < n; ++j) {
        run += column(j);
        hi = std::max(hi, run);
        lo = std::min(lo, run);
      }
      best = std::max(best, hi - lo);
    }
  }
  return best;
}

StepGraphon dyadic_stepping(const StepGraphon& w, int depth) {
  check_depth(depth);
  return step_to_grid(w, dyadic_breakpoints(depth));
}

StepGraphon dyadic_aggregate(const std::vector<StepGraphon>& ws, int depth) {
  if (ws.empty()) throw std::invalid_argument("aggregate of an empty sequence");
  check_depth(depth);
  const Index n = Index(1) << depth;
  Matrix<double> sum = Matrix<double>::Zero(n, n);
  for (const auto& w : ws) sum += dyadic_stepping(w, depth).values();
  return StepGraphon::uniform(sum / static_cast<double>(ws.size()));
}

// --------------------------------------------------------- stripe sampler

StripeSample sample_stripe_version(const StepGraphon& gamma, const StripeSampleConfig& config) {
  const int s = config.stripes_per_part;
  if (s < 1) throw std::invalid_argument("stripes_per_part must be at least 1");
  const OrderedPartition& p = config.base_partition;
  const Vector<double> bp = p.breakpoints();
  Rng rng(config.seed);
  StripeSample out{gamma, {}};
  std::vector<Segment<double>> segments;

  for (int part = 0; part < p.parts(); ++part) {
    const auto cells = p.cells_of(part);
    std::vector<double> start, local{0.0};
    for (Index c : cells) {
      start.push_back(bp(c));
      local.push_back(local.back() + p.cell_measures()(c));
    }
    const double m = local.back();
    auto cell_at = [&](double u) {
      const auto it = std::upper_bound(local.begin() + 1, local.end() - 1, u);
      return static_cast<std::size_t>(it - (local.begin() + 1));
    };
    std::vector<int> perm = rng.permutation(s);
    for (int q = 0; q < s; ++q) {
      const double a = m * q / s;
      const double b = q + 1 == s ? m : m * (q + 1) / s;
      const double shift = m * perm[static_cast<std::size_t>(q)] / s - a;
      std::vector<double> cuts{a, b};
      for (double c : local) {
        if (c > a && c < b) cuts.push_back(c);
        if (c - shift > a && c - shift < b) cuts.push_back(c - shift);
      }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double u0 = cuts[i], u1 = cuts[i + 1];
        if (!(u1 - u0 > 0.0)) continue;
        const double mid = 0.5 * (u0 + u1);
        const std::size_t rt = cell_at(mid);
        const std::size_t rs = cell_at(mid + shift);
        segments.push_back({start[rt] + (u0 - local[rt]), start[rs] + (u0 + shift - local[rs]), u1 - u0});
      }
    }
    out.permutations.push_back(std::move(perm));
  }
  if (s > 1) out.graphon = pull_back(gamma, std::move(segments));
  return out;
}

double sampler_tail_bound(int n) { return 2.0 * std::exp(-std::sqrt(static_cast<double>(n)) / 4.0); }

AttainmentRow attainment_row(const StepGraphon& gamma, const OrderedPartition& p, int n, int stripes,
                             std::uint64_t seed, int depth, const TestRectangle& rect) {
  if (n < 1) throw std::invalid_argument("sequence index n must be positive");
  const StepGraphon u = sample_stripe_version(gamma, {p, stripes, seed}).graphon;
  const StepGraphon stepped = stepping(gamma, p);
  AttainmentRow row;
  row.n = n;
  row.stripes = stripes;
  row.pseudometric = weakstar_pseudometric(u, stepped, depth);
  row.deviation = std::abs(rect_integral(u, rect.x0, rect.x1, rect.y0, rect.y1) -
                           rect_integral(stepped, rect.x0, rect.x1, rect.y0, rect.y1));
  row.threshold = std::pow(static_cast<double>(n), -0.25) + 4.0 / n;
  row.event = row.deviation > row.threshold;
  row.block_error = (block_integrals(u, p) - block_integrals(gamma, p)).cwiseAbs().maxCoeff();
  return row;
}

AttainmentReport stepping_attainment_trial(const std::vector<StepGraphon>& gammas, const std::vector<int>& n_values,
                                           const std::vector<int>& stripes, const OrderedPartition& p,
                                           std::uint64_t seed, int depth, int threads) {
  if (gammas.empty()) throw std::invalid_argument("stepping_attainment_trial needs a non-empty sequence");
  if (n_values.size() != gammas.size() || stripes.size() != gammas.size()) {
    throw std::invalid_argument("sequence, n values and stripe schedule must have equal length");
  }
  AttainmentReport report;
  report.rows = parallel_map(static_cast<int>(gammas.size()), threads, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    return attainment_row(gammas[k], p, n_values[k], stripes[k],
                          derive_seed(seed, "stripe", static_cast<std::uint64_t>(i)), depth);
  });
  int events = 0;
  for (const auto& r : report.rows) {
    events += r.event ? 1 : 0;
    report.max_block_error = std::max(report.max_block_error, r.block_error);
  }
  report.event_frequency = static_cast<double>(events) / static_cast<double>(report.rows.size());
  return report;
}

// ------------------------------------------------------------ shifting

StepGraphon shift_left_version(const StepGraphon& gamma, const Subset& b) {
  return apply_ordered_partition(gamma, b.shift_partition());
}

ShiftData shift_data(const std::vector<Subset>& sets, int depth) {
  check_depth(depth);
  const Index n = Index(1) << depth;
  const Vector<double> bp = dyadic_breakpoints(depth);
  ShiftData d;
  d.psi = Vector<double>::Zero(n);
  for (const auto& b : sets) d.psi += b.overlaps(bp) * static_cast<double>(n);
  if (!sets.empty()) d.psi /= static_cast<double>(sets.size());
  d.psi = d.psi.cwiseMax(0.0).cwiseMin(1.0);
  d.theta = Vector<double>::Zero(n + 1);
  for (Index c = 0; c < n; ++c) d.theta(c + 1) = d.theta(c) + d.psi(c) / static_cast<double>(n);
  d.xi = Vector<double>(n + 1);
  d.xi(0) = d.theta(n);
  for (Index c = 0; c < n; ++c) d.xi(c + 1) = d.xi(c) + (1.0 - d.psi(c)) / static_cast<double>(n);
  return d;
}

int tail_length(std::size_t n) { return static_cast<int>((n + 1) / 2); }

ImprovementReport improvement_experiment(const std::vector<StepGraphon>& gammas, const std::vector<Subset>& sets,
                                         const ConcaveFunctional& f, int depth) {
  if (gammas.empty()) throw std::invalid_argument("improvement_experiment needs a non-empty sequence");
  if (gammas.size() != sets.size()) throw std::invalid_argument("graphon and set sequences differ in length");
  const int tail = tail_length(gammas.size());
  const std::size_t first = gammas.size() - static_cast<std::size_t>(tail);
  std::vector<StepGraphon> plain(gammas.begin() + static_cast<std::ptrdiff_t>(first), gammas.end());
  std::vector<Subset> tail_sets(sets.begin() + static_cast<std::ptrdiff_t>(first), sets.end());
  std::vector<StepGraphon> shifted;
  for (std::size_t i = 0; i < plain.size(); ++i) shifted.push_back(shift_left_version(plain[i], tail_sets[i]));

  ImprovementReport r{dyadic_aggregate(plain, depth), dyadic_aggregate(shifted, depth), 0.0, 0.0, 0.0, {}};
  r.tail = tail;
  r.int_hat = int_f(r.w_hat, f);
  r.int_tilde = int_f(r.w_tilde_hat, f);
  r.gap = r.int_tilde - r.int_hat;
  r.shift = shift_data(tail_sets, depth);

  const Vector<double> bp = dyadic_breakpoints(depth);
  double mean = 0.0;
  r.epsilon = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < plain.size(); ++i) {
    const Vector<double> bg = tail_sets[i].overlaps(plain[i].breakpoints());
    const Vector<double> bh = tail_sets[i].overlaps(bp);
    const double dev = product_integral(plain[i], bg, bg) - product_integral(r.w_hat, bh, bh);
    mean += dev;
    r.epsilon = std::min(r.epsilon, std::abs(dev));
  }
  mean /= static_cast<double>(plain.size());
  r.sign = mean > 0 ? 1 : (mean < 0 ? -1 : 0);

  const double t1 = r.shift.theta(r.shift.theta.size() - 1);
  r.shifted_block = rect_integral(r.w_tilde_hat, 0.0, t1, 0.0, t1);
  const Vector<double> weights = r.shift.psi / static_cast<double>(r.shift.psi.size());
  r.baseline = product_integral(r.w_hat, weights, weights);
  r.claim_margin = r.sign * (r.shifted_block - r.baseline) - 0.5 * r.epsilon;
  return r;
}

EllShiftReport ell_part_shift_experiment(const std::vector<StepGraphon>& gammas,
                                         const std::vector<OrderedPartition>& partitions,
                                         const ConcaveFunctional& f, int depth) {
  if (gammas.empty()) throw std::invalid_argument("ell_part_shift_experiment needs a non-empty sequence");
  if (gammas.size() != partitions.size()) throw std::invalid_argument("graphon and partition sequences differ in length");
  const int ell = partitions.front().parts();
  for (const auto& p : partitions) {
    if (p.parts() != ell) throw std::invalid_argument("ordered partitions must all have the same number of parts");
  }
  const int tail = tail_length(gammas.size());
  const std::size_t first = gammas.size() - static_cast<std::size_t>(tail);
  EllShiftReport report;
  report.ell = ell;
  for (int stage = 0; stage <= ell; ++stage) {
    std::vector<StepGraphon> staged;
    for (std::size_t n = first; n < gammas.size(); ++n) {
      const OrderedPartition& p = partitions[n];
      std::vector<int> labels(p.labels().size());
      for (std::size_t c = 0; c < labels.size(); ++c) {
        const int l = p.labels()[c];
        labels[c] = l >= ell - stage ? l - (ell - stage) : stage;
      }
      staged.push_back(apply_ordered_partition(gammas[n], OrderedPartition(p.cell_measures(), std::move(labels))));
    }
    report.chain.push_back(int_f(dyadic_aggregate(staged, depth), f));
  }
  return report;
}

// --------------------------------------------------------------- families

StepGraphon noel_family(int ell, int n, std::uint64_t seed) {
  if (ell < 1 || n < 1 || n % ell != 0) throw std::invalid_argument("noel_family needs n divisible by l");
  Matrix<double> v = Graph::gnp(n, 0.5, seed).adjacency();
  const int m = n / ell;
  v.topLeftCorner(m, m).setConstant(kNoelValue);
  return StepGraphon::uniform(v);
}

NoelRegionReport noel_region_check(int ell, int n, std::uint64_t seed, int copies, int depth) {
  if (copies < 1) throw std::invalid_argument("noel_region_check needs at least one copy");
  check_depth(depth);
  const StepGraphon g = noel_family(ell, n, seed);
  const int m = n / ell;
  const double r = static_cast<double>(m) / n;
  OrderedPartition base = OrderedPartition::trivial();
  if (ell > 1) {
    Vector<double> bp(3);
    bp << 0.0, r, 1.0;
    base = OrderedPartition::intervals(bp);
  }
  std::vector<StepGraphon> samples;
  for (int c = 0; c < copies; ++c) {
    samples.push_back(sample_stripe_version(g, {base, m, derive_seed(seed, "noel-region", static_cast<std::uint64_t>(c))}).graphon);
  }
  const StepGraphon agg = dyadic_aggregate(samples, depth);
  const Index cells = Index(1) << depth;
  const double h = 1.0 / static_cast<double>(cells);
  NoelRegionReport rep;
  rep.min_region_average = rep.min_inside_value = 1.0;
  rep.max_region_average = rep.max_inside_value = 0.0;
  for (Index i = 0; i < cells; ++i) {
    for (Index j = 0; j < cells; ++j) {
      const double x0 = i * h, x1 = std::min(r, (i + 1) * h);
      const double y0 = j * h, y1 = std::min(r, (j + 1) * h);
      if (!(x1 > x0 && y1 > y0)) continue;
      const double area = (x1 - x0) * (y1 - y0);
      if (area < 1e-15) continue;
      double avg = 0.0;
      for (const auto& s : samples) avg += rect_integral(s, x0, x1, y0, y1) / area;
      avg /= static_cast<double>(samples.size());
      ++rep.cells_meeting;
      rep.min_region_average = std::min(rep.min_region_average, avg);
      rep.max_region_average = std::max(rep.max_region_average, avg);
      if ((i + 1) * h <= r + 1e-12 && (j + 1) * h <= r + 1e-12) {
        ++rep.cells_inside;
        rep.min_inside_value = std::min(rep.min_inside_value, agg.value(i, j));
        rep.max_inside_value = std::max(rep.max_inside_value, agg.value(i, j));
      }
    }
  }
  return rep;
}

NoelMixingReport noel_mixing(int ell, int n, std::uint64_t seed, int copies, int depth) {
  if (copies < 1) throw std::invalid_argument("noel_mixing needs at least one copy");
  const StepGraphon g = noel_family(ell, n, seed);
  std::vector<StepGraphon> samples;
  for (int c = 0; c < copies; ++c) {
    samples.push_back(
        sample_stripe_version(g, {OrderedPartition::trivial(), n, derive_seed(seed, "noel-mix", static_cast<std::uint64_t>(c))})
            .graphon);
  }
  NoelMixingReport rep{dyadic_aggregate(samples, depth)};
  rep.max_gap = (rep.aggregate.values().array() - 0.5).abs().maxCoeff();
  rep.int_h = int_f(rep.aggregate, ConcaveFunctional::entropy());
  return rep;
}

StepGraphon chessboard_family(int k) {
  if (k < 1) throw std::invalid_argument("chessboard_family needs k >= 1");
  const int n = 2 * (k + 2);
  const int board = 2 * (k + 1);
  Matrix<double> v(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) v(i, j) = (i < board && j < board) ? static_cast<double>((i + j) % 2) : 0.5;
  }
  return StepGraphon::uniform(v);
}

}  // namespace graphonlab
