#pragma once

#include "graphonlab/functional.hpp"
#include "graphonlab/partition.hpp"
#include "graphonlab/rearrangement.hpp"
#include "graphonlab/step_graphon.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace graphonlab {

/// The same step function expressed on a grid refining its own.
template <typename Scalar, typename Range>
BasicStepFunction<Scalar, Range> refine(const BasicStepFunction<Scalar, Range>& w,
                                        const Vector<Scalar>& fine_breakpoints) {
  const auto where = grid::locate(fine_breakpoints, w.breakpoints());
  const Index k = static_cast<Index>(where.size());
  Matrix<Scalar> values(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      values(i, j) = w.values()(where[static_cast<std::size_t>(i)], where[static_cast<std::size_t>(j)]);
    }
  }
  return BasicStepFunction<Scalar, Range>(grid::measures_of(fine_breakpoints), std::move(values));
}

/// Both arguments expressed on their common refinement.
template <typename Scalar, typename RangeA, typename RangeB>
std::pair<BasicStepFunction<Scalar, RangeA>, BasicStepFunction<Scalar, RangeB>> align(
    const BasicStepFunction<Scalar, RangeA>& a, const BasicStepFunction<Scalar, RangeB>& b) {
  const Vector<Scalar> g = grid::merge(a.breakpoints(), b.breakpoints());
  return {refine(a, g), refine(b, g)};
}

/// W1 - W2 on the common refinement.
template <typename Scalar>
BasicKernel<Scalar> difference(const BasicStepGraphon<Scalar>& w1, const BasicStepGraphon<Scalar>& w2) {
  auto [a, b] = align(w1, w2);
  return BasicKernel<Scalar>(a.measures(), a.values() - b.values());
}

/// Integral of f(W) over I^2; exact for step functions.
template <typename Scalar, typename Range>
Scalar int_f(const BasicStepFunction<Scalar, Range>& w, const ConcaveFunctional& f) {
  const Index k = w.steps();
  Scalar total(0);
  for (Index i = 0; i < k; ++i) {
    Scalar row(0);
    for (Index j = 0; j < k; ++j) {
      row += w.measures()(j) * Scalar(f(static_cast<double>(w.values()(i, j))));
    }
    total += w.measures()(i) * row;
  }
  return total;
}

/// Integrals of W over products of cells of the grid `breakpoints`.
template <typename Scalar, typename Range>
Matrix<Scalar> grid_integrals(const BasicStepFunction<Scalar, Range>& w, const Vector<Scalar>& breakpoints) {
  const Matrix<Scalar> o = grid::overlap(breakpoints, w.breakpoints());
  return o * w.values() * o.transpose();
}

/// Integral of W over [x0, x1) x [y0, y1).
template <typename Scalar, typename Range>
Scalar rect_integral(const BasicStepFunction<Scalar, Range>& w, Scalar x0, Scalar x1, Scalar y0, Scalar y1) {
  const Vector<Scalar> bp = w.breakpoints();
  Vector<Scalar> ox(w.steps()), oy(w.steps());
  for (Index i = 0; i < w.steps(); ++i) {
    ox(i) = std::max(Scalar(0), std::min(x1, bp(i + 1)) - std::max(x0, bp(i)));
    oy(i) = std::max(Scalar(0), std::min(y1, bp(i + 1)) - std::max(y0, bp(i)));
  }
  return ox.dot(w.values() * oy);
}

/// Integral of W over A x B for fractional inclusion vectors (|A ∩ step_i| = a_i).
template <typename Scalar, typename Range>
Scalar product_integral(const BasicStepFunction<Scalar, Range>& w, const Vector<Scalar>& a,
                        const Vector<Scalar>& b) {
  return a.dot(w.values() * b);
}

/// Integrals of W over P_i x P_j for all pairs of parts.
template <typename Scalar, typename Range>
Matrix<Scalar> block_integrals(const BasicStepFunction<Scalar, Range>& w,
                               const BasicOrderedPartition<Scalar>& p) {
  const Vector<Scalar> g = grid::merge(w.breakpoints(), p.breakpoints());
  const auto labels = p.labels_on(g);
  const Matrix<Scalar> o = grid::overlap(g, w.breakpoints());
  Matrix<Scalar> assign = Matrix<Scalar>::Zero(p.parts(), g.size() - 1);
  for (std::size_t c = 0; c < labels.size(); ++c) assign(labels[c], static_cast<Index>(c)) = Scalar(1);
  const Matrix<Scalar> e = assign * o;  // parts x steps: |P_i ∩ step_j|
  return e * w.values() * e.transpose();
}

/// Block densities of W on P: average of W over each P_i x P_j.
template <typename Scalar, typename Range>
Matrix<Scalar> block_averages(const BasicStepFunction<Scalar, Range>& w,
                              const BasicOrderedPartition<Scalar>& p) {
  const Vector<Scalar> m = p.part_measures();
  for (Index i = 0; i < m.size(); ++i) {
    if (!(m(i) > Scalar(0))) throw PartitionError("stepping over an empty part");
  }
  return block_integrals(w, p).cwiseQuotient(m * m.transpose());
}

/// The stepping of W over P: constant on each P_i x P_j with W's average there.
/// Expressed on P's own cell grid.
template <typename Scalar, typename Range>
BasicStepFunction<Scalar, Range> stepping(const BasicStepFunction<Scalar, Range>& w,
                                          const BasicOrderedPartition<Scalar>& p) {
  const Matrix<Scalar> avg = block_averages(w, p);
  const Index k = p.cells();
  Matrix<Scalar> values(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      values(i, j) = avg(p.labels()[static_cast<std::size_t>(i)], p.labels()[static_cast<std::size_t>(j)]);
    }
  }
  return BasicStepFunction<Scalar, Range>(p.cell_measures(), std::move(values));
}

/// The stepping compressed to one step per part (a version of the stepping
/// whenever the parts are intervals in label order).
template <typename Scalar, typename Range>
BasicStepFunction<Scalar, Range> quotient(const BasicStepFunction<Scalar, Range>& w,
                                          const BasicOrderedPartition<Scalar>& p) {
  return BasicStepFunction<Scalar, Range>(p.part_measures(), block_averages(w, p));
}

/// Stepping over the interval partition given by `breakpoints`.
template <typename Scalar, typename Range>
BasicStepFunction<Scalar, Range> step_to_grid(const BasicStepFunction<Scalar, Range>& w,
                                              const Vector<Scalar>& breakpoints) {
  const Vector<Scalar> m = grid::measures_of(breakpoints);
  return BasicStepFunction<Scalar, Range>(m, grid_integrals(w, breakpoints).cwiseQuotient(m * m.transpose()));
}

/// The version <J>W = W(gamma_J^{-1}(x), gamma_J^{-1}(y)).
template <typename Scalar, typename Range>
BasicStepFunction<Scalar, Range> apply_ordered_partition(const BasicStepFunction<Scalar, Range>& w,
                                                         const BasicOrderedPartition<Scalar>& j) {
  return BasicRearrangementMap<Scalar>(j).apply(w);
}

/// L1 distance on the common refinement.
template <typename Scalar, typename RangeA, typename RangeB>
Scalar l1_distance(const BasicStepFunction<Scalar, RangeA>& w1, const BasicStepFunction<Scalar, RangeB>& w2) {
  auto [a, b] = align(w1, w2);
  const Vector<Scalar>& m = a.measures();
  return m.dot((a.values() - b.values()).cwiseAbs() * m);
}

/// (value, total measure) pairs, sorted by value, equal values merged within `tol`.
template <typename Scalar, typename Range>
std::vector<std::pair<Scalar, Scalar>> value_histogram(const BasicStepFunction<Scalar, Range>& w,
                                                       Scalar tol = Scalar(1e-12)) {
  std::vector<std::pair<Scalar, Scalar>> raw;
  raw.reserve(static_cast<std::size_t>(w.steps() * w.steps()));
  for (Index i = 0; i < w.steps(); ++i) {
    for (Index j = 0; j < w.steps(); ++j) {
      raw.emplace_back(w.values()(i, j), w.measures()(i) * w.measures()(j));
    }
  }
  std::sort(raw.begin(), raw.end());
  std::vector<std::pair<Scalar, Scalar>> out;
  for (const auto& [v, m] : raw) {
    if (!out.empty() && std::abs(static_cast<double>(v - out.back().first)) <= static_cast<double>(tol)) {
      out.back().second += m;
    } else {
      out.emplace_back(v, m);
    }
  }
  return out;
}

template <typename Scalar, typename Range>
struct AdaptiveStepping {
  BasicOrderedPartition<Scalar> partition;
  BasicStepFunction<Scalar, Range> stepped;
  Scalar difference;      ///< |int_f(W) - int_f(stepping)|
  int halvings;           ///< uniform halvings applied to J (-1: native grid used)
  bool native;            ///< true when J ∨ grid(W) was returned
};

/// Interval refinement I of the interval partition J with
/// |int_f(W) - int_f(W stepped on I)| < eps. Halves J uniformly until the
/// target is met; falls back to J ∨ grid(W), which is exact for step functions.
template <typename Scalar, typename Range>
AdaptiveStepping<Scalar, Range> adaptive_stepping(const BasicStepFunction<Scalar, Range>& w,
                                                  const BasicOrderedPartition<Scalar>& j,
                                                  const ConcaveFunctional& f, Scalar eps) {
  if (!(eps > Scalar(0))) throw std::invalid_argument("adaptive_stepping needs eps > 0");
  if (!j.is_interval_partition()) throw PartitionError("adaptive_stepping needs an interval partition");
  const Scalar target = int_f(w, f);
  const Vector<Scalar> jb = j.breakpoints();
  // J's parts as intervals, in positional order.
  std::vector<Scalar> cuts;
  for (Index c = 0; c < jb.size(); ++c) {
    if (c == 0 || c + 1 == jb.size() ||
        j.labels()[static_cast<std::size_t>(c)] != j.labels()[static_cast<std::size_t>(c - 1)]) {
      cuts.push_back(jb(c));
    }
  }
  const Vector<Scalar> jcuts = Eigen::Map<const Vector<Scalar>>(cuts.data(), static_cast<Index>(cuts.size()));
  const Vector<Scalar> native_bp = grid::merge(jcuts, w.breakpoints());
  const Index native_cells = native_bp.size() - 1;

  // Every native cell lies inside one step of W, so the stepping is W itself.
  auto native = [&]() {
    auto part = BasicOrderedPartition<Scalar>::intervals(native_bp);
    auto stepped = refine(w, native_bp);
    return AdaptiveStepping<Scalar, Range>{std::move(part), std::move(stepped), Scalar(0), -1, true};
  };

  for (int level = 0;; ++level) {
    const Index pieces = Index(1) << level;
    const Index cells = (jcuts.size() - 1) * pieces;
    if (cells >= native_cells || level > 30) return native();
    Vector<Scalar> bp(cells + 1);
    for (Index c = 0; c + 1 < jcuts.size(); ++c) {
      for (Index q = 0; q < pieces; ++q) {
        bp(c * pieces + q) = jcuts(c) + (jcuts(c + 1) - jcuts(c)) * Scalar(q) / Scalar(pieces);
      }
    }
    bp(cells) = Scalar(1);
    auto part = BasicOrderedPartition<Scalar>::intervals(bp);
    auto stepped = stepping(w, part);
    const Scalar diff = std::abs(target - int_f(stepped, f));
    if (diff < eps) {
      return AdaptiveStepping<Scalar, Range>{std::move(part), std::move(stepped), diff, level, false};
    }
  }
}

}  // namespace graphonlab
