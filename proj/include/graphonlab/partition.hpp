#pragma once

#include "graphonlab/step_graphon.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace graphonlab {

/// Breakpoints closer than this are treated as the same point when grids are merged.
inline constexpr double kGridTolerance = 1e-12;

class PartitionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace grid {

template <typename Scalar>
Vector<Scalar> breakpoints_of(const Vector<Scalar>& measures) {
  Vector<Scalar> b(measures.size() + 1);
  b(0) = Scalar(0);
  for (Index i = 0; i < measures.size(); ++i) b(i + 1) = b(i) + measures(i);
  b(measures.size()) = Scalar(1);
  return b;
}

template <typename Scalar>
Vector<Scalar> measures_of(const Vector<Scalar>& breakpoints) {
  const Index k = breakpoints.size() - 1;
  Vector<Scalar> m(k);
  for (Index i = 0; i < k; ++i) m(i) = breakpoints(i + 1) - breakpoints(i);
  return m;
}

/// Sorted union of two breakpoint lists, points within kGridTolerance merged.
template <typename Scalar>
Vector<Scalar> merge(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  std::vector<Scalar> all(a.data(), a.data() + a.size());
  all.insert(all.end(), b.data(), b.data() + b.size());
  std::sort(all.begin(), all.end());
  std::vector<Scalar> out;
  for (Scalar x : all) {
    if (out.empty() || std::abs(static_cast<double>(x - out.back())) > kGridTolerance) {
      out.push_back(x);
    }
  }
  out.front() = Scalar(0);
  if (std::abs(static_cast<double>(out.back() - Scalar(1))) <= kGridTolerance) {
    out.back() = Scalar(1);
  }
  return Eigen::Map<Vector<Scalar>>(out.data(), static_cast<Index>(out.size()));
}

/// For each cell of `fine`, the cell of `coarse` containing its midpoint.
/// `fine` must refine `coarse`.
template <typename Scalar>
std::vector<Index> locate(const Vector<Scalar>& fine, const Vector<Scalar>& coarse) {
  std::vector<Index> out(static_cast<std::size_t>(fine.size() - 1));
  Index c = 0;
  for (Index i = 0; i + 1 < fine.size(); ++i) {
    const Scalar mid = (fine(i) + fine(i + 1)) / Scalar(2);
    while (c + 2 < coarse.size() && mid >= coarse(c + 1)) ++c;
    out[static_cast<std::size_t>(i)] = c;
  }
  return out;
}

/// n equal cells.
template <typename Scalar>
Vector<Scalar> uniform_breakpoints(Index n) {
  Vector<Scalar> b(n + 1);
  for (Index i = 0; i <= n; ++i) b(i) = Scalar(i) / Scalar(n);
  return b;
}

/// Overlap lengths |cell_p(rows) ∩ cell_i(cols)| between two grids.
template <typename Scalar>
Matrix<Scalar> overlap(const Vector<Scalar>& rows, const Vector<Scalar>& cols) {
  Matrix<Scalar> o = Matrix<Scalar>::Zero(rows.size() - 1, cols.size() - 1);
  Index j0 = 0;
  for (Index p = 0; p + 1 < rows.size(); ++p) {
    while (j0 + 1 < cols.size() && cols(j0 + 1) <= rows(p)) ++j0;
    for (Index j = j0; j + 1 < cols.size() && cols(j) < rows(p + 1); ++j) {
      const Scalar len = std::min(rows(p + 1), cols(j + 1)) - std::max(rows(p), cols(j));
      if (len > Scalar(0)) o(p, j) = len;
    }
  }
  return o;
}

}  // namespace grid

/// A partition of I into finitely many parts, each a union of cells of an
/// interval grid. Part order is the label order: label 0 is the first part.
template <typename Scalar>
class BasicOrderedPartition {
 public:
  BasicOrderedPartition(Vector<Scalar> cell_measures, std::vector<int> labels)
      : measures_(std::move(cell_measures)), labels_(std::move(labels)) {
    detail::validate_measures(measures_);
    if (static_cast<Index>(labels_.size()) != measures_.size()) {
      throw PartitionError("partition needs one label per cell");
    }
    int max_label = -1;
    for (int l : labels_) {
      if (l < 0) throw PartitionError("partition labels must be non-negative");
      max_label = std::max(max_label, l);
    }
    parts_ = max_label + 1;
    std::vector<bool> seen(static_cast<std::size_t>(parts_), false);
    for (int l : labels_) seen[static_cast<std::size_t>(l)] = true;
    for (int p = 0; p < parts_; ++p) {
      if (!seen[static_cast<std::size_t>(p)]) {
        std::ostringstream os;
        os << "partition part " << p << " is empty";
        throw PartitionError(os.str());
      }
    }
  }

  /// One part per interval between consecutive breakpoints.
  static BasicOrderedPartition intervals(const Vector<Scalar>& breakpoints) {
    std::vector<int> labels(static_cast<std::size_t>(breakpoints.size() - 1));
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i);
    return BasicOrderedPartition(grid::measures_of(breakpoints), std::move(labels));
  }

  static BasicOrderedPartition uniform(Index n) {
    return intervals(grid::uniform_breakpoints<Scalar>(n));
  }

  static BasicOrderedPartition trivial() { return uniform(1); }

  /// The step partition of a step function.
  template <typename Range>
  static BasicOrderedPartition steps_of(const BasicStepFunction<Scalar, Range>& w) {
    return intervals(w.breakpoints());
  }

  const Vector<Scalar>& cell_measures() const noexcept { return measures_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  Index cells() const noexcept { return measures_.size(); }
  int parts() const noexcept { return parts_; }
  Vector<Scalar> breakpoints() const { return grid::breakpoints_of(measures_); }

  Vector<Scalar> part_measures() const {
    Vector<Scalar> m = Vector<Scalar>::Zero(parts_);
    for (Index c = 0; c < cells(); ++c) m(labels_[static_cast<std::size_t>(c)]) += measures_(c);
    return m;
  }

  std::vector<Index> cells_of(int part) const {
    std::vector<Index> out;
    for (Index c = 0; c < cells(); ++c) {
      if (labels_[static_cast<std::size_t>(c)] == part) out.push_back(c);
    }
    return out;
  }

  bool is_interval_partition() const {
    for (Index c = 1; c < cells(); ++c) {
      if (labels_[static_cast<std::size_t>(c)] == labels_[static_cast<std::size_t>(c - 1)]) continue;
      for (Index d = 0; d < c - 1; ++d) {
        if (labels_[static_cast<std::size_t>(d)] == labels_[static_cast<std::size_t>(c)]) return false;
      }
    }
    return true;
  }

  /// Same partition expressed on a finer grid (which must refine this one's grid).
  BasicOrderedPartition on_grid(const Vector<Scalar>& fine_breakpoints) const {
    const auto where = grid::locate(fine_breakpoints, breakpoints());
    std::vector<int> labels(where.size());
    for (std::size_t i = 0; i < where.size(); ++i) labels[i] = labels_[static_cast<std::size_t>(where[i])];
    return BasicOrderedPartition(grid::measures_of(fine_breakpoints), std::move(labels));
  }

  /// Label per cell of a finer grid.
  std::vector<int> labels_on(const Vector<Scalar>& fine_breakpoints) const {
    const auto where = grid::locate(fine_breakpoints, breakpoints());
    std::vector<int> labels(where.size());
    for (std::size_t i = 0; i < where.size(); ++i) labels[i] = labels_[static_cast<std::size_t>(where[i])];
    return labels;
  }

 private:
  Vector<Scalar> measures_;
  std::vector<int> labels_;
  int parts_ = 0;
};

using OrderedPartition = BasicOrderedPartition<double>;

/// Coarsest partition refining both P and Q. Parts are the non-empty
/// intersections, numbered by first appearance from the left.
template <typename Scalar>
BasicOrderedPartition<Scalar> common_refinement(const BasicOrderedPartition<Scalar>& p,
                                                const BasicOrderedPartition<Scalar>& q) {
  const Vector<Scalar> fine = grid::merge(p.breakpoints(), q.breakpoints());
  const auto lp = p.labels_on(fine);
  const auto lq = q.labels_on(fine);
  std::map<std::pair<int, int>, int> ids;
  std::vector<int> labels(lp.size());
  for (std::size_t i = 0; i < lp.size(); ++i) {
    auto [it, inserted] = ids.try_emplace({lp[i], lq[i]}, static_cast<int>(ids.size()));
    labels[i] = it->second;
  }
  return BasicOrderedPartition<Scalar>(grid::measures_of(fine), std::move(labels));
}

/// True when every part of `fine` lies inside a single part of `coarse`.
template <typename Scalar>
bool refines(const BasicOrderedPartition<Scalar>& fine, const BasicOrderedPartition<Scalar>& coarse) {
  const Vector<Scalar> g = grid::merge(fine.breakpoints(), coarse.breakpoints());
  const auto lf = fine.labels_on(g);
  const auto lc = coarse.labels_on(g);
  std::map<int, int> owner;
  for (std::size_t i = 0; i < lf.size(); ++i) {
    auto [it, inserted] = owner.try_emplace(lf[i], lc[i]);
    if (!inserted && it->second != lc[i]) return false;
  }
  return true;
}

/// A grid-aligned subset of I: a mask over the cells of an interval grid.
template <typename Scalar>
class BasicSubset {
 public:
  BasicSubset(Vector<Scalar> cell_measures, std::vector<bool> mask)
      : measures_(std::move(cell_measures)), mask_(std::move(mask)) {
    detail::validate_measures(measures_);
    if (static_cast<Index>(mask_.size()) != measures_.size()) {
      throw PartitionError("subset needs one flag per cell");
    }
  }

  /// [a, b) as a subset on the grid {0, a, b, 1}.
  static BasicSubset interval(Scalar a, Scalar b) {
    Vector<Scalar> bp(4);
    bp << Scalar(0), a, b, Scalar(1);
    Vector<Scalar> merged = grid::merge(bp, bp);
    std::vector<bool> mask;
    for (Index i = 0; i + 1 < merged.size(); ++i) {
      const Scalar mid = (merged(i) + merged(i + 1)) / Scalar(2);
      mask.push_back(mid >= a && mid < b);
    }
    return BasicSubset(grid::measures_of(merged), std::move(mask));
  }

  const Vector<Scalar>& cell_measures() const noexcept { return measures_; }
  const std::vector<bool>& mask() const noexcept { return mask_; }
  Vector<Scalar> breakpoints() const { return grid::breakpoints_of(measures_); }

  Scalar measure() const {
    Scalar m(0);
    for (Index c = 0; c < measures_.size(); ++c) {
      if (mask_[static_cast<std::size_t>(c)]) m += measures_(c);
    }
    return m;
  }

  /// |B ∩ cell| for each cell of the grid given by `breakpoints`.
  Vector<Scalar> overlaps(const Vector<Scalar>& breakpoints) const {
    Vector<Scalar> ind(measures_.size());
    for (Index c = 0; c < measures_.size(); ++c) ind(c) = mask_[static_cast<std::size_t>(c)] ? 1 : 0;
    return grid::overlap(breakpoints, this->breakpoints()) * ind;
  }

  /// The ordered partition (B, I \ B), dropping an empty side.
  BasicOrderedPartition<Scalar> shift_partition() const {
    bool any_in = false, any_out = false;
    for (bool b : mask_) (b ? any_in : any_out) = true;
    std::vector<int> labels(mask_.size());
    for (std::size_t i = 0; i < mask_.size(); ++i) {
      labels[i] = (any_in && any_out) ? (mask_[i] ? 0 : 1) : 0;
    }
    return BasicOrderedPartition<Scalar>(measures_, std::move(labels));
  }

 private:
  Vector<Scalar> measures_;
  std::vector<bool> mask_;
};

using Subset = BasicSubset<double>;

}  // namespace graphonlab
