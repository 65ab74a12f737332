#pragma once

#include "graphonlab/partition.hpp"
#include "graphonlab/step_graphon.hpp"

#include <algorithm>
#include <vector>

namespace graphonlab {

/// Pieces shorter than this are dropped when a step function is pulled back.
inline constexpr double kPieceTolerance = 1e-15;

/// Target interval [target, target + length) is fed from source interval
/// [source, source + length) by translation.
template <typename Scalar>
struct Segment {
  Scalar target;
  Scalar source;
  Scalar length;
};

/// The version x -> W(m(x), m(y)) of W, where m is the piecewise translation
/// described by `segments` (which must tile I when sorted by target).
template <typename Scalar, typename Range>
BasicStepFunction<Scalar, Range> pull_back(const BasicStepFunction<Scalar, Range>& w,
                                           std::vector<Segment<Scalar>> segments) {
  std::sort(segments.begin(), segments.end(),
            [](const auto& a, const auto& b) { return a.target < b.target; });
  const Vector<Scalar> src = w.breakpoints();
  std::vector<Scalar> lengths;
  std::vector<Index> cells;
  for (const auto& s : segments) {
    const Scalar lo = s.source;
    const Scalar hi = s.source + s.length;
    for (Index j = 0; j + 1 < src.size(); ++j) {
      if (src(j + 1) <= lo || src(j) >= hi) continue;
      const Scalar len = std::min(hi, src(j + 1)) - std::max(lo, src(j));
      if (len <= Scalar(kPieceTolerance)) continue;
      lengths.push_back(len);
      cells.push_back(j);
    }
  }
  const Index k = static_cast<Index>(lengths.size());
  Vector<Scalar> measures(k);
  Scalar total(0);
  for (Index i = 0; i < k; ++i) {
    measures(i) = lengths[static_cast<std::size_t>(i)];
    total += measures(i);
  }
  measures /= total;
  Matrix<Scalar> values(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      values(i, j) = w.values()(cells[static_cast<std::size_t>(i)], cells[static_cast<std::size_t>(j)]);
    }
  }
  return BasicStepFunction<Scalar, Range>(std::move(measures), std::move(values));
}

/// The relabelling gamma_J of an ordered partition J = (C_1, ..., C_k): C_1 is
/// packed to the left of I in its original order, C_2 next to it, and so on.
/// Within each part, gamma_J is the cumulative measure of the part plus the
/// total measure of the parts before it.
template <typename Scalar>
class BasicRearrangementMap {
 public:
  explicit BasicRearrangementMap(BasicOrderedPartition<Scalar> partition)
      : partition_(std::move(partition)) {
    const Vector<Scalar> bp = partition_.breakpoints();
    const Vector<Scalar> pm = partition_.part_measures();
    offsets_ = Vector<Scalar>::Zero(partition_.parts() + 1);
    for (int p = 0; p < partition_.parts(); ++p) offsets_(p + 1) = offsets_(p) + pm(p);
    Vector<Scalar> cursor = offsets_.head(partition_.parts());
    for (Index c = 0; c < partition_.cells(); ++c) {
      const int p = partition_.labels()[static_cast<std::size_t>(c)];
      const Scalar len = partition_.cell_measures()(c);
      segments_.push_back({cursor(p), bp(c), len});
      cursor(p) += len;
    }
  }

  const BasicOrderedPartition<Scalar>& source_partition() const noexcept { return partition_; }
  /// Cumulative part offsets: part p occupies [offsets(p), offsets(p+1)) after the map.
  const Vector<Scalar>& offsets() const noexcept { return offsets_; }
  /// One segment per partition cell, listed in source order.
  const std::vector<Segment<Scalar>>& segments() const noexcept { return segments_; }

  /// gamma_J(x).
  Scalar forward(Scalar x) const {
    for (const auto& s : segments_) {
      if (x >= s.source && x < s.source + s.length) return s.target + (x - s.source);
    }
    return Scalar(1);
  }

  /// gamma_J^{-1}(y).
  Scalar inverse(Scalar y) const {
    for (const auto& s : segments_) {
      if (y >= s.target && y < s.target + s.length) return s.source + (y - s.target);
    }
    return Scalar(1);
  }

  /// The version <J>W, i.e. W(gamma^{-1}(x), gamma^{-1}(y)).
  template <typename Range>
  BasicStepFunction<Scalar, Range> apply(const BasicStepFunction<Scalar, Range>& w) const {
    return pull_back(w, segments_);
  }

  /// An ordered partition of the image grid undoing this map: applying it to
  /// <J>W gives back W cellwise.
  BasicOrderedPartition<Scalar> inverse_partition() const {
    std::vector<std::size_t> by_target(segments_.size());
    for (std::size_t i = 0; i < by_target.size(); ++i) by_target[i] = i;
    std::sort(by_target.begin(), by_target.end(),
              [&](auto a, auto b) { return segments_[a].target < segments_[b].target; });
    Vector<Scalar> measures(static_cast<Index>(segments_.size()));
    std::vector<int> labels(segments_.size());
    for (std::size_t pos = 0; pos < by_target.size(); ++pos) {
      measures(static_cast<Index>(pos)) = segments_[by_target[pos]].length;
      labels[pos] = static_cast<int>(by_target[pos]);  // source order restores the original
    }
    return BasicOrderedPartition<Scalar>(std::move(measures), std::move(labels));
  }

 private:
  BasicOrderedPartition<Scalar> partition_;
  Vector<Scalar> offsets_;
  std::vector<Segment<Scalar>> segments_;
};

using RearrangementMap = BasicRearrangementMap<double>;

}  // namespace graphonlab
