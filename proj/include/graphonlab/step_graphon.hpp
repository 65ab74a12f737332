#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace graphonlab {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

/// Tolerance used when validating measures, symmetry and value ranges.
inline constexpr double kValidationTolerance = 1e-12;

class ValidationError : public std::runtime_error {
 public:
  enum class Kind { asymmetry, out_of_range, measure_sum, nonpositive_measure, shape };

  ValidationError(Kind kind, Index row, Index col, const std::string& what)
      : std::runtime_error(what), kind_(kind), row_(row), col_(col) {}

  Kind kind() const noexcept { return kind_; }
  /// Offending indices (1-based, -1 when not applicable).
  Index row() const noexcept { return row_; }
  Index col() const noexcept { return col_; }

 private:
  Kind kind_;
  Index row_;
  Index col_;
};

/// Value range of a graphon: [0, 1].
struct UnitRange {
  static constexpr double lo = 0.0;
  static constexpr double hi = 1.0;
  static constexpr const char* name = "graphon";
};

/// Value range of a signed kernel: [-1, 1].
struct SignedUnitRange {
  static constexpr double lo = -1.0;
  static constexpr double hi = 1.0;
  static constexpr const char* name = "kernel";
};

namespace detail {

template <typename Scalar>
void validate_measures(const Vector<Scalar>& measures) {
  if (measures.size() == 0) {
    throw ValidationError(ValidationError::Kind::shape, -1, -1, "step function has no steps");
  }
  for (Index i = 0; i < measures.size(); ++i) {
    if (!(measures(i) > Scalar(0)) || !std::isfinite(static_cast<double>(measures(i)))) {
      std::ostringstream os;
      os << "measure " << i + 1 << " is not positive (" << measures(i) << ")";
      throw ValidationError(ValidationError::Kind::nonpositive_measure, i + 1, -1, os.str());
    }
  }
  const double total = static_cast<double>(measures.sum());
  if (std::abs(total - 1.0) > kValidationTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "measures sum to " << total << ", expected 1";
    throw ValidationError(ValidationError::Kind::measure_sum, -1, -1, os.str());
  }
}

}  // namespace detail

/// Checks the invariants of a symmetric step function with values in `Range`.
/// Throws ValidationError naming the first offending entry (1-based indices).
template <typename Range, typename Scalar>
void validate(const Vector<Scalar>& measures, const Matrix<Scalar>& values) {
  detail::validate_measures(measures);
  const Index k = measures.size();
  if (values.rows() != k || values.cols() != k) {
    std::ostringstream os;
    os << "values must be " << k << "x" << k << ", got " << values.rows() << "x" << values.cols();
    throw ValidationError(ValidationError::Kind::shape, -1, -1, os.str());
  }
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      const double v = static_cast<double>(values(i, j));
      if (!std::isfinite(v) || v < Range::lo - kValidationTolerance ||
          v > Range::hi + kValidationTolerance) {
        std::ostringstream os;
        os << Range::name << " value at (" << i + 1 << "," << j + 1 << ") = " << v
           << " outside [" << Range::lo << "," << Range::hi << "]";
        throw ValidationError(ValidationError::Kind::out_of_range, i + 1, j + 1, os.str());
      }
    }
  }
  for (Index i = 0; i < k; ++i) {
    for (Index j = i + 1; j < k; ++j) {
      if (std::abs(static_cast<double>(values(i, j) - values(j, i))) > kValidationTolerance) {
        std::ostringstream os;
        os << "asymmetric values at (" << i + 1 << "," << j + 1 << "): " << values(i, j)
           << " vs " << values(j, i);
        throw ValidationError(ValidationError::Kind::asymmetry, i + 1, j + 1, os.str());
      }
    }
  }
}

/// A symmetric function on [0,1]^2 that is constant on the products of
/// consecutive intervals ("steps") of lengths `measures`, left to right.
template <typename Scalar, typename Range>
class BasicStepFunction {
 public:
  using scalar_type = Scalar;
  using range_type = Range;

  BasicStepFunction(Vector<Scalar> measures, Matrix<Scalar> values)
      : measures_(std::move(measures)), values_(std::move(values)) {
    validate<Range>(measures_, values_);
    // Absorb the tolerance band so downstream code sees exact invariants.
    values_ = (0.5 * (values_ + values_.transpose())).eval();
    values_ = values_.cwiseMax(Scalar(Range::lo)).cwiseMin(Scalar(Range::hi));
  }

  static BasicStepFunction constant(Scalar c) {
    return BasicStepFunction(Vector<Scalar>::Ones(1), Matrix<Scalar>::Constant(1, 1, c));
  }

  /// k equal steps of measure 1/k.
  static BasicStepFunction uniform(Matrix<Scalar> values) {
    const Index k = values.rows();
    return BasicStepFunction(Vector<Scalar>::Constant(k, Scalar(1) / Scalar(k)), std::move(values));
  }

  const Vector<Scalar>& measures() const noexcept { return measures_; }
  const Matrix<Scalar>& values() const noexcept { return values_; }
  Index steps() const noexcept { return measures_.size(); }
  Scalar value(Index i, Index j) const { return values_(i, j); }

  /// Left endpoints plus 1: k + 1 increasing numbers from 0 to 1.
  Vector<Scalar> breakpoints() const {
    Vector<Scalar> b(steps() + 1);
    b(0) = Scalar(0);
    for (Index i = 0; i < steps(); ++i) b(i + 1) = b(i) + measures_(i);
    b(steps()) = Scalar(1);
    return b;
  }

  /// Index of the step containing x (right-continuous; x = 1 maps to the last step).
  Index step_of(Scalar x) const {
    Scalar acc(0);
    for (Index i = 0; i + 1 < steps(); ++i) {
      acc += measures_(i);
      if (x < acc) return i;
    }
    return steps() - 1;
  }

  Scalar operator()(Scalar x, Scalar y) const { return values_(step_of(x), step_of(y)); }

  template <typename OtherScalar>
  BasicStepFunction<OtherScalar, Range> cast() const {
    return BasicStepFunction<OtherScalar, Range>(measures_.template cast<OtherScalar>(),
                                                 values_.template cast<OtherScalar>());
  }

 private:
  Vector<Scalar> measures_;
  Matrix<Scalar> values_;
};

template <typename Scalar>
using BasicStepGraphon = BasicStepFunction<Scalar, UnitRange>;
template <typename Scalar>
using BasicKernel = BasicStepFunction<Scalar, SignedUnitRange>;

using StepGraphon = BasicStepGraphon<double>;
using Kernel = BasicKernel<double>;

}  // namespace graphonlab
