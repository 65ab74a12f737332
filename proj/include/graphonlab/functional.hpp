#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace graphonlab {

/// Logarithm base used by the binary entropy (bits).
inline constexpr double kEntropyLogBase = 2.0;

/// A named real function on [0,1] integrated against graphon values.
///
/// `strictly_concave` is declared by the constructor of the functional and is
/// never verified; results that rely on strict concavity check the flag.
class ConcaveFunctional {
 public:
  ConcaveFunctional(std::string name, std::function<double(double)> eval, bool strictly_concave)
      : name_(std::move(name)), eval_(std::move(eval)), strictly_concave_(strictly_concave) {}

  double operator()(double x) const { return eval_(x); }
  const std::string& name() const noexcept { return name_; }
  bool strictly_concave() const noexcept { return strictly_concave_; }

  /// Binary entropy in bits, H(0) = H(1) = 0.
  static ConcaveFunctional entropy();
  /// x -> -x^2, the negated L2 index.
  static ConcaveFunctional negative_square();
  /// Piecewise-linear interpolation of (x, y) knots; x must start at 0, end at 1
  /// and increase strictly. Flagged non-strict.
  static ConcaveFunctional table(std::vector<double> xs, std::vector<double> ys,
                                 std::string name = "table");
  static ConcaveFunctional constant(double c);

  /// Looks up a built-in by name: "H"/"entropy", "negsq"/"-x^2".
  static ConcaveFunctional by_name(const std::string& name);

 private:
  std::string name_;
  std::function<double(double)> eval_;
  bool strictly_concave_;
};

double binary_entropy(double x);

}  // namespace graphonlab
