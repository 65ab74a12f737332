#include "graphonlab/functional.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace graphonlab {

double binary_entropy(double x) {
  x = std::clamp(x, 0.0, 1.0);
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double scale = 1.0 / std::log(kEntropyLogBase);
  return -(x * std::log(x) + (1.0 - x) * std::log1p(-x)) * scale;
}

ConcaveFunctional ConcaveFunctional::entropy() {
  return ConcaveFunctional("H", binary_entropy, true);
}

ConcaveFunctional ConcaveFunctional::negative_square() {
  return ConcaveFunctional("negsq", [](double x) { return -x * x; }, true);
}

ConcaveFunctional ConcaveFunctional::table(std::vector<double> xs, std::vector<double> ys,
                                           std::string name) {
  if (xs.size() < 2 || xs.size() != ys.size()) {
    throw std::invalid_argument("table functional needs at least two (x, y) knots of equal count");
  }
  if (xs.front() != 0.0 || xs.back() != 1.0) {
    throw std::invalid_argument("table functional knots must span [0, 1]");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(ys[i])) throw std::invalid_argument("table functional values must be finite");
    if (i > 0 && !(xs[i] > xs[i - 1])) {
      throw std::invalid_argument("table functional knots must increase strictly");
    }
  }
  auto knots = std::make_shared<const std::pair<std::vector<double>, std::vector<double>>>(
      std::move(xs), std::move(ys));
  auto eval = [knots](double x) {
    const auto& [kx, ky] = *knots;
    x = std::clamp(x, 0.0, 1.0);
    auto it = std::upper_bound(kx.begin(), kx.end(), x);
    if (it == kx.end()) return ky.back();
    const auto hi = static_cast<std::size_t>(it - kx.begin());
    const auto lo = hi - 1;
    const double w = (x - kx[lo]) / (kx[hi] - kx[lo]);
    return ky[lo] + w * (ky[hi] - ky[lo]);
  };
  return ConcaveFunctional(std::move(name), eval, false);
}

ConcaveFunctional ConcaveFunctional::constant(double c) {
  return table({0.0, 1.0}, {c, c}, "constant");
}

ConcaveFunctional ConcaveFunctional::by_name(const std::string& name) {
  if (name == "H" || name == "entropy") return entropy();
  if (name == "negsq" || name == "-x^2") return negative_square();
  throw std::invalid_argument("unknown functional '" + name + "' (expected H or negsq)");
}

}  // namespace graphonlab
