#include "graphonlab/cutnorm.hpp"

#include "graphonlab/operations.hpp"
#include "graphonlab/parallel.hpp"
#include "graphonlab/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

namespace graphonlab {
namespace {

/// M = diag(mu) D diag(mu): the quadratic form whose value on inclusion
/// fractions is the cut integral.
Matrix<double> weighted_form(const Kernel& d) {
  return d.measures().asDiagonal() * d.values() * d.measures().asDiagonal();
}

struct BilinearMax {
  double value = 0.0;
  int sign = 0;
  std::vector<double> a, b;
};

/// max over 0/1 vectors t, s of |t' M s|. For fixed t the best s takes every
/// column with positive (resp. negative) sum, so only t is enumerated, in
/// Gray-code order.
BilinearMax bilinear_max(const Matrix<double>& m) {
  const Index k = m.rows();
  Vector<double> col = Vector<double>::Zero(k);
  std::uint64_t t = 0;
  std::uint64_t best_t = 0;
  double best = 0.0;
  int best_sign = 0;
  const std::uint64_t count = std::uint64_t{1} << k;
  for (std::uint64_t g = 1; g < count; ++g) {
    const int bit = __builtin_ctzll(g);
    t ^= std::uint64_t{1} << bit;
    if (t & (std::uint64_t{1} << bit)) {
      col += m.row(bit).transpose();
    } else {
      col -= m.row(bit).transpose();
    }
    double pos = 0.0, neg = 0.0;
    for (Index j = 0; j < k; ++j) {
      if (col(j) > 0) pos += col(j);
      else neg -= col(j);
    }
    if (pos > best) {
      best = pos;
      best_t = t;
      best_sign = 1;
    }
    if (neg > best) {
      best = neg;
      best_t = t;
      best_sign = -1;
    }
  }
  BilinearMax r;
  r.a.assign(static_cast<std::size_t>(k), 0.0);
  r.b.assign(static_cast<std::size_t>(k), 0.0);
  if (best_sign == 0) return r;
  Vector<double> a = Vector<double>::Zero(k);
  for (Index i = 0; i < k; ++i) {
    if (best_t & (std::uint64_t{1} << i)) {
      a(i) = 1.0;
      r.a[static_cast<std::size_t>(i)] = 1.0;
    }
  }
  const Vector<double> c = m.transpose() * a;
  for (Index j = 0; j < k; ++j) {
    if (best_sign * c(j) > 0) r.b[static_cast<std::size_t>(j)] = 1.0;
  }
  Vector<double> b = Eigen::Map<const Vector<double>>(r.b.data(), k);
  r.value = std::abs(a.dot(m * b));
  r.sign = best_sign;
  return r;
}

double quadratic(const Matrix<double>& m, const std::vector<double>& t) {
  const Eigen::Map<const Vector<double>> v(t.data(), static_cast<Index>(t.size()));
  return v.dot(m * v);
}

/// Coordinate ascent on t' M t over the box. Each coordinate update maximizes
/// the one-dimensional quadratic M_ii x^2 + b x on [0, 1] exactly; ties go to
/// the smaller x.
double coordinate_ascent(const Matrix<double>& m, std::vector<double>& t) {
  const Index k = m.rows();
  Vector<double> mt = m * Eigen::Map<const Vector<double>>(t.data(), k);
  double value = quadratic(m, t);
  for (int sweep = 0; sweep < 10000; ++sweep) {
    bool improved = false;
    for (Index i = 0; i < k; ++i) {
      const double ti = t[static_cast<std::size_t>(i)];
      const double a = m(i, i);
      const double b = 2.0 * (mt(i) - a * ti);
      auto g = [&](double x) { return a * x * x + b * x; };
      double best_x = 0.0, best_g = 0.0;
      if (g(1.0) > best_g) {
        best_x = 1.0;
        best_g = g(1.0);
      }
      if (a < 0) {
        const double x = std::clamp(-b / (2.0 * a), 0.0, 1.0);
        if (g(x) > best_g) {
          best_x = x;
          best_g = g(x);
        }
      }
      if (best_g > g(ti) + 1e-15 * (1.0 + std::abs(value))) {
        mt += m.col(i) * (best_x - ti);
        t[static_cast<std::size_t>(i)] = best_x;
        value += best_g - g(ti);
        improved = true;
      }
    }
    if (!improved) break;
  }
  return quadratic(m, t);
}

}  // namespace

double cut_objective(const Kernel& d, const std::vector<double>& a, const std::vector<double>& b) {
  const Index k = d.steps();
  if (static_cast<Index>(a.size()) != k || static_cast<Index>(b.size()) != k) {
    throw std::invalid_argument("witness length does not match the kernel's step count");
  }
  const Vector<double> wa = d.measures().cwiseProduct(Eigen::Map<const Vector<double>>(a.data(), k));
  const Vector<double> wb = d.measures().cwiseProduct(Eigen::Map<const Vector<double>>(b.data(), k));
  return wa.dot(d.values() * wb);
}

CutNormResult cutnorm_bilinear_exact(const Kernel& d) {
  if (d.steps() > kBilinearExactBudget) {
    std::ostringstream os;
    os << "bilinear cut-norm enumeration limited to " << kBilinearExactBudget << " steps (got "
       << d.steps() << "); use cutnorm_symmetric for a heuristic bound";
    throw BudgetError(os.str());
  }
  const BilinearMax best = bilinear_max(weighted_form(d));
  CutNormResult r;
  r.mode = CutMode::bilinear;
  r.exact = true;
  r.witness_a = best.a;
  r.witness_b = best.b;
  r.sign = best.sign;
  r.value = std::abs(cut_objective(d, r.witness_a, r.witness_b));
  r.upper_bound = r.value;
  return r;
}

double max_box_quadratic_exact(const Matrix<double>& m, std::vector<double>* argmax) {
  const Index k = m.rows();
  Index faces = 1;
  for (Index i = 0; i < k; ++i) faces *= 3;
  double best = 0.0;
  std::vector<double> best_t(static_cast<std::size_t>(k), 0.0);
  std::vector<int> state(static_cast<std::size_t>(k));
  std::vector<double> t(static_cast<std::size_t>(k));
  for (Index f = 0; f < faces; ++f) {
    Index code = f;
    std::vector<Index> free_idx;
    for (Index i = 0; i < k; ++i) {
      state[static_cast<std::size_t>(i)] = static_cast<int>(code % 3);
      code /= 3;
      if (state[static_cast<std::size_t>(i)] == 2) free_idx.push_back(i);
      t[static_cast<std::size_t>(i)] = state[static_cast<std::size_t>(i)] == 1 ? 1.0 : 0.0;
    }
    if (!free_idx.empty()) {
      // Stationarity in the free coordinates: M_FF t_F = -M_F,fixed t_fixed.
      const Index nf = static_cast<Index>(free_idx.size());
      Matrix<double> mff(nf, nf);
      Vector<double> rhs = Vector<double>::Zero(nf);
      for (Index a = 0; a < nf; ++a) {
        for (Index b = 0; b < nf; ++b) mff(a, b) = m(free_idx[a], free_idx[b]);
        for (Index j = 0; j < k; ++j) {
          if (state[static_cast<std::size_t>(j)] != 2) rhs(a) -= m(free_idx[a], j) * t[static_cast<std::size_t>(j)];
        }
      }
      Eigen::FullPivLU<Matrix<double>> lu(mff);
      lu.setThreshold(1e-12);
      // A singular face is never needed: along a null direction the form is
      // constant, so the optimum is also attained on a lower face.
      if (lu.rank() < nf) continue;
      const Vector<double> sol = lu.solve(rhs);
      bool inside = true;
      for (Index a = 0; a < nf; ++a) {
        if (sol(a) < -1e-12 || sol(a) > 1.0 + 1e-12) inside = false;
      }
      if (!inside) continue;
      for (Index a = 0; a < nf; ++a) t[static_cast<std::size_t>(free_idx[a])] = std::clamp(sol(a), 0.0, 1.0);
    }
    const double v = quadratic(m, t);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  if (argmax) *argmax = best_t;
  return best;
}

CutNormResult cutnorm_symmetric(const Kernel& d, const SymmetricOptions& options) {
  const Index k = d.steps();
  const Matrix<double> m = weighted_form(d);
  CutNormResult r;
  r.mode = CutMode::symmetric;
  std::optional<BilinearMax> bilinear;
  if (k <= kBilinearExactBudget) bilinear = bilinear_max(m);
  r.upper_bound = bilinear ? bilinear->value : m.cwiseAbs().sum();

  if (k <= kSymmetricExactSteps) {
    std::vector<double> tp, tn;
    const double vp = max_box_quadratic_exact(m, &tp);
    const double vn = max_box_quadratic_exact(-m, &tn);
    r.exact = true;
    if (vp >= vn) {
      r.witness_a = tp;
      r.sign = vp > 0 ? 1 : 0;
    } else {
      r.witness_a = tn;
      r.sign = -1;
    }
  } else {
    // Deterministic starts first, then seeded random restarts.
    std::vector<std::vector<double>> starts;
    starts.emplace_back(static_cast<std::size_t>(k), 1.0);
    if (bilinear && bilinear->sign != 0) {
      std::vector<double> both(static_cast<std::size_t>(k)), either(static_cast<std::size_t>(k));
      for (std::size_t i = 0; i < both.size(); ++i) {
        both[i] = std::min(bilinear->a[i], bilinear->b[i]);
        either[i] = std::max(bilinear->a[i], bilinear->b[i]);
      }
      starts.push_back(bilinear->a);
      starts.push_back(bilinear->b);
      starts.push_back(both);
      starts.push_back(either);
    }
    for (Index i = 0; i < k; ++i) {
      std::vector<double> e(static_cast<std::size_t>(k), 0.0);
      e[static_cast<std::size_t>(i)] = 1.0;
      starts.push_back(std::move(e));
    }
    const int fixed = static_cast<int>(starts.size());
    const int total = fixed + std::max(options.restarts, 0);
    struct Outcome {
      double value = 0.0;
      int sign = 0;
      std::vector<double> t;
    };
    auto run = [&](int idx) {
      std::vector<double> t0;
      if (idx < fixed) {
        t0 = starts[static_cast<std::size_t>(idx)];
      } else {
        Rng rng(options.seed + static_cast<std::uint64_t>(idx - fixed));
        t0.resize(static_cast<std::size_t>(k));
        for (auto& x : t0) x = rng.uniform();
      }
      Outcome o;
      std::vector<double> tp = t0, tn = t0;
      const double vp = coordinate_ascent(m, tp);
      const double vn = coordinate_ascent(-m, tn);
      if (vp >= vn) {
        o = {vp, vp > 0 ? 1 : 0, tp};
      } else {
        o = {vn, -1, tn};
      }
      return o;
    };
    const auto outcomes = parallel_map(total, options.threads, run);
    std::size_t best = 0;
    for (std::size_t i = 1; i < outcomes.size(); ++i) {
      if (outcomes[i].value > outcomes[best].value) best = i;
    }
    r.witness_a = outcomes[best].t;
    r.sign = outcomes[best].sign;
    r.exact = false;
  }
  r.witness_b = r.witness_a;
  r.value = std::abs(cut_objective(d, r.witness_a, r.witness_b));
  if (r.value == 0.0) r.sign = 0;
  if (bilinear) {
    if (r.value < bilinear->value / 2.0 - 1e-9) {
      r.warnings.push_back("symmetric search fell below half the bilinear value; heuristic failed");
    }
    if (r.value > bilinear->value + 1e-9) {
      r.warnings.push_back("symmetric value exceeds the bilinear bound");
    }
  }
  return r;
}

std::optional<CutWitness> cutnorm_witness_set(const StepGraphon& gamma, const StepGraphon& w, double eps,
                                              const SymmetricOptions& options) {
  if (!(eps > 0)) throw std::invalid_argument("cutnorm_witness_set needs eps > 0");
  const Kernel d = difference(gamma, w);
  const CutNormResult r = cutnorm_symmetric(d, options);
  if (!(r.value >= eps)) return std::nullopt;
  CutWitness witness;
  witness.fractions = r.witness_a;
  const Vector<double> bp = d.breakpoints();
  witness.grid.assign(bp.data(), bp.data() + bp.size());
  witness.deviation = cut_objective(d, r.witness_a, r.witness_a);
  witness.sign = witness.deviation > 0 ? 1 : (witness.deviation < 0 ? -1 : 0);
  return witness;
}

std::optional<Index> common_uniform_grid(const StepGraphon& w1, const StepGraphon& w2, Index max_cells) {
  const Vector<double> bp = grid::merge(w1.breakpoints(), w2.breakpoints());
  for (Index n = 1; n <= max_cells; ++n) {
    bool ok = true;
    for (Index i = 0; i < bp.size() && ok; ++i) {
      const double x = bp(i) * static_cast<double>(n);
      ok = std::abs(x - std::round(x)) <= 1e-9;
    }
    if (ok) return n;
  }
  return std::nullopt;
}

CutDistanceResult cut_distance(const StepGraphon& w1, const StepGraphon& w2, const CutDistanceOptions& options) {
  CutDistanceResult result;
  if (options.mode == CutDistanceMode::exact_small) {
    const auto n = common_uniform_grid(w1, w2, kCutDistanceExactCells);
    if (!n) {
      std::ostringstream os;
      os << "exact_small cut distance needs a common equal-measure grid of at most "
         << kCutDistanceExactCells << " cells";
      throw std::invalid_argument(os.str());
    }
    const Vector<double> g = grid::uniform_breakpoints<double>(*n);
    const Matrix<double> a = refine(w1, g).values();
    const Matrix<double> b = refine(w2, g).values();
    const double mu = 1.0 / static_cast<double>(*n);
    std::vector<int> perm(static_cast<std::size_t>(*n));
    std::iota(perm.begin(), perm.end(), 0);
    Matrix<double> m(*n, *n);
    result.value = std::numeric_limits<double>::infinity();
    do {
      for (Index i = 0; i < *n; ++i) {
        for (Index j = 0; j < *n; ++j) m(i, j) = (a(perm[i], perm[j]) - b(i, j)) * mu * mu;
      }
      const double v = bilinear_max(m).value;
      ++result.evaluated;
      if (v < result.value) {
        result.value = v;
        result.permutation = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    result.grid.assign(g.data(), g.data() + g.size());
    result.exact_in_class = true;
    return result;
  }

  Vector<double> g = grid::merge(w1.breakpoints(), w2.breakpoints());
  if (options.split > 1) {
    Vector<double> fine((g.size() - 1) * options.split + 1);
    for (Index c = 0; c + 1 < g.size(); ++c) {
      for (int q = 0; q < options.split; ++q) {
        fine(c * options.split + q) = g(c) + (g(c + 1) - g(c)) * q / options.split;
      }
    }
    fine(fine.size() - 1) = 1.0;
    g = fine;
  }
  const Index k = g.size() - 1;
  if (k > 16) throw BudgetError("heuristic cut distance limited to 16 common cells");
  const Matrix<double> a = refine(w1, g).values();
  const Matrix<double> b = refine(w2, g).values();
  const Vector<double> mu = grid::measures_of(g);
  // Swaps only between cells of equal measure keep the map measure preserving.
  std::vector<std::vector<int>> same(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      if (i != j && std::abs(mu(i) - mu(j)) <= kGridTolerance) same[static_cast<std::size_t>(i)].push_back(static_cast<int>(j));
    }
  }
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  auto evaluate = [&](const std::vector<int>& p) {
    Matrix<double> m(k, k);
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < k; ++j) m(i, j) = (a(p[i], p[j]) - b(i, j)) * mu(i) * mu(j);
    }
    ++result.evaluated;
    return bilinear_max(m).value;
  };
  Rng rng(options.seed);
  double current = evaluate(perm);
  result.value = current;
  result.permutation = perm;
  const double t0 = std::max(current, 1e-6) * 0.1;
  const double t_end = t0 * 1e-4;
  for (int it = 0; it < options.budget; ++it) {
    const double temp = t0 * std::pow(t_end / t0, static_cast<double>(it) / std::max(1, options.budget - 1));
    const auto i = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(k)));
    if (same[i].empty()) continue;
    const auto j = static_cast<std::size_t>(same[i][rng.below(same[i].size())]);
    std::swap(perm[i], perm[j]);
    const double v = evaluate(perm);
    if (v <= current || rng.uniform() < std::exp(-(v - current) / temp)) {
      current = v;
      if (v < result.value) {
        result.value = v;
        result.permutation = perm;
      }
    } else {
      std::swap(perm[i], perm[j]);
    }
  }
  result.grid.assign(g.data(), g.data() + g.size());
  result.exact_in_class = false;
  return result;
}

}  // namespace graphonlab
