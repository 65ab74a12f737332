#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graphonlab/families.hpp"
#include "graphonlab/functional.hpp"
#include "graphonlab/operations.hpp"
#include "graphonlab/parallel.hpp"
#include "graphonlab/partition.hpp"
#include "graphonlab/random.hpp"
#include "graphonlab/rearrangement.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace graphonlab;
using testing::random_graphon;
using testing::random_measures;

namespace {

double direct_int_f(const StepGraphon& w, const ConcaveFunctional& f) {
  double s = 0.0;
  for (Index i = 0; i < w.steps(); ++i) {
    for (Index j = 0; j < w.steps(); ++j) s += w.measures()(i) * w.measures()(j) * f(w.value(i, j));
  }
  return s;
}

OrderedPartition random_partition(Rng& rng, Index cells, int parts) {
  std::vector<int> labels(static_cast<std::size_t>(cells));
  for (Index c = 0; c < cells; ++c) {
    labels[static_cast<std::size_t>(c)] = c < parts ? static_cast<int>(c) : static_cast<int>(rng.below(parts));
  }
  rng.shuffle(labels);
  return OrderedPartition(random_measures(rng, cells), labels);
}

}  // namespace

TEST_CASE("validation names the offending entry") {
  Matrix<double> v(2, 2);
  v << 0.0, 0.3, 0.4, 0.0;
  try {
    StepGraphon(Vector<double>::Constant(2, 0.5), v);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.kind() == ValidationError::Kind::asymmetry);
    CHECK(e.row() == 1);
    CHECK(e.col() == 2);
    CHECK(std::string(e.what()).find("(1,2)") != std::string::npos);
  }

  Vector<double> m(2);
  m << 0.5, 0.6;
  CHECK_THROWS_AS(StepGraphon(m, Matrix<double>::Zero(2, 2)), ValidationError);
  m << 1.5, -0.5;
  CHECK_THROWS_AS(StepGraphon(m, Matrix<double>::Zero(2, 2)), ValidationError);
  CHECK_THROWS_AS(StepGraphon::constant(1.2), ValidationError);
  CHECK_NOTHROW(Kernel::constant(-0.7));
  CHECK_THROWS_AS(StepGraphon(Vector<double>::Ones(1), Matrix<double>::Zero(2, 2)), ValidationError);
}

TEST_CASE("values within tolerance are symmetrized and clamped") {
  Matrix<double> v(2, 2);
  v << 1.0 + 5e-13, 0.5, 0.5 + 4e-13, 0.0;
  const StepGraphon w = StepGraphon::uniform(v);
  CHECK(w.value(0, 0) == 1.0);
  CHECK(w.value(0, 1) == w.value(1, 0));
}

TEST_CASE("point evaluation and breakpoints") {
  Vector<double> m(3);
  m << 0.25, 0.25, 0.5;
  Matrix<double> v(3, 3);
  v << 0.1, 0.2, 0.3, 0.2, 0.4, 0.5, 0.3, 0.5, 0.6;
  const StepGraphon w(m, v);
  CHECK(w.breakpoints()(1) == doctest::Approx(0.25));
  CHECK(w.breakpoints()(3) == 1.0);
  CHECK(w.step_of(0.0) == 0);
  CHECK(w.step_of(0.25) == 1);
  CHECK(w.step_of(1.0) == 2);
  CHECK(w(0.3, 0.9) == doctest::Approx(0.5));
  const auto f = w.cast<long double>();
  CHECK(static_cast<double>(f.value(2, 2)) == doctest::Approx(0.6));
}

TEST_CASE("binary entropy and functionals") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  const double h7 = -(0.7 * std::log2(0.7) + 0.3 * std::log2(0.3));
  CHECK(binary_entropy(0.7) == doctest::Approx(h7).epsilon(1e-14));
  CHECK(binary_entropy(0.3) == doctest::Approx(binary_entropy(0.7)).epsilon(1e-14));

  const auto t = ConcaveFunctional::table({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
  CHECK(t(0.25) == doctest::Approx(0.5));
  CHECK_FALSE(t.strictly_concave());
  CHECK_THROWS(ConcaveFunctional::table({0.1, 1.0}, {0.0, 0.0}));
  CHECK_THROWS(ConcaveFunctional::table({0.0, 0.6, 0.5, 1.0}, {0, 0, 0, 0}));
  CHECK(ConcaveFunctional::by_name("entropy").name() == "H");
  CHECK(ConcaveFunctional::by_name("-x^2")(0.5) == doctest::Approx(-0.25));
  CHECK_THROWS(ConcaveFunctional::by_name("nope"));
}

TEST_CASE("toy example values") {
  const auto h = ConcaveFunctional::entropy();
  const auto sq = ConcaveFunctional::negative_square();
  CHECK(std::abs(int_f(bipartite_chessboard(), h)) <= 1e-12);
  CHECK(std::abs(int_f(constant_graphon(0.5), h) - 1.0) <= 1e-12);
  CHECK(int_f(bipartite_chessboard(), sq) == doctest::Approx(-0.5));
  CHECK(int_f(constant_graphon(0.5), sq) == doctest::Approx(-0.25));
}

TEST_CASE("int_f agrees with a direct double sum") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const StepGraphon w = random_graphon(rng, 1 + static_cast<Index>(rng.below(7)));
    for (const auto& f : {ConcaveFunctional::entropy(), ConcaveFunctional::negative_square()}) {
      CHECK(int_f(w, f) == doctest::Approx(direct_int_f(w, f)).epsilon(1e-13));
    }
  }
}

TEST_CASE("L1 distance matches a Monte-Carlo estimate") {
  Rng rng(5);
  const StepGraphon a = random_graphon(rng, 3);
  const StepGraphon b = random_graphon(rng, 4);
  const int samples = 1000000;
  double sum = 0.0, sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double x = rng.uniform(), y = rng.uniform();
    const double d = std::abs(a(x, y) - b(x, y));
    sum += d;
    sq += d * d;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sq / samples - mean * mean) / samples);
  CHECK(std::abs(l1_distance(a, b) - mean) <= 3 * se);
}

TEST_CASE("rectangle integrals agree with direct sums and add up") {
  Rng rng(3);
  const StepGraphon w = random_graphon(rng, 5);
  const Vector<double> bp = w.breakpoints();
  // [b1, b3) x [b0, b2): a union of whole steps.
  double direct = 0.0;
  for (Index i = 1; i < 3; ++i) {
    for (Index j = 0; j < 2; ++j) direct += w.measures()(i) * w.measures()(j) * w.value(i, j);
  }
  CHECK(rect_integral(w, bp(1), bp(3), bp(0), bp(2)) == doctest::Approx(direct).epsilon(1e-14));
  const double x = 0.37, y = 0.81;
  const double whole = rect_integral(w, 0.1, 0.9, 0.2, 0.95);
  const double split = rect_integral(w, 0.1, x, 0.2, y) + rect_integral(w, x, 0.9, 0.2, y) +
                       rect_integral(w, 0.1, x, y, 0.95) + rect_integral(w, x, 0.9, y, 0.95);
  CHECK(std::abs(whole - split) <= 1e-15);
  const Matrix<double> g = grid_integrals(w, grid::uniform_breakpoints<double>(8));
  CHECK(std::abs(g.sum() - rect_integral(w, 0.0, 1.0, 0.0, 1.0)) <= 1e-14);
}

TEST_CASE("grid helpers") {
  Vector<double> a(3), b(3);
  a << 0.0, 0.5, 1.0;
  b << 0.0, 0.5 + 1e-14, 1.0;
  CHECK(grid::merge(a, b).size() == 3);
  Vector<double> c(4);
  c << 0.0, 0.25, 0.75, 1.0;
  const Vector<double> m = grid::merge(a, c);
  CHECK(m.size() == 5);
  CHECK(grid::locate(m, a) == std::vector<Index>{0, 0, 1, 1});
  const Matrix<double> o = grid::overlap(a, c);
  CHECK(o(0, 1) == doctest::Approx(0.25));
  CHECK(o(1, 1) == doctest::Approx(0.25));
  CHECK(o.sum() == doctest::Approx(1.0));
}

TEST_CASE("partitions: validation, refinement, subsets") {
  CHECK_THROWS_AS(OrderedPartition(Vector<double>::Constant(2, 0.5), {0, 2}), PartitionError);
  const OrderedPartition p(Vector<double>::Constant(4, 0.25), {1, 0, 1, 0});
  CHECK(p.parts() == 2);
  CHECK_FALSE(p.is_interval_partition());
  CHECK(p.part_measures()(0) == doctest::Approx(0.5));
  const OrderedPartition q = OrderedPartition::uniform(2);
  const OrderedPartition r = common_refinement(p, q);
  CHECK(r.parts() == 4);
  CHECK(refines(r, p));
  CHECK(refines(r, q));
  CHECK_FALSE(refines(q, p));
  CHECK(refines(p, OrderedPartition::trivial()));

  const Subset s = Subset::interval(0.25, 0.75);
  CHECK(s.measure() == doctest::Approx(0.5));
  const Vector<double> ov = s.overlaps(grid::uniform_breakpoints<double>(2));
  CHECK(ov(0) == doctest::Approx(0.25));
  CHECK(s.shift_partition().parts() == 2);
  CHECK(Subset::interval(0.0, 1.0).shift_partition().parts() == 1);
}

TEST_CASE("stepping preserves block integrals and never lowers INT_f") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const StepGraphon w = random_graphon(rng, 2 + static_cast<Index>(rng.below(6)));
    const OrderedPartition p = random_partition(rng, 2 + static_cast<Index>(rng.below(5)), 1 + static_cast<int>(rng.below(2)));
    const StepGraphon s = stepping(w, p);
    CHECK((block_integrals(s, p) - block_integrals(w, p)).cwiseAbs().maxCoeff() <= 1e-12);
    for (const auto& f : {ConcaveFunctional::entropy(), ConcaveFunctional::negative_square()}) {
      CHECK(int_f(w, f) <= int_f(s, f) + 1e-9);
    }
    const StepGraphon qt = quotient(w, p);
    CHECK(qt.steps() == p.parts());
  }
}

TEST_CASE("stepping over the step partition is the identity") {
  Rng rng(2);
  const StepGraphon w = random_graphon(rng, 4);
  CHECK(l1_distance(stepping(w, OrderedPartition::steps_of(w)), w) <= 1e-14);
  CHECK(stepping(bipartite_chessboard(), OrderedPartition::trivial()).value(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("rearrangement map and ordered-partition versions") {
  const OrderedPartition j(Vector<double>::Constant(4, 0.25), {1, 0, 1, 0});
  const RearrangementMap g(j);
  CHECK(g.forward(0.3) == doctest::Approx(0.05));  // second cell moves to [0, 1/4)
  CHECK(g.forward(0.1) == doctest::Approx(0.6));
  for (double x : {0.01, 0.3, 0.55, 0.99}) CHECK(g.inverse(g.forward(x)) == doctest::Approx(x));

  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const StepGraphon w = random_graphon(rng, 1 + static_cast<Index>(rng.below(5)));
    const OrderedPartition jp = random_partition(rng, 1 + static_cast<Index>(rng.below(6)), 1 + static_cast<int>(rng.below(3)));
    const RearrangementMap map(jp);
    const StepGraphon v = map.apply(w);
    // Pointwise oracle: <J>W(x, y) = W(gamma^{-1}(x), gamma^{-1}(y)).
    for (int s = 0; s < 20; ++s) {
      const double x = rng.uniform(), y = rng.uniform();
      CHECK(v(x, y) == doctest::Approx(w(map.inverse(x), map.inverse(y))));
    }
    for (const auto& f : {ConcaveFunctional::entropy(), ConcaveFunctional::negative_square()}) {
      CHECK(int_f(v, f) == doctest::Approx(int_f(w, f)).epsilon(1e-12));
    }
    const auto hv = value_histogram(v), hw = value_histogram(w);
    REQUIRE(hv.size() == hw.size());
    for (std::size_t i = 0; i < hv.size(); ++i) {
      CHECK(hv[i].first == doctest::Approx(hw[i].first));
      CHECK(hv[i].second == doctest::Approx(hw[i].second).epsilon(1e-12));
    }
    CHECK(l1_distance(apply_ordered_partition(v, map.inverse_partition()), w) <= 1e-12);
  }
}

TEST_CASE("shifting an interval already on the left changes nothing") {
  const StepGraphon w = bipartite_chessboard();
  CHECK(l1_distance(apply_ordered_partition(w, Subset::interval(0.0, 0.5).shift_partition()), w) <= 1e-15);
}

TEST_CASE("adaptive stepping refines J and meets the target") {
  Rng rng(29);
  const auto h = ConcaveFunctional::entropy();
  for (int trial = 0; trial < 30; ++trial) {
    const StepGraphon w = random_graphon(rng, 2 + static_cast<Index>(rng.below(6)));
    const OrderedPartition jp = OrderedPartition::uniform(1 + static_cast<Index>(rng.below(3)));
    for (double eps : {1e-2, 1e-6}) {
      const auto r = adaptive_stepping(w, jp, h, eps);
      CHECK(refines(r.partition, jp));
      CHECK(r.difference < eps);
      CHECK(l1_distance(r.stepped, stepping(w, r.partition)) <= 1e-12);
      if (r.native) {
        CHECK(r.difference == 0.0);
        CHECK(l1_distance(r.stepped, w) == 0.0);
      }
    }
  }
  CHECK_THROWS_AS(adaptive_stepping(bipartite_chessboard(), OrderedPartition(Vector<double>::Constant(3, 1.0 / 3), {0, 1, 0}),
                                    h, 0.1),
                  PartitionError);
}

TEST_CASE("random number helpers are deterministic and in range") {
  CHECK(derive_seed(1, "a", 2) == derive_seed(1, "a", 2));
  CHECK(derive_seed(1, "a", 2) != derive_seed(1, "b", 2));
  CHECK(derive_seed(1, "a", 2) != derive_seed(1, "a", 3));
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) CHECK(a.bits() == b.bits());
  Rng r(4);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 10000; ++i) {
    const auto x = r.below(5);
    REQUIRE(x < 5);
    ++counts[static_cast<std::size_t>(x)];
  }
  for (int c : counts) CHECK(c > 1800);
  auto p = r.permutation(50);
  std::sort(p.begin(), p.end());
  for (int i = 0; i < 50; ++i) CHECK(p[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("parallel_map keeps index order and rethrows") {
  const auto out = parallel_map(37, 4, [](int i) { return i * i; });
  for (int i = 0; i < 37; ++i) CHECK(out[static_cast<std::size_t>(i)] == i * i);
  CHECK_THROWS_AS(parallel_map(8, 3,
                               [](int i) {
                                 if (i == 5) throw std::runtime_error("boom");
                                 return i;
                               }),
                  std::runtime_error);
}

TEST_CASE("permuted bipartite family") {
  const auto pb = permuted_bipartite(16, 3);
  CHECK(pb.side.measure() == doctest::Approx(0.5));
  CHECK(int_f(pb.graphon, ConcaveFunctional::entropy()) == 0.0);
  const StepGraphon sorted = apply_ordered_partition(pb.graphon, pb.side.shift_partition());
  CHECK(l1_distance(sorted, bipartite_chessboard()) <= 1e-12);
  CHECK_THROWS(permuted_bipartite(7, 1));
}
