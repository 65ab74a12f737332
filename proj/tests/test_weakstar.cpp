#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graphonlab/cutnorm.hpp"
#include "graphonlab/families.hpp"
#include "graphonlab/operations.hpp"
#include "graphonlab/weakstar.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace graphonlab;

namespace {

/// max over grid rectangles of |∫∫ (W1 - W2)|, each rectangle integrated directly.
double rectangle_oracle(const StepGraphon& a, const StepGraphon& b, int depth) {
  const int n = 1 << depth;
  const double h = 1.0 / n;
  double best = 0.0;
  for (int x0 = 0; x0 < n; ++x0) {
    for (int x1 = x0 + 1; x1 <= n; ++x1) {
      for (int y0 = 0; y0 < n; ++y0) {
        for (int y1 = y0 + 1; y1 <= n; ++y1) {
          const double d = rect_integral(a, x0 * h, x1 * h, y0 * h, y1 * h) - rect_integral(b, x0 * h, x1 * h, y0 * h, y1 * h);
          best = std::max(best, std::abs(d));
        }
      }
    }
  }
  return best;
}

/// n communities of size m in shuffled vertex order, 0.9 inside and 0.1 across.
std::pair<StepGraphon, OrderedPartition> planted(int parts, int m, std::uint64_t seed) {
  const int n = parts * m;
  std::vector<int> label(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) label[static_cast<std::size_t>(v)] = v / m;
  Rng rng(seed);
  rng.shuffle(label);
  Matrix<double> v(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) v(i, j) = label[static_cast<std::size_t>(i)] == label[static_cast<std::size_t>(j)] ? 0.9 : 0.1;
  }
  const StepGraphon g = StepGraphon::uniform(v);
  return {g, OrderedPartition(g.measures(), label)};
}

}  // namespace

TEST_CASE("rectangle profile") {
  const RectProfile p = rect_profile(bipartite_chessboard(), 2);
  CHECK(p.side() == 4);
  CHECK(p.rectangle(0, 4, 0, 4) == doctest::Approx(0.5));
  CHECK(p.rectangle(0, 2, 0, 2) == doctest::Approx(0.0));
  CHECK(p.rectangle(0, 2, 2, 4) == doctest::Approx(0.25));
  CHECK(p.at(0, 0, 0) == doctest::Approx(0.5));
  CHECK(p.at(1, 1, 0) == doctest::Approx(0.25));
  CHECK(p.cells().sum() == doctest::Approx(0.5));
  CHECK_THROWS(p.rectangle(0, 5, 0, 1));
  CHECK_THROWS(p.at(3, 0, 0));
  CHECK_THROWS(rect_profile(bipartite_chessboard(), kMaxProfileDepth + 1));

  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const StepGraphon w = testing::random_graphon(rng, 5);
    const RectProfile q = rect_profile(w, 3);
    CHECK(q.cells().sum() == doctest::Approx(w.measures().dot(w.values() * w.measures())));
    const int x = static_cast<int>(rng.below(8)), y = static_cast<int>(rng.below(8));
    CHECK(q.rectangle(0, x, 0, 8) + q.rectangle(x, 8, 0, 8) == doctest::Approx(q.rectangle(0, 8, 0, 8)));
    CHECK(q.rectangle(0, 8, y, 8) == doctest::Approx(rect_integral(w, 0.0, 1.0, y / 8.0, 1.0)));
  }
}

TEST_CASE("weak* pseudometric") {
  Rng rng(4);
  for (int trial = 0; trial < 15; ++trial) {
    const StepGraphon a = testing::random_graphon(rng, 3);
    const StepGraphon b = testing::random_graphon(rng, 4);
    const StepGraphon c = testing::random_graphon(rng, 2);
    const double ab = weakstar_pseudometric(a, b, 3);
    CHECK(weakstar_pseudometric(a, a, 3) == 0.0);
    CHECK(ab == doctest::Approx(weakstar_pseudometric(b, a, 3)));
    CHECK(ab <= weakstar_pseudometric(a, c, 3) + weakstar_pseudometric(c, b, 3) + 1e-12);
    CHECK(ab <= cutnorm_bilinear_exact(difference(a, b)).value + 1e-9);
    CHECK(weakstar_pseudometric(a, b, 2) <= ab + 1e-12);
    CHECK(ab <= weakstar_pseudometric(a, b, 4) + 1e-12);
    CHECK(ab == doctest::Approx(rectangle_oracle(a, b, 3)).epsilon(1e-12));
  }
}

TEST_CASE("chessboard family") {
  const auto half = constant_graphon(0.5);
  for (int k = 1; k <= 8; ++k) {
    const StepGraphon w = chessboard_family(k);
    const double c = 2.0 * k + 2, t = 2.0 * k + 4;
    CHECK(int_f(w, ConcaveFunctional::entropy()) == doctest::Approx(1.0 - (c / t) * (c / t)));
    CHECK(weakstar_pseudometric(w, half, 3) == doctest::Approx(rectangle_oracle(w, half, 3)).epsilon(1e-12));
    CHECK(weakstar_pseudometric(w, half, 5) == doctest::Approx(1.0 / (2 * t * t)));
  }
  CHECK(int_f(chessboard_family(3), ConcaveFunctional::entropy()) == doctest::Approx(0.36));
  // At depth 3 every 1/8 cell of the k = 6 board covers two whole checker cells.
  CHECK(weakstar_pseudometric(chessboard_family(6), half, 3) <= 1e-15);
}

TEST_CASE("dyadic stepping and aggregate") {
  const StepGraphon s = dyadic_stepping(chessboard_family(1), 1);
  CHECK(s.steps() == 2);
  CHECK(s.value(0, 0) == doctest::Approx(4.0 / 9));
  const StepGraphon agg = dyadic_aggregate({bipartite_chessboard(), constant_graphon(0.0)}, 1);
  CHECK(agg.value(0, 1) == doctest::Approx(0.5));
  CHECK(agg.value(0, 0) == doctest::Approx(0.0));
  CHECK_THROWS(dyadic_aggregate({}, 1));
}

TEST_CASE("stripe sampler") {
  const StepGraphon chess = bipartite_chessboard();
  const StripeSample same = sample_stripe_version(chess, {OrderedPartition::trivial(), 1, 7});
  CHECK(l1_distance(same.graphon, chess) == 0.0);
  const StripeSample flat = sample_stripe_version(constant_graphon(0.3), {OrderedPartition::trivial(), 16, 7});
  CHECK(l1_distance(flat.graphon, constant_graphon(0.3)) <= 1e-15);

  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const StepGraphon w = testing::random_graphon(rng, 4);
    const OrderedPartition p = OrderedPartition::uniform(3);
    const StripeSample u = sample_stripe_version(w, {p, 5, static_cast<std::uint64_t>(trial)});
    REQUIRE(u.permutations.size() == 3);
    for (auto perm : u.permutations) {
      std::sort(perm.begin(), perm.end());
      std::vector<int> id(5);
      std::iota(id.begin(), id.end(), 0);
      CHECK(perm == id);
    }
    const auto hu = value_histogram(u.graphon), hw = value_histogram(w);
    REQUIRE(hu.size() == hw.size());
    for (std::size_t i = 0; i < hu.size(); ++i) {
      CHECK(hu[i].first == doctest::Approx(hw[i].first));
      CHECK(hu[i].second == doctest::Approx(hw[i].second));
    }
    CHECK(int_f(u.graphon, ConcaveFunctional::entropy()) == doctest::Approx(int_f(w, ConcaveFunctional::entropy())));
    CHECK((block_integrals(u.graphon, p) - block_integrals(w, p)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(l1_distance(u.graphon, sample_stripe_version(w, {p, 5, static_cast<std::uint64_t>(trial)}).graphon) == 0.0);
  }
  CHECK_THROWS(sample_stripe_version(chess, {OrderedPartition::trivial(), 0, 1}));
}

TEST_CASE("stripe samples concentrate on the stepping") {
  // The mean of the test-rectangle integral over many seeds is close to the
  // stepping's value 1/8, up to the O(1/s) diagonal bias.
  double mean = 0.0;
  const int seeds = 200;
  for (int i = 0; i < seeds; ++i) {
    const StripeSample u = sample_stripe_version(bipartite_chessboard(), {OrderedPartition::trivial(), 64, static_cast<std::uint64_t>(i)});
    mean += rect_integral(u.graphon, 0.0, 0.5, 0.0, 0.5);
  }
  mean /= seeds;
  CHECK(std::abs(mean - 0.125) <= 0.01);

  const AttainmentRow flat = attainment_row(constant_graphon(0.4), OrderedPartition::trivial(), 50, 50, 3, 3);
  CHECK(flat.pseudometric <= 1e-15);
  CHECK(flat.deviation <= 1e-15);
  CHECK(flat.block_error <= 1e-15);
  CHECK_FALSE(flat.event);
  CHECK(flat.threshold == doctest::Approx(std::pow(50.0, -0.25) + 4.0 / 50));
  CHECK(sampler_tail_bound(16) == doctest::Approx(2 * std::exp(-1.0)));

  const std::vector<StepGraphon> gammas(4, bipartite_chessboard());
  const AttainmentReport one = stepping_attainment_trial(gammas, {10, 20, 30, 40}, {10, 20, 30, 40}, OrderedPartition::trivial(), 9, 3, 1);
  const AttainmentReport three = stepping_attainment_trial(gammas, {10, 20, 30, 40}, {10, 20, 30, 40}, OrderedPartition::trivial(), 9, 3, 3);
  REQUIRE(one.rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(one.rows[i].deviation == three.rows[i].deviation);
  CHECK(one.max_block_error <= 1e-12);
}

TEST_CASE("shift-left versions") {
  Vector<double> m(2);
  m << 0.5, 0.5;
  Matrix<double> v(2, 2);
  v << 1, 0, 0, 0;
  const StepGraphon corner(m, v);
  const StepGraphon moved = shift_left_version(corner, Subset::interval(0.5, 1.0));
  Matrix<double> expected(2, 2);
  expected << 0, 0, 0, 1;
  CHECK(l1_distance(moved, StepGraphon(m, expected)) <= 1e-15);
  CHECK(l1_distance(shift_left_version(corner, Subset::interval(0.0, 0.5)), corner) <= 1e-15);

  Rng rng(10);
  const StepGraphon w = testing::random_graphon(rng, 5);
  const StepGraphon s = shift_left_version(w, Subset::interval(0.3, 0.45));
  CHECK(int_f(s, ConcaveFunctional::entropy()) == doctest::Approx(int_f(w, ConcaveFunctional::entropy())));
  CHECK(rect_integral(s, 0.0, 0.15, 0.0, 0.15) == doctest::Approx(rect_integral(w, 0.3, 0.45, 0.3, 0.45)));
}

TEST_CASE("shift data") {
  const ShiftData d = shift_data({Subset::interval(0.0, 0.5)}, 2);
  CHECK(d.psi(0) == doctest::Approx(1.0));
  CHECK(d.psi(3) == doctest::Approx(0.0));
  CHECK(d.theta(4) == doctest::Approx(0.5));
  CHECK(d.xi(0) == doctest::Approx(0.5));
  CHECK(d.xi(4) == doctest::Approx(1.0));

  const ShiftData e = shift_data({Subset::interval(0.1, 0.6), Subset::interval(0.3, 0.9)}, 3);
  CHECK(e.psi.minCoeff() >= 0.0);
  CHECK(e.psi.maxCoeff() <= 1.0);
  CHECK(e.theta(8) == doctest::Approx(0.55));
  CHECK(e.xi(8) == doctest::Approx(1.0));
  for (Index i = 0; i < 8; ++i) {
    CHECK(e.theta(i + 1) >= e.theta(i));
    CHECK(e.xi(i + 1) >= e.xi(i));
  }
}

TEST_CASE("improvement experiment") {
  const auto h = ConcaveFunctional::entropy();
  std::vector<StepGraphon> gammas;
  std::vector<Subset> sets, empty;
  for (int i = 0; i < 6; ++i) {
    const auto pb = permuted_bipartite(32, static_cast<std::uint64_t>(i));
    gammas.push_back(pb.graphon);
    sets.push_back(pb.side);
    empty.emplace_back(pb.side.cell_measures(), std::vector<bool>(pb.side.mask().size(), false));
  }
  CHECK(tail_length(6) == 3);
  CHECK(tail_length(7) == 4);

  const ImprovementReport none = improvement_experiment(gammas, empty, h, 4);
  CHECK(std::abs(none.gap) <= 1e-12);

  const std::vector<StepGraphon> flat(4, constant_graphon(0.5));
  std::vector<Subset> halves(4, Subset::interval(0.2, 0.7));
  CHECK(std::abs(improvement_experiment(flat, halves, h, 3).gap) <= 1e-12);

  const ImprovementReport r = improvement_experiment(gammas, sets, h, 4);
  CHECK(r.tail == 3);
  CHECK(r.gap < -0.1);
  CHECK(r.sign == -1);
  CHECK(r.shift.theta(r.shift.theta.size() - 1) == doctest::Approx(0.5));
  CHECK(r.claim_margin > 0);
  CHECK_THROWS(improvement_experiment(gammas, {}, h, 4));
}

TEST_CASE("ordered multi-part shifts") {
  const auto h = ConcaveFunctional::entropy();
  std::vector<StepGraphon> gammas;
  std::vector<OrderedPartition> one, two, three;
  std::vector<Subset> sets;
  for (int i = 0; i < 4; ++i) {
    const auto pb = permuted_bipartite(24, static_cast<std::uint64_t>(20 + i));
    gammas.push_back(pb.graphon);
    one.push_back(OrderedPartition(pb.graphon.measures(), std::vector<int>(24, 0)));
    std::vector<int> labels(24);
    for (std::size_t c = 0; c < 24; ++c) labels[c] = pb.side.mask()[c] ? 0 : 1;
    two.emplace_back(pb.side.cell_measures(), labels);
    sets.push_back(pb.side);
  }
  const EllShiftReport trivial = ell_part_shift_experiment(gammas, one, h, 3);
  REQUIRE(trivial.chain.size() == 2);
  CHECK(trivial.chain[0] == doctest::Approx(trivial.chain[1]));

  const EllShiftReport pair = ell_part_shift_experiment(gammas, two, h, 3);
  REQUIRE(pair.chain.size() == 3);
  CHECK(pair.chain[2] == doctest::Approx(improvement_experiment(gammas, sets, h, 3).int_tilde));

  std::vector<StepGraphon> planted_gammas;
  for (int i = 0; i < 4; ++i) {
    auto [g, p] = planted(3, 8, static_cast<std::uint64_t>(i));
    planted_gammas.push_back(g);
    three.push_back(p);
  }
  const EllShiftReport chain = ell_part_shift_experiment(planted_gammas, three, h, 3);
  REQUIRE(chain.chain.size() == 4);
  for (std::size_t i = 0; i + 1 < chain.chain.size(); ++i) CHECK(chain.chain[i + 1] <= chain.chain[i] + 1e-12);
  CHECK(chain.chain.back() < chain.chain.front() - 0.05);

  std::vector<OrderedPartition> mixed{two[0], one[1], two[2], two[3]};
  CHECK_THROWS(ell_part_shift_experiment(gammas, mixed, h, 3));
}

TEST_CASE("planted dense block family") {
  const double h7 = binary_entropy(kNoelValue);
  for (int ell : {1, 2, 5}) {
    const StepGraphon g = noel_family(ell, 20, 3);
    CHECK(int_f(g, ConcaveFunctional::entropy()) == doctest::Approx(h7 / (ell * ell)));
    CHECK(g.value(0, 1) == kNoelValue);
  }
  CHECK_THROWS(noel_family(3, 20, 1));

  const NoelRegionReport region = noel_region_check(2, 40, 5, 4, 3);
  CHECK(region.min_region_average == doctest::Approx(kNoelValue));
  CHECK(region.max_region_average == doctest::Approx(kNoelValue));
  CHECK(region.cells_inside == 16);
  CHECK(region.min_inside_value == doctest::Approx(kNoelValue));

  const NoelMixingReport mix = noel_mixing(10, 200, 5, 16, 1);
  CHECK(mix.max_gap < 0.05);
  CHECK(mix.int_h > 0.99);
}
