#include "graphonlab/regularity.hpp"

#include "graphonlab/operations.hpp"
#include "graphonlab/parallel.hpp"
#include "graphonlab/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace graphonlab {

// ---------------------------------------------------------------- Graph

Graph::Graph(Matrix<double> adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols()) throw std::invalid_argument("adjacency must be square");
  for (Index i = 0; i < adjacency_.rows(); ++i) {
    if (adjacency_(i, i) != 0.0) throw std::invalid_argument("graph has a loop at vertex " + std::to_string(i));
    for (Index j = 0; j < adjacency_.cols(); ++j) {
      const double a = adjacency_(i, j);
      if (a != 0.0 && a != 1.0) throw std::invalid_argument("adjacency entries must be 0 or 1");
      if (a != adjacency_(j, i)) {
        throw std::invalid_argument("adjacency is not symmetric at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      }
    }
  }
}

Graph Graph::empty(int n) { return Graph(Matrix<double>::Zero(n, n)); }

Graph Graph::complete_bipartite(int a, int b) {
  const int n = a + b;
  Matrix<double> m = Matrix<double>::Zero(n, n);
  m.topRightCorner(a, b).setOnes();
  m.bottomLeftCorner(b, a).setOnes();
  return Graph(std::move(m));
}

Graph Graph::cycle(int n) {
  Matrix<double> m = Matrix<double>::Zero(n, n);
  for (int i = 0; i < n && n > 1; ++i) {
    const int j = (i + 1) % n;
    if (i != j) m(i, j) = m(j, i) = 1.0;
  }
  return Graph(std::move(m));
}

Graph Graph::gnp(int n, double p, std::uint64_t seed) {
  Rng rng(seed);
  Matrix<double> m = Matrix<double>::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p)) m(i, j) = m(j, i) = 1.0;
    }
  }
  return Graph(std::move(m));
}

Graph Graph::from_edge_list(const std::string& text, int n) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<int, int>> edges;
  int max_v = -1;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long u = -1, v = -1;
    if (!(ls >> u >> v) || u < 0 || v < 0) {
      throw std::invalid_argument("edge list line " + std::to_string(line_no) + ": expected 'u v'");
    }
    if (u == v) throw std::invalid_argument("edge list line " + std::to_string(line_no) + ": loop");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    max_v = std::max({max_v, static_cast<int>(u), static_cast<int>(v)});
  }
  const int order = std::max(n, max_v + 1);
  Matrix<double> m = Matrix<double>::Zero(order, order);
  for (auto [u, v] : edges) m(u, v) = m(v, u) = 1.0;
  return Graph(std::move(m));
}

long long Graph::edge_count() const { return static_cast<long long>(adjacency_.sum() / 2.0 + 0.5); }

long long Graph::edges_within(const std::vector<bool>& in) const {
  long long e = 0;
  for (int u = 0; u < order(); ++u) {
    if (!in[static_cast<std::size_t>(u)]) continue;
    for (int v = u + 1; v < order(); ++v) {
      if (in[static_cast<std::size_t>(v)] && adjacent(u, v)) ++e;
    }
  }
  return e;
}

std::string Graph::to_edge_list() const {
  std::ostringstream os;
  for (int u = 0; u < order(); ++u) {
    for (int v = u + 1; v < order(); ++v) {
      if (adjacent(u, v)) os << u << ' ' << v << '\n';
    }
  }
  return os.str();
}

StepGraphon Graph::graphon() const { return StepGraphon::uniform(adjacency_); }

// ------------------------------------------------------ VertexPartition

VertexPartition::VertexPartition(std::vector<int> assignment) : assignment_(std::move(assignment)) {
  int max_part = -1;
  for (int a : assignment_) {
    if (a < 0) throw std::invalid_argument("part indices must be non-negative");
    max_part = std::max(max_part, a);
  }
  parts_ = max_part + 1;
  std::vector<int> count(static_cast<std::size_t>(parts_), 0);
  for (int a : assignment_) ++count[static_cast<std::size_t>(a)];
  for (int p = 0; p < parts_; ++p) {
    if (count[static_cast<std::size_t>(p)] == 0) {
      throw std::invalid_argument("vertex partition part " + std::to_string(p) + " is empty");
    }
  }
}

VertexPartition VertexPartition::trivial(int n) { return VertexPartition(std::vector<int>(static_cast<std::size_t>(n), 0)); }

VertexPartition VertexPartition::discrete(int n) {
  std::vector<int> a(static_cast<std::size_t>(n));
  std::iota(a.begin(), a.end(), 0);
  return VertexPartition(std::move(a));
}

std::vector<int> VertexPartition::sizes() const {
  std::vector<int> s(static_cast<std::size_t>(parts_), 0);
  for (int a : assignment_) ++s[static_cast<std::size_t>(a)];
  return s;
}

VertexPartition VertexPartition::canonical() const {
  std::vector<int> relabel(static_cast<std::size_t>(parts_), -1);
  std::vector<int> out(assignment_.size());
  int next = 0;
  for (std::size_t v = 0; v < assignment_.size(); ++v) {
    int& r = relabel[static_cast<std::size_t>(assignment_[v])];
    if (r < 0) r = next++;
    out[v] = r;
  }
  return VertexPartition(std::move(out));
}

// ------------------------------------------------------------ densities

namespace {

Matrix<double> indicator(const VertexPartition& p) {
  Matrix<double> s = Matrix<double>::Zero(p.order(), p.parts());
  for (int v = 0; v < p.order(); ++v) s(v, p.part_of(v)) = 1.0;
  return s;
}

double index_from_counts(const Matrix<double>& counts, const std::vector<int>& sizes, int n,
                         const ConcaveFunctional& f) {
  const double n2 = static_cast<double>(n) * n;
  double total = 0.0;
  const auto k = static_cast<Index>(sizes.size());
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      const double w = static_cast<double>(sizes[static_cast<std::size_t>(i)]) * sizes[static_cast<std::size_t>(j)];
      if (w == 0.0) continue;
      total += w / n2 * f(counts(i, j) / w);
    }
  }
  return total;
}

}  // namespace

Matrix<double> densities(const Graph& g, const VertexPartition& p) {
  if (p.order() != g.order()) throw std::invalid_argument("partition size does not match the graph");
  const Matrix<double> s = indicator(p);
  const Matrix<double> counts = s.transpose() * g.adjacency() * s;
  const auto sizes = p.sizes();
  Matrix<double> d(p.parts(), p.parts());
  for (int i = 0; i < p.parts(); ++i) {
    for (int j = 0; j < p.parts(); ++j) {
      const double w = static_cast<double>(sizes[static_cast<std::size_t>(i)]) * sizes[static_cast<std::size_t>(j)];
      d(i, j) = w > 0 ? counts(i, j) / w : 0.0;
    }
  }
  return d;
}

double partition_index(const Graph& g, const VertexPartition& p, const ConcaveFunctional& f) {
  const Matrix<double> s = indicator(p);
  return index_from_counts(s.transpose() * g.adjacency() * s, p.sizes(), g.order(), f);
}

StepGraphon quotient_graphon(const Graph& g, const VertexPartition& p) {
  const auto sizes = p.sizes();
  Vector<double> m(p.parts());
  for (int i = 0; i < p.parts(); ++i) m(i) = static_cast<double>(sizes[static_cast<std::size_t>(i)]) / g.order();
  return StepGraphon(m, densities(g, p));
}

// ------------------------------------------------------ regularity check

double regularity_deviation(const Graph& g, const VertexPartition& p, const std::vector<bool>& in) {
  const Matrix<double> d = densities(g, p);
  Vector<double> b = Vector<double>::Zero(p.parts());
  for (int v = 0; v < g.order(); ++v) {
    if (in[static_cast<std::size_t>(v)]) b(p.part_of(v)) += 1.0;
  }
  const double predicted = 0.5 * b.dot(d * b);
  const double n2 = static_cast<double>(g.order()) * g.order();
  return (static_cast<double>(g.edges_within(in)) - predicted) / n2;
}

namespace {

/// Q = A - D_P so that e(G[B]) - prediction = (1/2) x' Q x for the indicator x.
Matrix<double> deviation_form(const Graph& g, const VertexPartition& p) {
  const Matrix<double> d = densities(g, p);
  const int n = g.order();
  Matrix<double> q(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) q(u, v) = g.adjacency()(u, v) - d(p.part_of(u), p.part_of(v));
  }
  return q;
}

struct FlipSearch {
  double value = 0.0;  // (1/2) x' Q x
  std::vector<bool> x;
};

/// First-improvement vertex-flip ascent of sign * (1/2) x' Q x.
FlipSearch flip_ascent(const Matrix<double>& q, std::vector<bool> x, double sign) {
  const Index n = q.rows();
  Vector<double> qx = Vector<double>::Zero(n);
  for (Index v = 0; v < n; ++v) {
    if (x[static_cast<std::size_t>(v)]) qx += q.col(v);
  }
  double value = 0.0;
  for (Index v = 0; v < n; ++v) {
    if (x[static_cast<std::size_t>(v)]) value += 0.5 * qx(v);
  }
  bool improved = true;
  while (improved) {
    improved = false;
    for (Index u = 0; u < n; ++u) {
      const bool in = x[static_cast<std::size_t>(u)];
      const double delta = in ? -qx(u) + 0.5 * q(u, u) : qx(u) + 0.5 * q(u, u);
      if (sign * delta > 1e-12) {
        x[static_cast<std::size_t>(u)] = !in;
        if (in) qx -= q.col(u);
        else qx += q.col(u);
        value += delta;
        improved = true;
      }
    }
  }
  return {value, std::move(x)};
}

FlipSearch exhaustive_search(const Matrix<double>& q) {
  const Index n = q.rows();
  Vector<double> qx = Vector<double>::Zero(n);
  std::vector<bool> x(static_cast<std::size_t>(n), false);
  double value = 0.0;
  FlipSearch best{0.0, x};
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t gc = 1; gc < count; ++gc) {
    const int u = __builtin_ctzll(gc);
    const bool in = x[static_cast<std::size_t>(u)];
    value += in ? -qx(u) + 0.5 * q(u, u) : qx(u) + 0.5 * q(u, u);
    if (in) qx -= q.col(u);
    else qx += q.col(u);
    x[static_cast<std::size_t>(u)] = !in;
    if (std::abs(value) > std::abs(best.value) + 1e-12) best = {value, x};
  }
  return best;
}

}  // namespace

RegularityReport weak_regularity_check(const Graph& g, const VertexPartition& p, double eps,
                                       const RegularityOptions& options) {
  if (!(eps > 0)) throw std::invalid_argument("weak_regularity_check needs eps > 0");
  const int n = g.order();
  const Matrix<double> q = deviation_form(g, p);
  RegularityReport report;
  report.epsilon = eps;
  FlipSearch best;
  if (n <= std::min(options.exhaustive_up_to, 24)) {
    best = exhaustive_search(q);
    report.exhaustive = true;
  } else {
    std::vector<std::vector<bool>> starts;
    for (int part = 0; part < p.parts(); ++part) {
      std::vector<bool> x(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v) x[static_cast<std::size_t>(v)] = p.part_of(v) == part;
      starts.push_back(std::move(x));
    }
    starts.emplace_back(static_cast<std::size_t>(n), true);
    const int fixed = static_cast<int>(starts.size());
    const int total = fixed + std::max(0, options.restarts);
    auto run = [&](int idx) {
      std::vector<bool> x;
      if (idx < fixed) {
        x = starts[static_cast<std::size_t>(idx)];
      } else {
        Rng rng(derive_seed(options.seed, "regularity", static_cast<std::uint64_t>(idx - fixed)));
        x.resize(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) x[static_cast<std::size_t>(v)] = rng.bernoulli(0.5);
      }
      FlipSearch up = flip_ascent(q, x, 1.0);
      FlipSearch down = flip_ascent(q, std::move(x), -1.0);
      return std::abs(down.value) > std::abs(up.value) ? down : up;
    };
    const auto found = parallel_map(total, options.threads, run);
    best = found.front();
    for (const auto& f : found) {
      if (std::abs(f.value) > std::abs(best.value) + 1e-12) best = f;
    }
  }
  const double n2 = static_cast<double>(n) * n;
  report.deviation = best.value / n2;
  report.violation = std::abs(report.deviation);
  if (report.violation > eps) {
    report.regular = false;
    std::vector<int> b;
    for (int v = 0; v < n; ++v) {
      if (best.x[static_cast<std::size_t>(v)]) b.push_back(v);
    }
    report.witness = std::move(b);
  }
  return report;
}

// ---------------------------------------------------------------- pumping

PumpResult index_pump(const Graph& g, const VertexPartition& p, const std::vector<int>& b) {
  const int n = g.order();
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (int v : b) {
    if (v < 0 || v >= n) throw std::invalid_argument("witness vertex out of range");
    in[static_cast<std::size_t>(v)] = true;
  }
  // Piece (part, inside) -> new label, numbered part by part with C ∩ B first.
  std::vector<int> has_in(static_cast<std::size_t>(p.parts()), 0), has_out(static_cast<std::size_t>(p.parts()), 0);
  for (int v = 0; v < n; ++v) {
    (in[static_cast<std::size_t>(v)] ? has_in : has_out)[static_cast<std::size_t>(p.part_of(v))] = 1;
  }
  std::vector<int> label_in(static_cast<std::size_t>(p.parts())), label_out(static_cast<std::size_t>(p.parts()));
  int next = 0;
  bool split = false;
  for (int c = 0; c < p.parts(); ++c) {
    if (has_in[static_cast<std::size_t>(c)]) label_in[static_cast<std::size_t>(c)] = next++;
    if (has_out[static_cast<std::size_t>(c)]) label_out[static_cast<std::size_t>(c)] = next++;
    if (has_in[static_cast<std::size_t>(c)] && has_out[static_cast<std::size_t>(c)]) split = true;
  }
  std::vector<int> a(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const int c = p.part_of(v);
    a[static_cast<std::size_t>(v)] = in[static_cast<std::size_t>(v)] ? label_in[static_cast<std::size_t>(c)] : label_out[static_cast<std::size_t>(c)];
  }
  return {VertexPartition(std::move(a)), split};
}

RegularityTrace weak_regularity_partition(const Graph& g, double eps, const RegularityOptions& options) {
  if (!(eps > 0)) throw std::invalid_argument("weak_regularity_partition needs eps > 0");
  const auto negsq = ConcaveFunctional::negative_square();
  const int cap = static_cast<int>(std::ceil(4.0 / (eps * eps)));
  RegularityTrace trace{VertexPartition::trivial(g.order()), {}, 0};
  for (int round = 0;; ++round) {
    PumpRound row;
    row.round = round;
    row.parts = trace.partition.parts();
    row.index = partition_index(g, trace.partition, negsq);
    RegularityOptions opts = options;
    opts.seed = derive_seed(options.seed, "pump", static_cast<std::uint64_t>(round));
    const RegularityReport report = weak_regularity_check(g, trace.partition, eps, opts);
    row.violation = report.violation;
    if (report.regular) {
      trace.rounds.push_back(row);
      return trace;
    }
    if (trace.pumps >= cap) {
      trace.rounds.push_back(row);
      throw RegularityError("pump cap ceil(4/eps^2) = " + std::to_string(cap) + " exceeded", trace.rounds);
    }
    PumpResult pumped = index_pump(g, trace.partition, *report.witness);
    const double after = partition_index(g, pumped.partition, negsq);
    row.decrease = row.index - after;
    if (!(row.decrease > 0.0)) {
      trace.rounds.push_back(row);
      throw RegularityError("index pump did not decrease INT_{-x^2}", trace.rounds);
    }
    row.below_quarter_eps_sq = row.decrease < eps * eps / 4.0;
    trace.rounds.push_back(row);
    trace.partition = std::move(pumped.partition);
    ++trace.pumps;
  }
}

// ------------------------------------------------- minimizing partitions

namespace {

struct SearchState {
  const Graph* g;
  const ConcaveFunctional* f;
  int k;
  std::vector<int> assign;
  std::vector<int> sizes;
  Matrix<double> counts;     // ordered edge counts between parts
  Matrix<double> neighbors;  // n x k: neighbours of v in part p
  double index = 0.0;

  void init(std::vector<int> a) {
    assign = std::move(a);
    const int n = g->order();
    sizes.assign(static_cast<std::size_t>(k), 0);
    Matrix<double> s = Matrix<double>::Zero(n, k);
    for (int v = 0; v < n; ++v) {
      s(v, assign[static_cast<std::size_t>(v)]) = 1.0;
      ++sizes[static_cast<std::size_t>(assign[static_cast<std::size_t>(v)])];
    }
    neighbors = g->adjacency() * s;
    counts = s.transpose() * neighbors;
    index = index_from_counts(counts, sizes, n, *f);
  }

  static void move_counts(Matrix<double>& c, const Vector<double>& r, int from, int to) {
    c.row(from) -= r.transpose();
    c.col(from) -= r;
    c.row(to) += r.transpose();
    c.col(to) += r;
  }

  double evaluate_move(int v, int to) const {
    const int from = assign[static_cast<std::size_t>(v)];
    Matrix<double> c = counts;
    move_counts(c, neighbors.row(v).transpose(), from, to);
    std::vector<int> s = sizes;
    --s[static_cast<std::size_t>(from)];
    ++s[static_cast<std::size_t>(to)];
    return index_from_counts(c, s, g->order(), *f);
  }

  double evaluate_swap(int u, int v) const {
    const int a = assign[static_cast<std::size_t>(u)];
    const int b = assign[static_cast<std::size_t>(v)];
    Matrix<double> c = counts;
    move_counts(c, neighbors.row(u).transpose(), a, b);
    Vector<double> rv = neighbors.row(v).transpose();
    const double auv = g->adjacency()(u, v);
    rv(a) -= auv;
    rv(b) += auv;
    move_counts(c, rv, b, a);
    return index_from_counts(c, sizes, g->order(), *f);
  }

  void apply_move(int v, int to) {
    const int from = assign[static_cast<std::size_t>(v)];
    move_counts(counts, neighbors.row(v).transpose(), from, to);
    --sizes[static_cast<std::size_t>(from)];
    ++sizes[static_cast<std::size_t>(to)];
    assign[static_cast<std::size_t>(v)] = to;
    for (int w = 0; w < g->order(); ++w) {
      if (g->adjacent(v, w)) {
        neighbors(w, from) -= 1.0;
        neighbors(w, to) += 1.0;
      }
    }
    index = index_from_counts(counts, sizes, g->order(), *f);
  }
};

/// First-improvement local search over single-vertex moves and swaps.
void local_search(SearchState& st, long long& budget) {
  const int n = st.g->order();
  bool improved = true;
  while (improved && budget > 0) {
    improved = false;
    for (int v = 0; v < n && budget > 0; ++v) {
      const int from = st.assign[static_cast<std::size_t>(v)];
      if (st.sizes[static_cast<std::size_t>(from)] == 1) continue;
      for (int to = 0; to < st.k && budget > 0; ++to) {
        if (to == from) continue;
        --budget;
        if (st.evaluate_move(v, to) < st.index - 1e-12) {
          st.apply_move(v, to);
          improved = true;
          break;
        }
      }
    }
    if (improved) continue;
    for (int u = 0; u < n && budget > 0 && !improved; ++u) {
      for (int v = u + 1; v < n && budget > 0; ++v) {
        const int a = st.assign[static_cast<std::size_t>(u)];
        const int b = st.assign[static_cast<std::size_t>(v)];
        if (a == b) continue;
        --budget;
        if (st.evaluate_swap(u, v) < st.index - 1e-12) {
          st.apply_move(u, b);
          st.apply_move(v, a);
          improved = true;
          break;
        }
      }
    }
  }
}

}  // namespace

MinPartitionResult min_int_partition(const Graph& g, int k, const ConcaveFunctional& f,
                                     const MinPartitionOptions& options) {
  const int n = g.order();
  if (k < 1 || k > n) throw std::invalid_argument("min_int_partition needs 1 <= k <= n");
  if (k == n || k == 1) {
    VertexPartition p = k == n ? VertexPartition::discrete(n) : VertexPartition::trivial(n);
    const double idx = partition_index(g, p, f);
    return {p, idx, true, {{p, idx}}};
  }
  if (options.allow_exhaustive && n <= 12 && k <= 3) {
    // Restricted growth strings with exactly k blocks.
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    std::optional<VertexPartition> best;
    double best_index = 0.0;
    auto rec = [&](auto&& self, int v, int used) -> void {
      if (n - v < k - used) return;
      if (v == n) {
        if (used != k) return;
        VertexPartition p(a);
        const double idx = partition_index(g, p, f);
        if (!best || idx < best_index - 1e-15) {
          best = p;
          best_index = idx;
        }
        return;
      }
      for (int c = 0; c <= std::min(used, k - 1); ++c) {
        a[static_cast<std::size_t>(v)] = c;
        self(self, v + 1, std::max(used, c + 1));
      }
    };
    rec(rec, 0, 0);
    return {*best, best_index, true, {{*best, best_index}}};
  }

  MinPartitionResult result{VertexPartition::trivial(n), 0.0, false, {}};
  bool have = false;
  std::map<std::vector<int>, double> optima;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    Rng rng(derive_seed(options.seed, "minpart", static_cast<std::uint64_t>(r)));
    std::vector<int> order = rng.permutation(n);
    std::vector<int> a(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int v = order[static_cast<std::size_t>(i)];
      a[static_cast<std::size_t>(v)] = i < k ? i : static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    }
    SearchState st{&g, &f, k, {}, {}, {}, {}, 0.0};
    st.init(std::move(a));
    long long budget = options.moves;
    local_search(st, budget);
    const VertexPartition found = VertexPartition(st.assign).canonical();
    const double idx = partition_index(g, found, f);
    optima.emplace(found.assignment(), idx);
    if (!have || idx < result.index - 1e-15) {
      result.partition = found;
      result.index = idx;
      have = true;
    }
  }
  for (const auto& [a, idx] : optima) result.local_optima.emplace_back(VertexPartition(a), idx);
  return result;
}

FiniteIndexReport finite_index_experiment(const Graph& g, double eps, const ConcaveFunctional& f,
                                          const RegularityOptions& check, const MinPartitionOptions& search) {
  if (!(eps > 0)) throw std::invalid_argument("finite_index_experiment needs eps > 0");
  const int n = g.order();
  const auto negsq = ConcaveFunctional::negative_square();
  FiniteIndexReport report;
  const int top = static_cast<int>(std::ceil(4.0 / (eps * eps)));
  for (int e = 0; e <= top && e < 31; ++e) report.candidates.push_back(1 << e);
  for (int m : report.candidates) {
    if (m > n) {
      throw std::runtime_error("finite index experiment exhausted its budget: M = " + std::to_string(m) +
                               " exceeds the vertex count " + std::to_string(n));
    }
    MinPartitionOptions so = search;
    so.seed = derive_seed(search.seed, "finite-index", static_cast<std::uint64_t>(m));
    const MinPartitionResult best = min_int_partition(g, m, f, so);
    RegularityOptions co = check;
    co.seed = derive_seed(check.seed, "finite-index-check", static_cast<std::uint64_t>(m));
    const RegularityReport rr = weak_regularity_check(g, best.partition, eps, co);
    IndexStage stage;
    stage.parts = m;
    stage.index_f = best.index;
    stage.index_negsq = partition_index(g, best.partition, negsq);
    stage.regular = rr.regular;
    stage.violation = rr.violation;
    stage.exhaustive = best.exhaustive;
    report.chain.push_back(stage);
    if (rr.regular) {
      report.chosen = m;
      break;
    }
  }

  // Stability variant: partitions within eps^2/8 of the M-part minimum of INT_{-x^2}.
  for (const IndexStage& stage : report.chain) {
    MinPartitionOptions so = search;
    so.allow_exhaustive = false;
    so.restarts = std::max(search.restarts, 16);
    so.seed = derive_seed(search.seed, "stability", static_cast<std::uint64_t>(stage.parts));
    const MinPartitionResult res = min_int_partition(g, stage.parts, negsq, so);
    StabilityRow row;
    row.parts = stage.parts;
    row.min_index = std::min(res.index, stage.index_negsq);
    for (const auto& [p, idx] : res.local_optima) {
      if (idx > row.min_index + eps * eps / 8.0) continue;
      ++row.near_minimal;
      RegularityOptions co = check;
      co.seed = derive_seed(check.seed, "stability-check", static_cast<std::uint64_t>(row.near_minimal));
      if (weak_regularity_check(g, p, eps, co).regular) ++row.near_minimal_regular;
    }
    report.stability.push_back(row);
  }
  return report;
}

}  // namespace graphonlab
