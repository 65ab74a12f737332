#include "graphonlab/experiments.hpp"

#include "graphonlab/cutnorm.hpp"
#include "graphonlab/families.hpp"
#include "graphonlab/io.hpp"
#include "graphonlab/operations.hpp"
#include "graphonlab/random.hpp"
#include "graphonlab/regularity.hpp"
#include "graphonlab/weakstar.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <set>

namespace graphonlab {

using nlohmann::json;
using io::format_number;

namespace {

const std::map<std::string, bool>& registry() {
  static const std::map<std::string, bool> r{
      {"toy-bipartite", false},     {"chessboard-family", false}, {"improvement", true},
      {"minimizer-evidence", true}, {"regularity", true},         {"finite-index-set", true},
      {"noel", true},               {"sampler-concentration", true}};
  return r;
}

/// Typed access to a scenario's params with defaults and ranges. Unknown keys
/// are rejected up front.
class Params {
 public:
  Params(const json& j, std::string scenario, const std::set<std::string>& allowed)
      : j_(j), scenario_(std::move(scenario)) {
    if (!j_.is_object()) fail("params must be a JSON object");
    for (const auto& [key, value] : j_.items()) {
      if (!allowed.count(key)) fail("unknown param '" + key + "'");
    }
  }

  long long integer(const std::string& key, long long def, long long lo, long long hi) const {
    if (!j_.contains(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail("param '" + key + "' must be an integer");
    return in_range(key, v.get<long long>(), lo, hi);
  }

  double real(const std::string& key, double def, double lo, double hi) const {
    if (!j_.contains(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number()) fail("param '" + key + "' must be a number");
    return in_range(key, v.get<double>(), lo, hi);
  }

  std::string text(const std::string& key, const std::string& def, const std::set<std::string>& choices = {}) const {
    if (!j_.contains(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_string()) fail("param '" + key + "' must be a string");
    std::string s = v.get<std::string>();
    if (!choices.empty() && !choices.count(s)) fail("param '" + key + "' has unsupported value '" + s + "'");
    return s;
  }

  std::vector<int> integers(const std::string& key, std::vector<int> def, long long lo, long long hi) const {
    if (!j_.contains(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_array() || v.empty()) fail("param '" + key + "' must be a non-empty array of integers");
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) fail("param '" + key + "' must be a non-empty array of integers");
      out.push_back(static_cast<int>(in_range(key, e.get<long long>(), lo, hi)));
    }
    return out;
  }

  std::uint64_t seed() const {
    if (!j_.contains("seed")) fail("param 'seed' is required for randomized scenarios");
    const json& v = j_.at("seed");
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (!v.is_number_integer() || v.get<long long>() < 0) fail("param 'seed' must be a non-negative integer");
    return static_cast<std::uint64_t>(v.get<long long>());
  }

  ConcaveFunctional functional(const std::string& def) const {
    const std::string name = text("f", def);
    try {
      return ConcaveFunctional::by_name(name);
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(scenario_ + ": " + msg); }

 private:
  template <typename T>
  T in_range(const std::string& key, T v, T lo, T hi) const {
    if (!(v >= lo && v <= hi)) {
      fail("param '" + key + "' = " + format_number(static_cast<double>(v)) + " outside [" +
           format_number(static_cast<double>(lo)) + ", " + format_number(static_cast<double>(hi)) + "]");
    }
    return v;
  }

  const json& j_;
  std::string scenario_;
};

std::string num(double x) { return format_number(x); }
std::string num(long long x) { return std::to_string(x); }
std::string num(int x) { return std::to_string(x); }
std::string flag(bool b) { return b ? "true" : "false"; }

class Output {
 public:
  explicit Output(std::string dir) : dir_(std::move(dir)) {}

  void csv(const std::string& name, const io::CsvTable& t) { put(name, t.str()); }
  void graphon(const std::string& name, const StepGraphon& w) { put(name, io::to_json(w).dump(2) + "\n"); }
  void svg(const std::string& name, const StepGraphon& w) { put(name, io::render_svg(w)); }
  void text(const std::string& name, const std::string& s) { put(name, s); }
  std::vector<std::string> artifacts;

 private:
  void put(const std::string& name, const std::string& contents) {
    const std::string path = (std::filesystem::path(dir_) / name).string();
    io::write_file(path, contents);
    artifacts.push_back(path);
  }
  std::string dir_;
};

// -------------------------------------------------------------- graphs

struct GraphSpec {
  std::string kind;
  int a = 4, b = 4, n = 0;
  double p = 0.5;
  std::string path;
};

GraphSpec graph_spec(const Params& ps, const std::string& def_kind, int def_n) {
  GraphSpec g;
  g.kind = ps.text("graph", def_kind, {"complete_bipartite", "gnp", "cycle", "edge_list"});
  g.a = static_cast<int>(ps.integer("a", 4, 1, 4096));
  g.b = static_cast<int>(ps.integer("b", 4, 1, 4096));
  g.n = static_cast<int>(ps.integer("n", def_n, 1, 4096));
  g.p = ps.real("p", 0.5, 0.0, 1.0);
  g.path = ps.text("edge_list", "");
  if (g.kind == "edge_list" && g.path.empty()) ps.fail("graph 'edge_list' needs param 'edge_list' (a path)");
  return g;
}

Graph build_graph(const GraphSpec& g, std::uint64_t seed) {
  if (g.kind == "complete_bipartite") return Graph::complete_bipartite(g.a, g.b);
  if (g.kind == "cycle") return Graph::cycle(g.n);
  if (g.kind == "edge_list") return Graph::from_edge_list(io::read_file(g.path));
  return Graph::gnp(g.n, g.p, derive_seed(seed, "graph", 0));
}

// ----------------------------------------------------------- scenarios

json toy_bipartite(const Params& ps, Output& out) {
  const ConcaveFunctional f = ps.functional("H");
  const StepGraphon bip = bipartite_chessboard();
  const StepGraphon half = constant_graphon(0.5);
  const Kernel d = difference(bip, half);
  const CutNormResult bil = cutnorm_bilinear_exact(d);
  const CutNormResult sym = cutnorm_symmetric(d);
  const double ib = int_f(bip, f), ic = int_f(half, f);
  io::CsvTable t({"quantity", "value"});
  t.row({"int_f_bipartite", num(ib)})
      .row({"int_f_constant_half", num(ic)})
      .row({"cutnorm_bilinear_difference", num(bil.value)})
      .row({"cutnorm_symmetric_difference", num(sym.value)})
      .row({"l1_distance", num(l1_distance(bip, half))});
  out.csv("toy_bipartite.csv", t);
  out.graphon("bipartite.json", bip);
  out.graphon("constant_half.json", half);
  out.svg("bipartite.svg", bip);
  out.svg("constant_half.svg", half);
  return {{"f", f.name()},
          {"int_f_bipartite", ib},
          {"int_f_constant_half", ic},
          {"jensen_strict", ib < ic},
          {"cutnorm_bilinear", io::to_json(bil)},
          {"cutnorm_symmetric", io::to_json(sym)}};
}

json chessboard_family_scenario(const Params& ps, Output& out) {
  const int k_max = static_cast<int>(ps.integer("k_max", 8, 1, 32));
  const int depth = static_cast<int>(ps.integer("depth", 3, 0, 8));
  const int figure_k = static_cast<int>(ps.integer("figure_k", 3, 1, 32));
  const auto h = ConcaveFunctional::entropy();
  const StepGraphon half = constant_graphon(0.5);
  io::CsvTable t({"k", "steps", "int_H", "closed_form", "pseudometric_depth_" + std::to_string(depth)});
  std::vector<double> pm;
  json rows = json::array();
  for (int k = 1; k <= k_max; ++k) {
    const StepGraphon w = chessboard_family(k);
    const double r = (2.0 * k + 2) / (2.0 * k + 4);
    const double v = int_f(w, h);
    pm.push_back(weakstar_pseudometric(w, half, depth));
    t.row({num(k), num(static_cast<long long>(w.steps())), num(v), num(1.0 - r * r), num(pm.back())});
    rows.push_back({{"k", k}, {"int_H", v}, {"closed_form", 1.0 - r * r}, {"pseudometric", pm.back()}});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < pm.size(); ++i) decreasing = decreasing && pm[i] < pm[i - 1];
  out.csv("chessboard_family.csv", t);
  const StepGraphon fig = chessboard_family(figure_k);
  out.graphon("chessboard_k" + std::to_string(figure_k) + ".json", fig);
  out.svg("chessboard_k" + std::to_string(figure_k) + ".svg", fig);
  return {{"depth", depth}, {"rows", rows}, {"pseudometric_strictly_decreasing", decreasing}};
}

json improvement_scenario(const Params& ps, Output& out) {
  const auto n_values = ps.integers("n_values", {64, 128, 256}, 2, 4096);
  for (int n : n_values) {
    if (n % 2) ps.fail("n_values must be even");
  }
  const int copies = static_cast<int>(ps.integer("copies", 8, 1, 256));
  const int depth = static_cast<int>(ps.integer("depth", 4, 0, 8));
  const ConcaveFunctional f = ps.functional("H");
  const std::uint64_t seed = ps.seed();

  io::CsvTable t({"n", "int_hat", "int_tilde", "gap", "epsilon", "sign", "shifted_block", "baseline", "claim_margin"});
  json rows = json::array();
  bool all_strict = true, all_claim = true;
  for (int n : n_values) {
    std::vector<StepGraphon> gammas;
    std::vector<Subset> sets;
    for (int i = 0; i < copies; ++i) {
      auto pb = permuted_bipartite(n, derive_seed(derive_seed(seed, "improvement", static_cast<std::uint64_t>(n)),
                                                  "copy", static_cast<std::uint64_t>(i)));
      gammas.push_back(pb.graphon);
      sets.push_back(pb.side);
    }
    const ImprovementReport r = improvement_experiment(gammas, sets, f, depth);
    all_strict = all_strict && r.gap < 0;
    all_claim = all_claim && r.claim_margin >= 0;
    t.row({num(n), num(r.int_hat), num(r.int_tilde), num(r.gap), num(r.epsilon), num(r.sign), num(r.shifted_block),
           num(r.baseline), num(r.claim_margin)});
    rows.push_back({{"n", n}, {"gap", r.gap}, {"claim_margin", r.claim_margin}});
    if (n == n_values.back()) {
      out.svg("w_hat.svg", r.w_hat);
      out.svg("w_tilde_hat.svg", r.w_tilde_hat);
    }
  }
  out.csv("improvement.csv", t);
  return {{"depth", depth}, {"rows", rows}, {"strict_decrease_every_n", all_strict}, {"claim_gap_every_n", all_claim}};
}

json minimizer_evidence(const Params& ps, Output& out) {
  const int n = static_cast<int>(ps.integer("n", 64, 2, 4096));
  if (n % 2) ps.fail("n must be even");
  const int copies = static_cast<int>(ps.integer("copies", 8, 1, 256));
  const int depth = static_cast<int>(ps.integer("depth", 4, 0, 8));
  const auto stripes = ps.integers("stripes", {1, 2, 4, 8, 16, 32, 64}, 1, 4096);
  const ConcaveFunctional f = ps.functional("H");
  const std::uint64_t seed = ps.seed();

  std::vector<PermutedBipartite> gammas;
  for (int i = 0; i < copies; ++i) gammas.push_back(permuted_bipartite(n, derive_seed(seed, "minimizer", static_cast<std::uint64_t>(i))));
  const StepGraphon limit = bipartite_chessboard();
  const double limit_value = int_f(limit, f);

  io::CsvTable t({"candidate", "stripes", "int_f", "excess_over_limit", "pseudometric_to_limit"});
  t.row({"cut_limit", "", num(limit_value), "0", "0"});
  bool minimal = true;
  auto add = [&](const std::string& name, const std::string& s, const StepGraphon& agg) {
    const double v = int_f(agg, f);
    minimal = minimal && v >= limit_value - 1e-9;
    t.row({name, s, num(v), num(v - limit_value), num(weakstar_pseudometric(agg, limit, depth))});
  };
  std::vector<StepGraphon> sorted;
  for (const auto& g : gammas) sorted.push_back(shift_left_version(g.graphon, g.side));
  add("sorted_versions", "", dyadic_aggregate(sorted, depth));
  for (int s : stripes) {
    std::vector<StepGraphon> samples;
    for (int i = 0; i < copies; ++i) {
      samples.push_back(sample_stripe_version(gammas[static_cast<std::size_t>(i)].graphon,
                                              {OrderedPartition::trivial(), s,
                                               derive_seed(seed, "minimizer-stripes", static_cast<std::uint64_t>(s * 4096 + i))})
                            .graphon);
    }
    add("stripe_versions", num(s), dyadic_aggregate(samples, depth));
  }
  out.csv("minimizer_evidence.csv", t);
  return {{"limit_int_f", limit_value}, {"limit_is_minimal_among_candidates", minimal}};
}

json regularity_scenario(const Params& ps, Output& out, int threads) {
  const GraphSpec gs = graph_spec(ps, "gnp", 256);
  const double eps = ps.real("eps", 0.1, 1e-6, 1.0);
  RegularityOptions opts;
  opts.restarts = static_cast<int>(ps.integer("restarts", 50, 0, 100000));
  opts.exhaustive_up_to = static_cast<int>(ps.integer("exhaustive_up_to", 0, 0, 24));
  opts.seed = ps.seed();
  opts.threads = threads;
  const Graph g = build_graph(gs, opts.seed);

  io::CsvTable t({"round", "parts", "index_negsq", "violation", "decrease", "below_quarter_eps_sq"});
  auto table = [&](const std::vector<PumpRound>& rounds) {
    for (const auto& r : rounds) {
      t.row({num(r.round), num(r.parts), num(r.index), num(r.violation), num(r.decrease), flag(r.below_quarter_eps_sq)});
    }
    out.csv("pump_rounds.csv", t);
  };
  try {
    const RegularityTrace trace = weak_regularity_partition(g, eps, opts);
    table(trace.rounds);
    out.text("partition.json", io::to_json(trace.partition).dump(2) + "\n");
    return {{"vertices", g.order()},
            {"edges", g.edge_count()},
            {"eps", eps},
            {"pumps", trace.pumps},
            {"parts", trace.partition.parts()},
            {"final_index_negsq", trace.rounds.back().index}};
  } catch (const RegularityError& e) {
    table(e.trace());
    throw;
  }
}

json finite_index_scenario(const Params& ps, Output& out, int threads) {
  const GraphSpec gs = graph_spec(ps, "complete_bipartite", 8);
  const double eps = ps.real("eps", 0.5, 1e-3, 1.0);
  const ConcaveFunctional f = ps.functional("negsq");
  RegularityOptions check;
  check.restarts = static_cast<int>(ps.integer("restarts", 50, 0, 100000));
  check.exhaustive_up_to = static_cast<int>(ps.integer("exhaustive_up_to", 16, 0, 24));
  check.threads = threads;
  MinPartitionOptions search;
  search.restarts = static_cast<int>(ps.integer("search_restarts", 8, 1, 10000));
  search.moves = ps.integer("moves", 200000, 1, 1000000000);
  const std::uint64_t seed = ps.seed();
  check.seed = derive_seed(seed, "finite-index-check", 0);
  search.seed = derive_seed(seed, "finite-index-search", 0);
  const Graph g = build_graph(gs, seed);

  const FiniteIndexReport r = finite_index_experiment(g, eps, f, check, search);
  io::CsvTable chain({"parts", "index_f", "index_negsq", "regular", "violation", "exhaustive"});
  for (const auto& s : r.chain) {
    chain.row({num(s.parts), num(s.index_f), num(s.index_negsq), flag(s.regular), num(s.violation), flag(s.exhaustive)});
  }
  out.csv("finite_index_chain.csv", chain);
  io::CsvTable stab({"parts", "min_index_negsq", "near_minimal", "near_minimal_regular"});
  for (const auto& s : r.stability) {
    stab.row({num(s.parts), num(s.min_index), num(s.near_minimal), num(s.near_minimal_regular)});
  }
  out.csv("finite_index_stability.csv", stab);
  return {{"eps", eps}, {"f", f.name()}, {"chosen_parts", r.chosen}, {"candidates", r.candidates}};
}

json noel_scenario(const Params& ps, Output& out) {
  const int ell = static_cast<int>(ps.integer("ell", 10, 1, 256));
  const int n = static_cast<int>(ps.integer("n", 100, 1, 4096));
  if (n % ell) ps.fail("n must be divisible by ell");
  const int copies = static_cast<int>(ps.integer("copies", 16, 1, 1024));
  const int depth = static_cast<int>(ps.integer("depth", 4, 0, 8));
  const auto mixing_ells = ps.integers("mixing_ells", {2, 5, 10}, 1, 256);
  const int per_part = static_cast<int>(ps.integer("mixing_vertices_per_part", 20, 1, 1024));
  const int mixing_depth = static_cast<int>(ps.integer("mixing_depth", 1, 0, 8));
  const std::uint64_t seed = ps.seed();

  const auto h = ConcaveFunctional::entropy();
  const StepGraphon w = noel_family(ell, n, derive_seed(seed, "noel", 0));
  const double v = int_f(w, h);
  const double exact = binary_entropy(kNoelValue) / (static_cast<double>(ell) * ell);
  io::CsvTable t({"ell", "n", "int_H", "exact", "bound"});
  t.row({num(ell), num(n), num(v), num(exact), num(1.0 / (static_cast<double>(ell) * ell))});
  out.csv("noel.csv", t);
  out.graphon("noel.json", w);
  out.svg("noel.svg", w);

  const NoelRegionReport region = noel_region_check(ell, n, derive_seed(seed, "noel", 0), copies, depth);
  io::CsvTable rt({"cells_meeting", "cells_inside", "min_region_average", "max_region_average", "min_inside_value",
                   "max_inside_value"});
  rt.row({num(region.cells_meeting), num(region.cells_inside), num(region.min_region_average),
          num(region.max_region_average), num(region.min_inside_value), num(region.max_inside_value)});
  out.csv("noel_region.csv", rt);

  io::CsvTable mt({"ell", "n", "max_gap", "int_H"});
  for (int l : mixing_ells) {
    const NoelMixingReport m = noel_mixing(l, l * per_part, derive_seed(seed, "noel-mixing", static_cast<std::uint64_t>(l)),
                                           copies, mixing_depth);
    mt.row({num(l), num(l * per_part), num(m.max_gap), num(m.int_h)});
  }
  out.csv("noel_mixing.csv", mt);
  return {{"ell", ell}, {"n", n}, {"int_H", v}, {"exact", exact}, {"within_bound", v <= 1.0 / (ell * ell)}};
}

json sampler_concentration(const Params& ps, Output& out, int threads) {
  const auto n_values = ps.integers("n_values", {100, 200, 400}, 1, 4096);
  const int trials = static_cast<int>(ps.integer("trials", 200, 1, 100000));
  const int depth = static_cast<int>(ps.integer("depth", 3, 0, 8));
  const std::uint64_t seed = ps.seed();
  const StepGraphon gamma = bipartite_chessboard();

  io::CsvTable t({"n", "trials", "events", "frequency", "tail_bound", "allowed", "mean_pseudometric", "max_block_error"});
  bool ok = true;
  for (int n : n_values) {
    const std::vector<StepGraphon> gammas(static_cast<std::size_t>(trials), gamma);
    const std::vector<int> ns(static_cast<std::size_t>(trials), n);
    const AttainmentReport r = stepping_attainment_trial(gammas, ns, ns, OrderedPartition::trivial(),
                                                         derive_seed(seed, "sampler", static_cast<std::uint64_t>(n)), depth,
                                                         threads);
    double mean_pm = 0.0;
    int events = 0;
    for (const auto& row : r.rows) {
      mean_pm += row.pseudometric;
      events += row.event ? 1 : 0;
    }
    mean_pm /= trials;
    const double allowed = std::max(0.05, 3.0 * sampler_tail_bound(n));
    ok = ok && r.event_frequency <= allowed && r.max_block_error <= 1e-12;
    t.row({num(n), num(trials), num(events), num(r.event_frequency), num(sampler_tail_bound(n)), num(allowed),
           num(mean_pm), num(r.max_block_error)});
  }
  out.csv("sampler_concentration.csv", t);
  return {{"within_allowed_frequency", ok}};
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "scenario" && key != "params" && key != "output_dir") throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  if (!j.contains("scenario") || !j.at("scenario").is_string()) throw ConfigError("config needs a string 'scenario'");
  c.scenario = j.at("scenario").get<std::string>();
  if (j.contains("params")) c.params = j.at("params");
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw ConfigError("'output_dir' must be a string");
    c.output_dir = j.at("output_dir").get<std::string>();
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  try {
    return config_from_json(json::parse(io::read_file(path)));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, randomized] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

bool is_randomized(const std::string& scenario) {
  const auto it = registry().find(scenario);
  if (it == registry().end()) throw ConfigError("unknown scenario '" + scenario + "'");
  return it->second;
}

ExperimentResult run(const ExperimentConfig& config, int threads) {
  const std::string& s = config.scenario;
  const bool randomized = is_randomized(s);
  static const std::map<std::string, std::set<std::string>> keys{
      {"toy-bipartite", {"f", "seed"}},
      {"chessboard-family", {"k_max", "depth", "figure_k", "seed"}},
      {"improvement", {"n_values", "copies", "depth", "f", "seed"}},
      {"minimizer-evidence", {"n", "copies", "depth", "stripes", "f", "seed"}},
      {"regularity", {"graph", "a", "b", "n", "p", "edge_list", "eps", "restarts", "exhaustive_up_to", "seed"}},
      {"finite-index-set",
       {"graph", "a", "b", "n", "p", "edge_list", "eps", "f", "restarts", "exhaustive_up_to", "search_restarts", "moves",
        "seed"}},
      {"noel", {"ell", "n", "copies", "depth", "mixing_ells", "mixing_vertices_per_part", "mixing_depth", "seed"}},
      {"sampler-concentration", {"n_values", "trials", "depth", "seed"}}};
  const Params ps(config.params, s, keys.at(s));
  if (randomized) ps.seed();

  Output out(config.output_dir);
  json summary;
  if (s == "toy-bipartite") summary = toy_bipartite(ps, out);
  else if (s == "chessboard-family") summary = chessboard_family_scenario(ps, out);
  else if (s == "improvement") summary = improvement_scenario(ps, out);
  else if (s == "minimizer-evidence") summary = minimizer_evidence(ps, out);
  else if (s == "regularity") summary = regularity_scenario(ps, out, threads);
  else if (s == "finite-index-set") summary = finite_index_scenario(ps, out, threads);
  else if (s == "noel") summary = noel_scenario(ps, out);
  else summary = sampler_concentration(ps, out, threads);

  summary["scenario"] = s;
  summary["params"] = config.params;
  out.text("summary.json", summary.dump(2) + "\n");
  return {summary, out.artifacts};
}

json error_report(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace graphonlab
