#include "graphonlab/cutnorm.hpp"
#include "graphonlab/experiments.hpp"
#include "graphonlab/functional.hpp"
#include "graphonlab/io.hpp"
#include "graphonlab/operations.hpp"
#include "graphonlab/parallel.hpp"
#include "graphonlab/regularity.hpp"
#include "graphonlab/weakstar.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

using namespace graphonlab;
using nlohmann::json;

namespace {

int fail(const std::string& kind, const std::string& message, int code) {
  std::cerr << error_report(kind, message).dump() << '\n';
  return code;
}

void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) std::cout << text;
  else io::write_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphonlab: step graphons, cut norms, regularity and weak* experiments"};
  app.require_subcommand(1);
  int threads = default_threads();
  app.add_option("--threads", threads, "Worker threads (default: GRAPHONLAB_THREADS or 1)")->check(CLI::PositiveNumber);

  std::string in, in2, out, f_name = "H", mode, config_path;
  std::optional<std::uint64_t> seed;
  double eps = 0.1;
  int restarts = 16, reg_restarts = 50, min_restarts = 8, parts = 2, sample_parts = 1, stripes = 1, budget = 2000, size = 512, exhaustive = 0;

  auto* validate = app.add_subcommand("validate", "Check a graphon JSON file");
  validate->add_option("graphon", in, "Graphon JSON")->required();

  auto* entropy = app.add_subcommand("entropy", "INT_f of a graphon");
  entropy->add_option("graphon", in, "Graphon JSON")->required();
  entropy->add_option("--f", f_name, "Functional: H, negsq")->capture_default_str();

  auto* cutnorm = app.add_subcommand("cutnorm", "Cut norm of W, or of W1 - W2");
  cutnorm->add_option("graphon", in, "Graphon JSON")->required();
  cutnorm->add_option("other", in2, "Second graphon JSON");
  cutnorm->add_option("--mode", mode, "bilinear or symmetric")->default_str("bilinear")->check(CLI::IsMember({"bilinear", "symmetric"}));
  cutnorm->add_option("--restarts", restarts, "Symmetric heuristic restarts")->capture_default_str();
  cutnorm->add_option("--seed", seed, "Seed");
  cutnorm->add_option("--out", out, "Write JSON here instead of stdout");

  auto* cutdist = app.add_subcommand("cutdist", "Cut distance upper bound over cell permutations");
  cutdist->add_option("graphon", in, "Graphon JSON")->required();
  cutdist->add_option("other", in2, "Graphon JSON")->required();
  cutdist->add_option("--mode", mode, "exact or heuristic")->default_str("exact")->check(CLI::IsMember({"exact", "heuristic"}));
  cutdist->add_option("--budget", budget, "Annealing iterations")->capture_default_str();
  cutdist->add_option("--seed", seed, "Seed");
  cutdist->add_option("--out", out, "Write JSON here instead of stdout");

  auto* regularize = app.add_subcommand("regularize", "Weak regularity partition of an edge-list graph");
  regularize->add_option("edges", in, "Edge list file, one 'u v' per line")->required();
  regularize->add_option("--eps", eps, "epsilon")->capture_default_str();
  regularize->add_option("--restarts", reg_restarts, "Witness search restarts")->capture_default_str();
  regularize->add_option("--exhaustive-up-to", exhaustive, "Exhaustive witness search for n up to this")->capture_default_str();
  regularize->add_option("--seed", seed, "Seed");
  regularize->add_option("--out", out, "Write JSON here instead of stdout");

  auto* minpart = app.add_subcommand("minpart", "INT_f-minimizing partition with a given number of parts");
  minpart->add_option("edges", in, "Edge list file")->required();
  minpart->add_option("--parts", parts, "Number of parts")->capture_default_str();
  minpart->add_option("--f", f_name, "Functional: H, negsq")->capture_default_str();
  minpart->add_option("--restarts", min_restarts, "Local search restarts")->capture_default_str();
  minpart->add_option("--seed", seed, "Seed");
  minpart->add_option("--out", out, "Write JSON here instead of stdout");

  auto* sample = app.add_subcommand("sample", "Stripe-permuted version of a graphon");
  sample->add_option("graphon", in, "Graphon JSON")->required();
  sample->add_option("--stripes", stripes, "Stripes per part")->capture_default_str();
  sample->add_option("--parts", sample_parts, "Base partition: this many equal intervals")->capture_default_str();
  sample->add_option("--seed", seed, "Seed")->required();
  sample->add_option("--out", out, "Write graphon JSON here instead of stdout");

  auto* experiment = app.add_subcommand("experiment", "Run a scripted scenario");
  std::string scenario;
  experiment->add_option("name", scenario, "Scenario")->required()->check(CLI::IsMember(scenario_names()));
  experiment->add_option("--config", config_path, "JSON config file");
  experiment->add_option("--seed", seed, "Root seed (overrides params.seed)");
  experiment->add_option("--out", out, "Output directory (overrides output_dir)");

  auto* render = app.add_subcommand("render", "Grayscale SVG heatmap of a graphon");
  render->add_option("graphon", in, "Graphon JSON")->required();
  render->add_option("svg", in2, "Output SVG")->required();
  render->add_option("--size", size, "Pixels")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*validate) {
      const StepGraphon w = io::load_graphon(in);
      emit({{"valid", true}, {"steps", w.steps()}}, "");
    } else if (*entropy) {
      const StepGraphon w = io::load_graphon(in);
      const auto f = ConcaveFunctional::by_name(f_name);
      emit({{"f", f.name()}, {"value", int_f(w, f)}}, "");
    } else if (*cutnorm) {
      const StepGraphon w = io::load_graphon(in);
      const Kernel d = in2.empty() ? Kernel(w.measures(), w.values()) : difference(w, io::load_graphon(in2));
      CutNormResult r;
      if (mode == "symmetric") {
        r = cutnorm_symmetric(d, {restarts, seed.value_or(0), threads});
      } else {
        r = cutnorm_bilinear_exact(d);
      }
      emit(io::to_json(r), out);
    } else if (*cutdist) {
      CutDistanceOptions o;
      o.mode = mode == "heuristic" ? CutDistanceMode::heuristic : CutDistanceMode::exact_small;
      o.budget = budget;
      o.seed = seed.value_or(0);
      const CutDistanceResult r = cut_distance(io::load_graphon(in), io::load_graphon(in2), o);
      emit({{"value", r.value},
            {"permutation", r.permutation},
            {"grid", r.grid},
            {"evaluated", r.evaluated},
            {"exact_in_class", r.exact_in_class}},
           out);
    } else if (*regularize) {
      const Graph g = Graph::from_edge_list(io::read_file(in));
      RegularityOptions o{reg_restarts, seed.value_or(0), exhaustive, threads};
      json rounds = json::array();
      try {
        const RegularityTrace t = weak_regularity_partition(g, eps, o);
        for (const auto& r : t.rounds) {
          rounds.push_back({{"round", r.round}, {"parts", r.parts}, {"index", r.index}, {"violation", r.violation},
                            {"decrease", r.decrease}, {"below_quarter_eps_sq", r.below_quarter_eps_sq}});
        }
        emit({{"pumps", t.pumps}, {"partition", io::to_json(t.partition)}, {"rounds", rounds}}, out);
      } catch (const RegularityError& e) {
        return fail("regularity", e.what(), 1);
      }
    } else if (*minpart) {
      const Graph g = Graph::from_edge_list(io::read_file(in));
      MinPartitionOptions o;
      o.restarts = min_restarts;
      o.seed = seed.value_or(0);
      const auto f = ConcaveFunctional::by_name(f_name);
      const MinPartitionResult r = min_int_partition(g, parts, f, o);
      emit({{"f", f.name()}, {"index", r.index}, {"exhaustive", r.exhaustive}, {"partition", io::to_json(r.partition)}}, out);
    } else if (*sample) {
      const StepGraphon w = io::load_graphon(in);
      if (sample_parts < 1) return fail("config", "--parts must be positive", 2);
      const StripeSample s = sample_stripe_version(w, {OrderedPartition::uniform(sample_parts), stripes, *seed});
      emit(io::to_json(s.graphon), out);
    } else if (*experiment) {
      ExperimentConfig c;
      if (!config_path.empty()) {
        c = load_config(config_path);
        if (c.scenario != scenario) {
          return fail("config", "config scenario '" + c.scenario + "' does not match '" + scenario + "'", 2);
        }
      }
      c.scenario = scenario;
      if (seed) c.params["seed"] = *seed;
      if (!out.empty()) c.output_dir = out;
      const ExperimentResult r = run(c, threads);
      std::cout << json{{"scenario", scenario}, {"artifacts", r.artifacts}}.dump(2) << '\n';
    } else if (*render) {
      io::write_file(in2, io::render_svg(io::load_graphon(in), size));
    }
  } catch (const ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const ValidationError& e) {
    return fail("validation", e.what(), 3);
  } catch (const io::IoError& e) {
    return fail("io", e.what(), 4);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 1);
  }
  return 0;
}
