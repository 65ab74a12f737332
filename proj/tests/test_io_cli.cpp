#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graphonlab/experiments.hpp"
#include "graphonlab/families.hpp"
#include "graphonlab/io.hpp"
#include "graphonlab/regularity.hpp"
#include "support.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <map>

using namespace graphonlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("graphonlab-test-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = io::read_file(e.path().string());
  }
  return files;
}

int cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(GRAPHONLAB_CLI) + " " + args + " > " + (log / "stdout").string() + " 2> " +
                          (log / "stderr").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("graphon JSON round trip") {
  Rng rng(1);
  const fs::path dir = scratch("json");
  for (int trial = 0; trial < 5; ++trial) {
    const StepGraphon w = testing::random_graphon(rng, 1 + static_cast<Index>(rng.below(5)));
    const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
    io::save_graphon(a, w);
    const StepGraphon back = io::load_graphon(a);
    CHECK(back.measures() == w.measures());
    CHECK(back.values() == w.values());
    io::save_graphon(b, back);
    CHECK(io::read_file(a) == io::read_file(b));
  }
  CHECK_THROWS_AS(io::graphon_from_json(json{{"measures", {1.0}}}), io::IoError);
  CHECK_THROWS_AS(io::graphon_from_json(json{{"measures", {0.5, 0.5}}, {"values", {{0, 1}}}}), io::IoError);
  CHECK_THROWS_AS(io::graphon_from_json(json{{"measures", {0.5, 0.5}}, {"values", {{0, 1}, {0, 0}}}}), ValidationError);
  CHECK_THROWS_AS(io::graphon_from_json(json{{"measures", {0.6, 0.6}}, {"values", {{0, 0}, {0, 0}}}}), ValidationError);
  CHECK_THROWS_AS(io::load_graphon((dir / "missing.json").string()), io::IoError);
}

TEST_CASE("number formatting and CSV") {
  CHECK(io::format_number(0.0) == "0");
  CHECK(io::format_number(0.125) == "0.125");
  CHECK(io::format_number(1.0 / 3) == "0.333333333333");
  CHECK(io::format_number(-2.5e-7) == "-2.5e-07");
  CHECK(io::format_number(4096) == "4096");

  io::CsvTable t({"name", "value"});
  t.row({"plain", "1"}).row({"with,comma", "say \"hi\""});
  CHECK(t.str() == "name,value\nplain,1\n\"with,comma\",\"say \"\"hi\"\"\"\n");
  CHECK_THROWS(t.row({"short"}));
}

TEST_CASE("SVG rendering") {
  const std::string svg = io::render_svg(bipartite_chessboard(), 100);
  CHECK(svg == io::render_svg(bipartite_chessboard(), 100));
  CHECK(svg.find("rgb(255,255,255)") != std::string::npos);
  CHECK(svg.find("rgb(0,0,0)") != std::string::npos);
  CHECK(svg.find("width=\"50.0000\"") != std::string::npos);
  CHECK(io::render_svg(constant_graphon(0.5), 10).find("rgb(128,128,128)") != std::string::npos);
}

TEST_CASE("JSON views of results") {
  const json p = io::to_json(VertexPartition({1, 0, 1}));
  CHECK(p.at("parts") == 2);
  CHECK(p.at("assignment") == json::array({1, 0, 1}));
  const json e = error_report("config", "bad");
  CHECK(e.at("error").at("kind") == "config");
}

TEST_CASE("experiment configuration errors") {
  CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"scenario", "noel"}, {"extra", 1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"params", json::object()}}), ConfigError);
  CHECK_THROWS_AS(is_randomized("nope"), ConfigError);
  CHECK_FALSE(is_randomized("toy-bipartite"));
  CHECK(is_randomized("noel"));
  CHECK(scenario_names().size() == 8);

  const fs::path dir = scratch("config-errors");
  auto attempt = [&](const std::string& scenario, json params) {
    ExperimentConfig c;
    c.scenario = scenario;
    c.params = std::move(params);
    c.output_dir = dir.string();
    return run(c);
  };
  CHECK_THROWS_AS(attempt("improvement", json::object()), ConfigError);
  CHECK_THROWS_AS(attempt("improvement", {{"seed", -1}}), ConfigError);
  CHECK_THROWS_AS(attempt("improvement", {{"seed", 1}, {"n_values", {63}}}), ConfigError);
  CHECK_THROWS_AS(attempt("chessboard-family", {{"depth", 9}}), ConfigError);
  CHECK_THROWS_AS(attempt("chessboard-family", {{"colour", 1}}), ConfigError);
  CHECK_THROWS_AS(attempt("noel", {{"seed", 1}, {"n", 101}}), ConfigError);
  CHECK_THROWS_AS(attempt("toy-bipartite", {{"f", "cubic"}}), ConfigError);
  CHECK_THROWS_AS(attempt("regularity", {{"seed", 1}, {"graph", "edge_list"}}), ConfigError);
  CHECK_THROWS_AS(attempt("regularity", {{"seed", 1}, {"eps", "small"}}), ConfigError);
}

TEST_CASE("scenarios are reproducible") {
  const std::vector<std::pair<std::string, json>> cases{
      {"toy-bipartite", json::object()},
      {"chessboard-family", {{"k_max", 4}}},
      {"improvement", {{"seed", 3}, {"n_values", {16, 32}}, {"copies", 2}}},
      {"regularity", {{"seed", 3}, {"graph", "complete_bipartite"}, {"eps", 0.05}}},
      {"sampler-concentration", {{"seed", 3}, {"n_values", {20}}, {"trials", 5}}}};
  for (const auto& [scenario, params] : cases) {
    CAPTURE(scenario);
    ExperimentConfig c;
    c.scenario = scenario;
    c.params = params;
    const fs::path first = scratch(scenario + "-1"), second = scratch(scenario + "-2");
    c.output_dir = first.string();
    const ExperimentResult r1 = run(c, 1);
    c.output_dir = second.string();
    const ExperimentResult r2 = run(c, 2);
    CHECK(r1.summary == r2.summary);
    CHECK(r1.artifacts.size() == r2.artifacts.size());
    const auto a = snapshot(first), b = snapshot(second);
    CHECK(a.size() >= 2);
    CHECK(a.count("summary.json") == 1);
    CHECK(a == b);
  }
}

TEST_CASE("command line interface") {
  const fs::path dir = scratch("cli");
  const std::string g = (dir / "g.json").string();
  io::save_graphon(g, bipartite_chessboard());

  CHECK(cli("validate " + g, dir) == 0);
  CHECK(json::parse(io::read_file((dir / "stdout").string())).at("steps") == 2);

  CHECK(cli("cutnorm " + g, dir) == 0);
  CHECK(json::parse(io::read_file((dir / "stdout").string())).at("value").get<double>() == doctest::Approx(0.5));

  CHECK(cli("entropy " + g, dir) == 0);
  CHECK(json::parse(io::read_file((dir / "stdout").string())).at("value").get<double>() == 0.0);

  const std::string svg = (dir / "g.svg").string();
  CHECK(cli("render " + g + " " + svg + " --size 64", dir) == 0);
  CHECK(io::read_file(svg) == io::render_svg(bipartite_chessboard(), 64));

  const std::string edges = (dir / "k44.txt").string();
  io::write_file(edges, Graph::complete_bipartite(4, 4).to_edge_list());
  CHECK(cli("regularize " + edges + " --eps 0.05 --seed 1", dir) == 0);
  CHECK(json::parse(io::read_file((dir / "stdout").string())).at("pumps") == 1);
  CHECK(cli("minpart " + edges + " --parts 2 --f negsq", dir) == 0);
  CHECK(json::parse(io::read_file((dir / "stdout").string())).at("index").get<double>() == doctest::Approx(-0.5));

  const std::string bad = (dir / "bad.json").string();
  io::write_file(bad, R"({"measures": [0.5, 0.5], "values": [[0, 1], [0, 0]]})");
  CHECK(cli("validate " + bad, dir) == 3);
  CHECK(json::parse(io::read_file((dir / "stderr").string())).at("error").at("kind") == "validation");
  CHECK(cli("validate " + (dir / "missing.json").string(), dir) == 4);
  CHECK(cli("experiment improvement --out " + (dir / "x").string(), dir) == 2);
  CHECK(json::parse(io::read_file((dir / "stderr").string())).at("error").at("kind") == "config");
  CHECK(cli("sample " + g + " --stripes 4", dir) != 0);
  CHECK(cli("sample " + g + " --stripes 4 --seed 2", dir) == 0);
  CHECK(cli("experiment toy-bipartite --out " + (dir / "toy").string(), dir) == 0);
  CHECK(fs::exists(dir / "toy" / "summary.json"));
  fs::remove_all(dir.parent_path());
}
