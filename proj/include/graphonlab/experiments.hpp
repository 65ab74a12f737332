#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace graphonlab {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  std::string scenario;
  nlohmann::json params = nlohmann::json::object();
  std::string output_dir = "out";
};

/// {"scenario": ..., "params": {...}, "output_dir": ...}
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

const std::vector<std::string>& scenario_names();
bool is_randomized(const std::string& scenario);

struct ExperimentResult {
  nlohmann::json summary;
  std::vector<std::string> artifacts;  ///< paths written, in order
};

/// Validates the params, runs the scenario and writes CSV / JSON / SVG files
/// plus summary.json into output_dir. Output is a function of the config only.
ExperimentResult run(const ExperimentConfig& config, int threads = 1);

/// {"error": {"kind": ..., "message": ...}}
nlohmann::json error_report(const std::string& kind, const std::string& message);

}  // namespace graphonlab
