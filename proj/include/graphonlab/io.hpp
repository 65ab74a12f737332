#pragma once

#include "graphonlab/cutnorm.hpp"
#include "graphonlab/regularity.hpp"
#include "graphonlab/step_graphon.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace graphonlab::io {

using json = nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
/// Creates parent directories as needed.
void write_file(const std::string& path, const std::string& contents);

/// {"measures": [...], "values": [[...], ...]}
json to_json(const StepGraphon& w);
/// Validates; throws ValidationError on bad content, IoError on bad shape.
StepGraphon graphon_from_json(const json& j);
StepGraphon load_graphon(const std::string& path);
void save_graphon(const std::string& path, const StepGraphon& w);

json to_json(const CutNormResult& r);
json to_json(const VertexPartition& p);

/// 12 significant digits, classic locale.
std::string format_number(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(std::vector<std::string> cells);
  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
  std::string str() const;
  void save(const std::string& path) const { write_file(path, str()); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Grayscale heatmap, 0 white and 1 black, cell sizes proportional to measures.
std::string render_svg(const StepGraphon& w, int size = 512);

}  // namespace graphonlab::io
