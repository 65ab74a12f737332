#include "graphonlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>

namespace graphonlab::io {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << contents;
  if (!out) throw IoError("write failed for " + path);
}

json to_json(const StepGraphon& w) {
  json m = json::array();
  for (Index i = 0; i < w.steps(); ++i) m.push_back(w.measures()(i));
  json v = json::array();
  for (Index i = 0; i < w.steps(); ++i) {
    json row = json::array();
    for (Index j = 0; j < w.steps(); ++j) row.push_back(w.value(i, j));
    v.push_back(std::move(row));
  }
  return {{"measures", std::move(m)}, {"values", std::move(v)}};
}

StepGraphon graphon_from_json(const json& j) {
  if (!j.is_object() || !j.contains("measures") || !j.contains("values")) {
    throw IoError("graphon JSON needs \"measures\" and \"values\"");
  }
  const json& m = j.at("measures");
  const json& v = j.at("values");
  if (!m.is_array() || !v.is_array()) throw IoError("\"measures\" and \"values\" must be arrays");
  const auto k = static_cast<Index>(m.size());
  if (static_cast<Index>(v.size()) != k) throw IoError("values must have one row per measure");
  Vector<double> measures(k);
  Matrix<double> values(k, k);
  for (Index i = 0; i < k; ++i) {
    if (!m[static_cast<std::size_t>(i)].is_number()) throw IoError("measures must be numbers");
    measures(i) = m[static_cast<std::size_t>(i)].get<double>();
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != k) {
      throw IoError("values row " + std::to_string(i + 1) + " must have " + std::to_string(k) + " entries");
    }
    for (Index c = 0; c < k; ++c) {
      if (!row[static_cast<std::size_t>(c)].is_number()) throw IoError("values must be numbers");
      values(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return StepGraphon(std::move(measures), std::move(values));
}

StepGraphon load_graphon(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
  return graphon_from_json(j);
}

void save_graphon(const std::string& path, const StepGraphon& w) { write_file(path, to_json(w).dump(2) + "\n"); }

json to_json(const CutNormResult& r) {
  return {{"value", r.value},
          {"sign", r.sign},
          {"witness_a", r.witness_a},
          {"witness_b", r.witness_b},
          {"mode", r.mode == CutMode::symmetric ? "symmetric" : "bilinear"},
          {"exact", r.exact},
          {"upper_bound", r.upper_bound},
          {"warnings", r.warnings}};
}

json to_json(const VertexPartition& p) {
  return {{"parts", p.parts()}, {"assignment", p.assignment()}};
}

std::string format_number(double x) {
  if (x == 0.0) return "0";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(12) << x;
  return os.str();
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw IoError("CSV row width does not match the header");
  rows_.push_back(std::move(cells));
  return *this;
}

namespace {

void put_line(std::ostringstream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") != std::string::npos) {
      os << '"';
      for (char ch : c) {
        if (ch == '"') os << '"';
        os << ch;
      }
      os << '"';
    } else {
      os << c;
    }
  }
  os << '\n';
}

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

}  // namespace

std::string CsvTable::str() const {
  std::ostringstream os;
  put_line(os, header_);
  for (const auto& r : rows_) put_line(os, r);
  return os.str();
}

std::string render_svg(const StepGraphon& w, int size) {
  if (size < 1) throw std::invalid_argument("SVG size must be positive");
  const Vector<double> bp = w.breakpoints();
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << ' ' << size << "\" shape-rendering=\"crispEdges\">\n";
  for (Index i = 0; i < w.steps(); ++i) {
    for (Index j = 0; j < w.steps(); ++j) {
      const int g = static_cast<int>(std::lround(255.0 * (1.0 - w.value(i, j))));
      // Row i is drawn top to bottom, column j left to right.
      os << "<rect x=\"" << fixed(bp(j) * size) << "\" y=\"" << fixed(bp(i) * size) << "\" width=\""
         << fixed((bp(j + 1) - bp(j)) * size) << "\" height=\"" << fixed((bp(i + 1) - bp(i)) * size)
         << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace graphonlab::io
