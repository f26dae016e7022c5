#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ogc/io.hpp"

namespace ogc {

namespace {

using Json = nlohmann::json;

constexpr int kMaxHorizon = 100'000'000;

// JSON value plus its dotted path, for error messages.
struct Node {
  const Json& value;
  std::string path;

  [[noreturn]] void schema_error(const std::string& reason) const {
    fail(ErrorCode::SchemaError, path + ": " + reason);
  }

  bool has(const char* key) const { return value.is_object() && value.contains(key); }

  Node at(const char* key) const {
    if (!has(key)) fail(ErrorCode::SchemaError, path + "." + key + ": required field missing");
    return Node{value.at(key), path + "." + key};
  }

  Node at(std::size_t i) const {
    return Node{value.at(i), path + "[" + std::to_string(i) + "]"};
  }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!value.is_object()) schema_error("expected an object");
    for (auto it = value.begin(); it != value.end(); ++it) {
      if (std::none_of(allowed.begin(), allowed.end(),
                       [&](const char* k) { return it.key() == k; })) {
        fail(ErrorCode::SchemaError, path + "." + it.key() + ": unknown key");
      }
    }
  }

  double number() const {
    if (!value.is_number()) schema_error("expected a number");
    const double v = value.get<double>();
    if (!std::isfinite(v)) schema_error("expected a finite number");
    return v;
  }

  double number_or(const char* key, double fallback) const {
    return has(key) ? at(key).number() : fallback;
  }

  long long integer() const {
    if (!value.is_number_integer()) schema_error("expected an integer");
    if (value.is_number_unsigned() &&
        value.get<unsigned long long>() > static_cast<unsigned long long>(std::numeric_limits<long long>::max())) {
      schema_error("integer out of range");
    }
    return value.get<long long>();
  }

  int int_in(long long lo, long long hi) const {
    const long long v = integer();
    if (v < lo || v > hi) {
      schema_error("must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<int>(v);
  }

  bool boolean() const {
    if (!value.is_boolean()) schema_error("expected true or false");
    return value.get<bool>();
  }

  bool boolean_or(const char* key, bool fallback) const {
    return has(key) ? at(key).boolean() : fallback;
  }

  std::string string() const {
    if (!value.is_string()) schema_error("expected a string");
    return value.get<std::string>();
  }
};

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

// Delimited series file: values separated by newlines or commas; blank lines
// and lines starting with '#' are skipped.
std::vector<std::vector<double>> read_series_rows(const std::filesystem::path& path,
                                                  const std::string& field) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, field + ": cannot read series file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    int column = 1;
    while (std::getline(cells, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      const std::string trimmed = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
      double v = 0.0;
      try {
        v = parse_number(trimmed);
      } catch (const Error&) {
        fail(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ":" +
                                        std::to_string(column) + ": expected a number in " + field);
      }
      if (!std::isfinite(v)) {
        fail(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) +
                                        ": non-finite value in " + field);
      }
      row.push_back(v);
      column += static_cast<int>(cell.size()) + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector vector_of(const Node& node) {
  if (!node.value.is_array() || node.value.empty()) node.schema_error("expected a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(node.value.size()));
  for (std::size_t i = 0; i < node.value.size(); ++i) v(static_cast<Eigen::Index>(i)) = node.at(i).number();
  return v;
}

Matrix matrix_of(const Node& node) {
  if (!node.value.is_array() || node.value.empty()) node.schema_error("expected a non-empty array of rows");
  const std::size_t rows = node.value.size();
  std::size_t cols = 0;
  Matrix m;
  for (std::size_t i = 0; i < rows; ++i) {
    const Vector r = vector_of(node.at(i));
    if (i == 0) {
      cols = static_cast<std::size_t>(r.size());
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (static_cast<std::size_t>(r.size()) != cols) {
      node.at(i).schema_error("rows must have equal length");
    }
    m.row(static_cast<Eigen::Index>(i)) = r.transpose();
  }
  return m;
}

void check_length(std::size_t length, int horizon, const std::string& field) {
  if (length < static_cast<std::size_t>(horizon)) {
    fail(ErrorCode::SeriesLengthError, field + ": series has " + std::to_string(length) +
                                           " values, horizon needs " + std::to_string(horizon));
  }
}

Series<double> scalar_series(const Node& node, int horizon, const std::filesystem::path& base) {
  if (node.value.is_number()) return Series<double>::constant(node.number());
  if (node.value.is_array()) {
    std::vector<double> values;
    for (std::size_t i = 0; i < node.value.size(); ++i) values.push_back(node.at(i).number());
    check_length(values.size(), horizon, node.path);
    return Series<double>::of(std::move(values));
  }
  if (node.value.is_object()) {
    node.expect_object({"file"});
    const auto rows = read_series_rows(base / node.at("file").string(), node.path);
    std::vector<double> values;
    for (const auto& r : rows) {
      if (r.size() != 1) node.schema_error("series file must hold one value per line");
      values.push_back(r.front());
    }
    check_length(values.size(), horizon, node.path);
    return Series<double>::of(std::move(values));
  }
  node.schema_error("expected a number, an array, or {\"file\": ...}");
}

Series<Vector> vector_series(const Node& node, int horizon, const std::filesystem::path& base) {
  if (node.value.is_array()) return Series<Vector>::constant(vector_of(node));
  if (node.value.is_object()) {
    std::vector<Vector> values;
    if (node.has("series")) {
      node.expect_object({"series"});
      const Node s = node.at("series");
      if (!s.value.is_array()) s.schema_error("expected an array of vectors");
      for (std::size_t i = 0; i < s.value.size(); ++i) values.push_back(vector_of(s.at(i)));
    } else {
      node.expect_object({"file"});
      for (const auto& r : read_series_rows(base / node.at("file").string(), node.path)) {
        values.push_back(Eigen::Map<const Vector>(r.data(), static_cast<Eigen::Index>(r.size())));
      }
    }
    check_length(values.size(), horizon, node.path);
    return Series<Vector>::of(std::move(values));
  }
  node.schema_error("expected an array, {\"series\": ...}, or {\"file\": ...}");
}

Series<Matrix> matrix_series(const Node& node, int horizon) {
  if (node.value.is_array()) return Series<Matrix>::constant(matrix_of(node));
  if (node.value.is_object()) {
    node.expect_object({"series"});
    const Node s = node.at("series");
    if (!s.value.is_array()) s.schema_error("expected an array of matrices");
    std::vector<Matrix> values;
    for (std::size_t i = 0; i < s.value.size(); ++i) values.push_back(matrix_of(s.at(i)));
    check_length(values.size(), horizon, node.path);
    return Series<Matrix>::of(std::move(values));
  }
  node.schema_error("expected a matrix or {\"series\": ...}");
}

double band_limit(const Node& grid, const char* key, double fallback, double disabled) {
  if (!grid.has(key)) return fallback;
  const Node n = grid.at(key);
  if (n.value.is_null()) return disabled;
  return n.number();
}

Device parse_device(const Node& node, int horizon, const std::filesystem::path& base) {
  if (!node.value.is_object()) node.schema_error("expected an object");
  const std::string kind = node.at("kind").string();
  if (kind == "pv") {
    node.expect_object({"kind", "s_rated", "available_power", "c1", "c2"});
    PvDevice d;
    d.s_rated = node.at("s_rated").number();
    d.available_power = scalar_series(node.at("available_power"), horizon, base);
    d.c1 = node.number_or("c1", 0.0);
    d.c2 = node.number_or("c2", 0.0);
    return d;
  }
  if (kind == "battery") {
    node.expect_object({"kind", "s_rated", "soc", "soc_target", "capacity", "step_hours", "p_min",
                        "p_max", "taper_band", "c1", "c2"});
    BatteryDevice d;
    d.s_rated = node.at("s_rated").number();
    d.soc = node.at("soc").number();
    d.soc_target = node.at("soc_target").number();
    d.capacity_energy = node.at("capacity").number();
    d.step_duration = node.at("step_hours").number();
    d.limits.p_min = node.number_or("p_min", -d.s_rated);
    d.limits.p_max = node.number_or("p_max", d.s_rated);
    d.limits.taper_band = node.number_or("taper_band", 0.05);
    d.c1 = node.number_or("c1", 0.0);
    d.c2 = node.number_or("c2", 0.0);
    return d;
  }
  if (kind == "hvac") {
    node.expect_object({"kind", "p_max", "min_on_steps", "min_off_steps", "locked", "last_on",
                        "dwell_counter", "cost_on", "cost_off"});
    HvacDevice d;
    d.p_max = node.at("p_max").number();
    d.min_on_steps = node.has("min_on_steps") ? node.at("min_on_steps").int_in(0, 1'000'000) : 0;
    d.min_off_steps = node.has("min_off_steps") ? node.at("min_off_steps").int_in(0, 1'000'000) : 0;
    d.locked = node.boolean_or("locked", false);
    d.last_on = node.boolean_or("last_on", false);
    d.dwell_counter = node.has("dwell_counter") ? node.at("dwell_counter").int_in(0, 1'000'000) : 0;
    d.cost_on = scalar_series(node.at("cost_on"), horizon, base);
    d.cost_off = scalar_series(node.at("cost_off"), horizon, base);
    return d;
  }
  node.at("kind").schema_error("unknown device kind '" + kind + "' (expected pv, battery or hvac)");
}

Scenario parse_document(const Json& doc, const std::filesystem::path& base) {
  const Node root{doc, "$"};
  root.expect_object({"run", "grid", "devices", "constants", "output"});
  Scenario s;

  const Node run = root.at("run");
  run.expect_object({"horizon", "alpha", "epsilon", "seed", "comparator_tolerance",
                     "projection_tolerance", "projection_max_iter"});
  s.horizon = run.at("horizon").int_in(1, kMaxHorizon);
  s.alpha = run.at("alpha").number();
  if (s.alpha <= 0.0) run.at("alpha").schema_error("must be > 0");
  s.epsilon = run.number_or("epsilon", 0.0);
  if (s.epsilon < 0.0) run.at("epsilon").schema_error("must be >= 0");
  if (run.has("seed")) {
    const Node seed = run.at("seed");
    if (!seed.value.is_number_unsigned()) seed.schema_error("expected a non-negative integer");
    s.seed = seed.value.get<std::uint64_t>();
  }
  s.comparator_tol = run.number_or("comparator_tolerance", 1e-6);
  if (s.comparator_tol <= 0.0) run.at("comparator_tolerance").schema_error("must be > 0");
  s.projection.tol = run.number_or("projection_tolerance", 1e-9);
  if (s.projection.tol <= 0.0) run.at("projection_tolerance").schema_error("must be > 0");
  if (run.has("projection_max_iter")) {
    s.projection.max_iter = run.at("projection_max_iter").int_in(1, 100'000'000);
  }

  const Node grid = root.at("grid");
  grid.expect_object({"v_min", "v_max", "voltage_matrix", "voltage_offset", "substation_weights",
                      "substation_offset", "tracking_signal", "device_weights"});
  constexpr double inf = std::numeric_limits<double>::infinity();
  s.grid.v_min = band_limit(grid, "v_min", 0.95, -inf);
  s.grid.v_max = band_limit(grid, "v_max", 1.05, inf);
  if (!(s.grid.v_min < s.grid.v_max)) grid.at("v_min").schema_error("must be < grid.v_max");
  s.grid.voltage_matrix = matrix_series(grid.at("voltage_matrix"), s.horizon);
  s.grid.voltage_offset = vector_series(grid.at("voltage_offset"), s.horizon, base);
  s.grid.substation_weights = vector_series(grid.at("substation_weights"), s.horizon, base);
  s.grid.substation_offset = grid.has("substation_offset")
                                 ? scalar_series(grid.at("substation_offset"), s.horizon, base)
                                 : Series<double>::constant(0.0);
  s.grid.tracking_signal = scalar_series(grid.at("tracking_signal"), s.horizon, base);
  if (grid.has("device_weights")) s.grid.device_weights = vector_of(grid.at("device_weights"));

  const Node devices = root.at("devices");
  if (!devices.value.is_array() || devices.value.empty()) devices.schema_error("expected a non-empty array");
  for (std::size_t j = 0; j < devices.value.size(); ++j) {
    s.devices.push_back(parse_device(devices.at(j), s.horizon, base));
  }

  if (root.has("constants")) {
    const Node c = root.at("constants");
    c.expect_object({"grad_bound", "lipschitz", "diameter", "norm_bound"});
    auto opt = [&](const char* key, std::optional<double>& out) {
      if (!c.has(key)) return;
      out = c.at(key).number();
      if (*out < 0.0) c.at(key).schema_error("must be >= 0");
    };
    opt("grad_bound", s.constants.grad_bound);
    opt("lipschitz", s.constants.lipschitz);
    opt("diameter", s.constants.diameter);
    opt("norm_bound", s.constants.norm_bound);
  }

  if (root.has("output")) {
    const Node out = root.at("output");
    out.expect_object({"directory", "tables"});
    if (out.has("directory")) s.output.directory = out.at("directory").string();
    if (out.has("tables")) {
      const Node tables = out.at("tables");
      if (!tables.value.is_array()) tables.schema_error("expected an array of table names");
      s.output.trajectory = s.output.summary = s.output.meta = false;
      for (std::size_t i = 0; i < tables.value.size(); ++i) {
        const std::string name = tables.at(i).string();
        if (name == "trajectory") s.output.trajectory = true;
        else if (name == "summary") s.output.summary = true;
        else if (name == "meta") s.output.meta = true;
        else tables.at(i).schema_error("unknown table '" + name + "'");
      }
    }
  }

  validate_scenario(s);
  return s;
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ": invalid JSON");
  } catch (const Json::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  try {
    return parse_document(doc, base_dir);
  } catch (const Json::exception& e) {
    fail(ErrorCode::SchemaError, std::string("malformed scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    fail(ErrorCode::IoError, e.what());
  }
  return parse_scenario(text, path.parent_path());
}

}  // namespace ogc
