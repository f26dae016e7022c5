#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ogc/io.hpp"

namespace ogc {

std::size_t Table::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) fail(ErrorCode::SchemaError, "table has no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || first == last) {
    fail(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(std::string_view text) {
  Table table;
  std::size_t pos = 0;
  int line_no = 0;
  auto split = [](std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                         : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (table.header.empty()) {
      for (auto c : cells) table.header.emplace_back(c);
      continue;
    }
    if (cells.size() != table.header.size()) {
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(table.header.size()) + " fields, got " +
                                      std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) row.push_back(parse_number(c));
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) fail(ErrorCode::ParseError, "table has no header row");
  return table;
}

Table trajectory_table(const EpisodeLog& log) {
  Table t;
  t.header = {"step",          "f_y",            "f_realized",     "f_z",
              "regret",        "cumulative_regret", "average_regret", "variability_step",
              "average_variability", "grad_bound_n", "lipschitz_n",   "diameter_n",
              "norm_bound_n",  "alpha",          "epsilon",        "y_norm",
              "bound",         "bound_finite",   "substation_power", "target",
              "v_min",         "v_max"};
  if (log.rows.empty()) return t;
  const auto& first = log.rows.front();
  for (std::size_t j = 0; j < first.devices.size(); ++j) {
    const std::string prefix = "d" + std::to_string(j) + "_";
    t.header.push_back(prefix + "p");
    t.header.push_back(prefix + "q");
    if (first.devices[j].kind == DeviceKind::Hvac) {
      t.header.push_back(prefix + "y");
      t.header.push_back(prefix + "on");
      t.header.push_back(prefix + "locked");
    } else if (first.devices[j].kind == DeviceKind::Battery) {
      t.header.push_back(prefix + "soc");
    }
  }

  double cumulative = 0.0;
  double variability = 0.0;
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const StepRecord& r = log.rows[i];
    const double n = static_cast<double>(i + 1);
    cumulative += r.regret;
    variability += r.variability_step;
    const double avg_var = variability / n;
    std::vector<double> row = {static_cast<double>(r.step),
                               r.f_y,
                               r.f_realized,
                               r.f_z,
                               r.regret,
                               cumulative,
                               cumulative / n,
                               r.variability_step,
                               avg_var,
                               r.grad_bound,
                               r.lipschitz,
                               r.diameter,
                               r.norm_bound,
                               log.constants.step_size,
                               log.constants.meas_error,
                               r.y_norm,
                               evaluate_bound(log.constants, avg_var),
                               finite_horizon_bound(log.constants, avg_var, static_cast<int>(i + 1)),
                               r.substation_power,
                               r.target,
                               r.voltage.minCoeff(),
                               r.voltage.maxCoeff()};
    for (const auto& d : r.devices) {
      row.push_back(d.p);
      row.push_back(d.q);
      if (d.kind == DeviceKind::Hvac) {
        row.push_back(d.simplex_point);
        row.push_back(d.on ? 1.0 : 0.0);
        row.push_back(d.locked ? 1.0 : 0.0);
      } else if (d.kind == DeviceKind::Battery) {
        row.push_back(d.soc);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Summary summarize(const Table& trajectory) {
  require(!trajectory.rows.empty(), ErrorCode::SchemaError, "trajectory has no rows");
  const std::size_t c_regret = trajectory.column("regret");
  const std::size_t c_var = trajectory.column("variability_step");
  const std::size_t c_grad = trajectory.column("grad_bound_n");
  const std::size_t c_lip = trajectory.column("lipschitz_n");
  const std::size_t c_diam = trajectory.column("diameter_n");
  const std::size_t c_norm = trajectory.column("norm_bound_n");
  const std::size_t c_alpha = trajectory.column("alpha");
  const std::size_t c_eps = trajectory.column("epsilon");
  const std::size_t c_ynorm = trajectory.column("y_norm");

  double cumulative = 0.0;
  double variability = 0.0;
  double grad = 0.0, lip = 0.0, diam = 0.0, norm = 0.0;
  for (const auto& row : trajectory.rows) {
    cumulative += row[c_regret];
    variability += row[c_var];
    grad = std::max(grad, row[c_grad]);
    lip = std::max(lip, row[c_lip]);
    diam = std::max(diam, row[c_diam]);
    norm = std::max(norm, row[c_norm]);
  }
  Summary s;
  s.horizon = static_cast<int>(trajectory.rows.size());
  s.alpha = trajectory.rows.front()[c_alpha];
  s.epsilon = trajectory.rows.front()[c_eps];
  const double n = static_cast<double>(s.horizon);
  s.average_regret = cumulative / n;
  s.average_variability = variability / n;
  s.constants = BoundConstants::make(grad, lip, diam, norm, s.alpha, s.epsilon);
  s.bound = evaluate_bound(s.constants, s.average_variability);
  s.bound_finite = finite_horizon_bound(s.constants, s.average_variability, s.horizon);
  s.bibs = std::all_of(trajectory.rows.begin(), trajectory.rows.end(),
                       [&](const std::vector<double>& row) { return row[c_ynorm] <= norm + 1e-9; });
  s.bound_holds = s.average_regret <= s.bound_finite;
  return s;
}

Table summary_table(const Summary& s) {
  Table t;
  t.header = {"horizon", "alpha", "epsilon", "average_regret", "average_variability",
              "F",       "lambda", "D",      "B",              "K1",
              "K2",      "K3",     "bound",  "bound_finite",   "bibs",
              "bound_holds"};
  t.rows.push_back({static_cast<double>(s.horizon), s.alpha, s.epsilon, s.average_regret,
                    s.average_variability, s.constants.grad_bound, s.constants.lipschitz,
                    s.constants.diameter, s.constants.norm_bound, s.constants.k1, s.constants.k2,
                    s.constants.k3, s.bound, s.bound_finite, s.bibs ? 1.0 : 0.0,
                    s.bound_holds ? 1.0 : 0.0});
  return t;
}

Table monte_carlo_table(const MonteCarloResult& r) {
  Table t;
  t.header = {"seed", "average_regret", "bound_finite", "bibs"};
  for (std::size_t i = 0; i < r.seeds.size(); ++i) {
    t.rows.push_back({static_cast<double>(r.seeds[i]), r.average_regret[i], r.bound_finite[i],
                      r.bibs[i] ? 1.0 : 0.0});
  }
  return t;
}

Table monte_carlo_summary_table(const MonteCarloResult& r) {
  Table t;
  t.header = {"seeds", "mean_average_regret", "stderr", "ci3_low", "ci3_high", "mean_bound_finite",
              "all_bibs", "mean_below_bound"};
  const bool all_bibs = std::all_of(r.bibs.begin(), r.bibs.end(), [](bool b) { return b; });
  t.rows.push_back({static_cast<double>(r.seeds.size()), r.mean_regret, r.stderr_regret,
                    r.mean_regret - 3.0 * r.stderr_regret, r.mean_regret + 3.0 * r.stderr_regret,
                    r.mean_bound, all_bibs ? 1.0 : 0.0, r.mean_regret <= r.mean_bound ? 1.0 : 0.0});
  return t;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorCode::IoError, "failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

void write_results(const EpisodeLog& log, const std::filesystem::path& dir,
                   const std::vector<std::pair<std::string, std::string>>& meta,
                   const OutputSettings& output) {
  ensure_directory(dir);
  const Table trajectory = trajectory_table(log);
  if (output.trajectory) write_text_file(dir / "trajectory.csv", format_csv(trajectory));
  if (output.summary) write_text_file(dir / "summary.csv", format_csv(summary_table(summarize(trajectory))));
  if (output.meta) {
    std::string text;
    for (const auto& [k, v] : meta) text += k + ": " + v + "\n";
    write_text_file(dir / "meta.txt", text);
  }
}

void write_monte_carlo(const MonteCarloResult& result, const std::filesystem::path& dir) {
  ensure_directory(dir);
  write_text_file(dir / "aggregate.csv", format_csv(monte_carlo_table(result)));
  write_text_file(dir / "aggregate_summary.csv", format_csv(monte_carlo_summary_table(result)));
}

std::string report(const std::filesystem::path& dir) {
  const Table trajectory = parse_csv(read_text_file(dir / "trajectory.csv"));
  return format_csv(summary_table(summarize(trajectory)));
}

}  // namespace ogc
