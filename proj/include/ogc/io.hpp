#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ogc/sim.hpp"

namespace ogc {

// Scenario files are JSON documents with sections run / grid / devices /
// constants / output. Series fields accept a number (constant), an inline
// array, or {"file": "relative/path.csv"} with one value per line. Unknown keys
// are rejected.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

// Rectangular numeric table with a header row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const;
};

// Shortest representation that parses back to the same double.
std::string format_number(double value);
double parse_number(std::string_view text);

std::string format_csv(const Table& table);
Table parse_csv(std::string_view text);

Table trajectory_table(const EpisodeLog& log);

struct Summary {
  int horizon = 0;
  double alpha = 0.0;
  double epsilon = 0.0;
  double average_regret = 0.0;
  double average_variability = 0.0;
  BoundConstants constants;
  double bound = 0.0;
  double bound_finite = 0.0;
  bool bibs = true;
  bool bound_holds = true;
};

// Everything in the summary is recomputed from trajectory columns.
Summary summarize(const Table& trajectory);
Table summary_table(const Summary& summary);

Table monte_carlo_table(const MonteCarloResult& result);
Table monte_carlo_summary_table(const MonteCarloResult& result);

// Writes trajectory.csv, summary.csv and meta.txt (key: value lines).
void write_results(const EpisodeLog& log, const std::filesystem::path& dir,
                   const std::vector<std::pair<std::string, std::string>>& meta,
                   const OutputSettings& output = {});
void write_monte_carlo(const MonteCarloResult& result, const std::filesystem::path& dir);

// Recomputes summary.csv text from dir/trajectory.csv.
std::string report(const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ogc
