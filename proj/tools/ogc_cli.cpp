#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ogc/ogc.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

int report_failure(ogc_status status, int exit_code) {
  std::fprintf(stderr, "error: %s: %s\n", ogc_status_name(status), ogc_last_error_message());
  return exit_code;
}

std::string number_text(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct Scenario {
  ogc_scenario* handle = nullptr;
  ~Scenario() { ogc_scenario_free(handle); }
};

struct Episode {
  ogc_episode* handle = nullptr;
  ~Episode() { ogc_episode_free(handle); }
};

struct RunFlags {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::optional<double> alpha;
  std::optional<double> epsilon;
};

bool parse_seed_range(const std::string& text, std::vector<std::uint64_t>& seeds) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) return false;
  try {
    std::size_t used = 0;
    const std::string lo_text = text.substr(0, dots);
    const std::string hi_text = text.substr(dots + 2);
    if (lo_text.empty() || hi_text.empty() || lo_text[0] == '-' || hi_text[0] == '-') return false;
    const std::uint64_t lo = std::stoull(lo_text, &used);
    if (used != lo_text.size()) return false;
    const std::uint64_t hi = std::stoull(hi_text, &used);
    if (used != hi_text.size() || hi < lo || hi - lo >= 1'000'000) return false;
    for (std::uint64_t s = lo;; ++s) {
      seeds.push_back(s);
      if (s == hi) break;
    }
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

int run_command(const RunFlags& flags) {
  std::vector<std::uint64_t> seeds;
  if (!flags.seeds.empty() && !parse_seed_range(flags.seeds, seeds)) {
    std::fprintf(stderr, "error: Usage: --seeds expects N..M with N <= M\n");
    return kExitUsage;
  }

  Scenario scenario;
  ogc_status st = ogc_scenario_load(flags.scenario.c_str(), &scenario.handle);
  if (st != OGC_OK) return report_failure(st, kExitValidation);

  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("tool_version", ogc_version());
  meta.emplace_back("scenario", flags.scenario);
  std::string overrides;
  auto note_override = [&](const std::string& name) {
    overrides += overrides.empty() ? name : "," + name;
  };
  if (flags.seed) {
    ogc_scenario_set_seed(scenario.handle, *flags.seed);
    note_override("seed");
  }
  if (flags.alpha) {
    st = ogc_scenario_set_alpha(scenario.handle, *flags.alpha);
    if (st != OGC_OK) return report_failure(st, kExitValidation);
    note_override("alpha");
  }
  if (flags.epsilon) {
    st = ogc_scenario_set_epsilon(scenario.handle, *flags.epsilon);
    if (st != OGC_OK) return report_failure(st, kExitValidation);
    note_override("epsilon");
  }
  if (!flags.out.empty()) note_override("out");

  ogc_scenario_info info{};
  st = ogc_scenario_get_info(scenario.handle, &info);
  if (st != OGC_OK) return report_failure(st, kExitValidation);
  const std::string out_dir = flags.out.empty() ? info.output_directory : flags.out;

  meta.emplace_back("horizon", std::to_string(info.horizon));
  meta.emplace_back("alpha", number_text(info.alpha));
  meta.emplace_back("epsilon", number_text(info.epsilon));
  meta.emplace_back("overrides", overrides.empty() ? "none" : overrides);

  const auto start = std::chrono::steady_clock::now();
  if (!seeds.empty()) {
    ogc_monte_carlo_summary summary{};
    st = ogc_monte_carlo_run(scenario.handle, seeds.data(), seeds.size(), out_dir.c_str(), &summary);
    if (st != OGC_OK) return report_failure(st, kExitRuntime);
    std::printf("seeds %zu mean_average_regret %s stderr %s mean_bound_finite %s\n", summary.seeds,
                number_text(summary.mean_average_regret).c_str(),
                number_text(summary.stderr_average_regret).c_str(),
                number_text(summary.mean_bound_finite).c_str());
    return 0;
  }

  meta.emplace_back("seed", std::to_string(info.seed));
  Episode episode;
  st = ogc_episode_run(scenario.handle, &episode.handle);
  if (st != OGC_OK) return report_failure(st, kExitRuntime);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  meta.emplace_back("elapsed_seconds", number_text(elapsed));

  std::vector<const char*> keys;
  std::vector<const char*> values;
  for (const auto& [k, v] : meta) {
    keys.push_back(k.c_str());
    values.push_back(v.c_str());
  }
  st = ogc_episode_write(episode.handle, out_dir.c_str(), keys.data(), values.data(), meta.size());
  if (st != OGC_OK) return report_failure(st, kExitRuntime);

  ogc_summary summary{};
  st = ogc_episode_get_summary(episode.handle, &summary);
  if (st != OGC_OK) return report_failure(st, kExitRuntime);
  std::printf("average_regret %s bound_finite %s bibs %d\n", number_text(summary.average_regret).c_str(),
              number_text(summary.bound_finite).c_str(), summary.bibs);
  return 0;
}

int validate_command(const std::string& path) {
  Scenario scenario;
  const ogc_status st = ogc_scenario_load(path.c_str(), &scenario.handle);
  if (st != OGC_OK) return report_failure(st, kExitValidation);
  std::printf("OK\n");
  return 0;
}

int report_command(const std::string& dir) {
  char* text = nullptr;
  const ogc_status st = ogc_report(dir.c_str(), &text);
  if (st != OGC_OK) return report_failure(st, st == OGC_ERR_IO ? kExitRuntime : kExitValidation);
  std::fputs(text, stdout);
  ogc_string_free(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online gradient control simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ogc_version());

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Run an episode or a seed sweep");
  run->add_option("scenario", run_flags.scenario, "Scenario file")->required();
  run->add_option("--out", run_flags.out, "Output directory");
  run->add_option("--seed", run_flags.seed, "RNG seed");
  run->add_option("--seeds", run_flags.seeds, "Seed range N..M for a Monte Carlo sweep");
  run->add_option("--alpha", run_flags.alpha, "Step size");
  run->add_option("--epsilon", run_flags.epsilon, "Measurement error radius");
  run->get_option("--seed")->excludes(run->get_option("--seeds"));

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Validate a scenario file");
  validate->add_option("scenario", validate_path, "Scenario file")->required();

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Recompute the summary from a trajectory");
  report->add_option("log_dir", report_dir, "Directory holding trajectory.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: Usage: %s\n", e.what());
    return kExitUsage;
  }

  if (*run) return run_command(run_flags);
  if (*validate) return validate_command(validate_path);
  return report_command(report_dir);
}
