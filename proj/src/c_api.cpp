#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "ogc/io.hpp"
#include "ogc/ogc.h"

struct ogc_scenario {
  ogc::Scenario scenario;
};

struct ogc_episode {
  ogc::EpisodeLog log;
  ogc::OutputSettings output;
};

namespace {

thread_local std::string last_error;

ogc_status to_status(ogc::ErrorCode code) {
  using ogc::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return OGC_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return OGC_ERR_DIMENSION_MISMATCH;
    case ErrorCode::EmptySet: return OGC_ERR_EMPTY_SET;
    case ErrorCode::Unbounded: return OGC_ERR_UNBOUNDED;
    case ErrorCode::NoConvergence: return OGC_ERR_NO_CONVERGENCE;
    case ErrorCode::GradientNotFinite: return OGC_ERR_GRADIENT_NOT_FINITE;
    case ErrorCode::SeriesOutOfRange: return OGC_ERR_SERIES_OUT_OF_RANGE;
    case ErrorCode::InfeasibleLimits: return OGC_ERR_INFEASIBLE_LIMITS;
    case ErrorCode::MissingAdvertisement: return OGC_ERR_MISSING_ADVERTISEMENT;
    case ErrorCode::InfeasibleStep: return OGC_ERR_INFEASIBLE_STEP;
    case ErrorCode::ParseError: return OGC_ERR_PARSE;
    case ErrorCode::SchemaError: return OGC_ERR_SCHEMA;
    case ErrorCode::SeriesLengthError: return OGC_ERR_SERIES_LENGTH;
    case ErrorCode::IoError: return OGC_ERR_IO;
  }
  return OGC_ERR_INTERNAL;
}

template <class F>
ogc_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return OGC_OK;
  } catch (const ogc::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return OGC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return OGC_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return OGC_ERR_INTERNAL;
  }
}

ogc_status null_argument(const char* name) {
  last_error = std::string(name) + " must not be null";
  return OGC_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* ogc_version(void) { return "1.0.0"; }

const char* ogc_status_name(ogc_status status) {
  switch (status) {
    case OGC_OK: return "Ok";
    case OGC_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case OGC_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case OGC_ERR_EMPTY_SET: return "EmptySet";
    case OGC_ERR_UNBOUNDED: return "Unbounded";
    case OGC_ERR_NO_CONVERGENCE: return "NoConvergence";
    case OGC_ERR_GRADIENT_NOT_FINITE: return "GradientNotFinite";
    case OGC_ERR_SERIES_OUT_OF_RANGE: return "SeriesOutOfRange";
    case OGC_ERR_INFEASIBLE_LIMITS: return "InfeasibleLimits";
    case OGC_ERR_MISSING_ADVERTISEMENT: return "MissingAdvertisement";
    case OGC_ERR_INFEASIBLE_STEP: return "InfeasibleStep";
    case OGC_ERR_PARSE: return "ParseError";
    case OGC_ERR_SCHEMA: return "SchemaError";
    case OGC_ERR_SERIES_LENGTH: return "SeriesLengthError";
    case OGC_ERR_IO: return "IoError";
    case OGC_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

const char* ogc_last_error_message(void) { return last_error.c_str(); }

ogc_status ogc_scenario_load(const char* path, ogc_scenario** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new ogc_scenario{ogc::load_scenario(path)}; });
}

ogc_status ogc_scenario_parse(const char* text, const char* base_dir, ogc_scenario** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ogc_scenario{ogc::parse_scenario(text, base_dir ? base_dir : ".")};
  });
}

void ogc_scenario_free(ogc_scenario* scenario) { delete scenario; }

ogc_status ogc_scenario_set_seed(ogc_scenario* scenario, uint64_t seed) {
  if (!scenario) return null_argument("scenario");
  scenario->scenario.seed = seed;
  last_error.clear();
  return OGC_OK;
}

ogc_status ogc_scenario_set_alpha(ogc_scenario* scenario, double alpha) {
  if (!scenario) return null_argument("scenario");
  return guarded([&] {
    ogc::require(std::isfinite(alpha) && alpha > 0.0, ogc::ErrorCode::InvalidArgument,
                 "alpha must be a finite positive number");
    scenario->scenario.alpha = alpha;
  });
}

ogc_status ogc_scenario_set_epsilon(ogc_scenario* scenario, double epsilon) {
  if (!scenario) return null_argument("scenario");
  return guarded([&] {
    ogc::require(std::isfinite(epsilon) && epsilon >= 0.0, ogc::ErrorCode::InvalidArgument,
                 "epsilon must be a finite non-negative number");
    scenario->scenario.epsilon = epsilon;
  });
}

ogc_status ogc_scenario_get_info(const ogc_scenario* scenario, ogc_scenario_info* info) {
  if (!scenario) return null_argument("scenario");
  if (!info) return null_argument("info");
  return guarded([&] {
    const auto& s = scenario->scenario;
    const auto layout = ogc::make_layout(s.devices);
    info->horizon = s.horizon;
    info->alpha = s.alpha;
    info->epsilon = s.epsilon;
    info->seed = s.seed;
    info->device_count = static_cast<int>(s.devices.size());
    info->decision_dim = layout.decision_dim;
    info->output_directory = s.output.directory.c_str();
  });
}

ogc_status ogc_episode_run(const ogc_scenario* scenario, ogc_episode** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ogc_episode{ogc::run_episode(scenario->scenario), scenario->scenario.output};
  });
}

void ogc_episode_free(ogc_episode* episode) { delete episode; }

ogc_status ogc_episode_get_summary(const ogc_episode* episode, ogc_summary* summary) {
  if (!episode) return null_argument("episode");
  if (!summary) return null_argument("summary");
  return guarded([&] {
    const ogc::Summary s = ogc::summarize(ogc::trajectory_table(episode->log));
    summary->horizon = s.horizon;
    summary->alpha = s.alpha;
    summary->epsilon = s.epsilon;
    summary->average_regret = s.average_regret;
    summary->average_variability = s.average_variability;
    summary->grad_bound = s.constants.grad_bound;
    summary->lipschitz = s.constants.lipschitz;
    summary->diameter = s.constants.diameter;
    summary->norm_bound = s.constants.norm_bound;
    summary->k1 = s.constants.k1;
    summary->k2 = s.constants.k2;
    summary->k3 = s.constants.k3;
    summary->bound = s.bound;
    summary->bound_finite = s.bound_finite;
    summary->bibs = s.bibs ? 1 : 0;
    summary->bound_holds = s.bound_holds ? 1 : 0;
  });
}

ogc_status ogc_episode_write(const ogc_episode* episode, const char* directory,
                             const char* const* meta_keys, const char* const* meta_values,
                             size_t meta_count) {
  if (!episode) return null_argument("episode");
  if (!directory) return null_argument("directory");
  if (meta_count > 0 && (!meta_keys || !meta_values)) return null_argument("meta_keys/meta_values");
  return guarded([&] {
    std::vector<std::pair<std::string, std::string>> meta;
    for (size_t i = 0; i < meta_count; ++i) {
      ogc::require(meta_keys[i] && meta_values[i], ogc::ErrorCode::InvalidArgument,
                   "meta entries must not be null");
      meta.emplace_back(meta_keys[i], meta_values[i]);
    }
    ogc::write_results(episode->log, directory, meta, episode->output);
  });
}

ogc_status ogc_monte_carlo_run(const ogc_scenario* scenario, const uint64_t* seeds,
                               size_t seed_count, const char* directory,
                               ogc_monte_carlo_summary* summary) {
  if (!scenario) return null_argument("scenario");
  if (!seeds || seed_count == 0) return null_argument("seeds");
  return guarded([&] {
    const auto result = ogc::run_monte_carlo(scenario->scenario, {seeds, seed_count});
    if (directory) ogc::write_monte_carlo(result, directory);
    if (summary) {
      summary->seeds = result.seeds.size();
      summary->mean_average_regret = result.mean_regret;
      summary->stderr_average_regret = result.stderr_regret;
      summary->mean_bound_finite = result.mean_bound;
      summary->all_bibs = 1;
      for (bool b : result.bibs) summary->all_bibs &= b ? 1 : 0;
    }
  });
}

ogc_status ogc_report(const char* directory, char** out_text) {
  if (!directory) return null_argument("directory");
  if (!out_text) return null_argument("out_text");
  *out_text = nullptr;
  return guarded([&] {
    const std::string text = ogc::report(directory);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out_text = buf;
  });
}

void ogc_string_free(char* text) { delete[] text; }

}  // extern "C"
