#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ogc/devices.hpp"
#include "ogc/grid.hpp"
#include "ogc/oco.hpp"

namespace ogc {

// Optional user-supplied values for the regret-bound constants; anything left
// empty is estimated per step from the advertised sets and objective.
struct ConstantsOverride {
  std::optional<double> grad_bound;
  std::optional<double> lipschitz;
  std::optional<double> diameter;
  std::optional<double> norm_bound;
};

struct OutputSettings {
  std::string directory = "out";
  bool trajectory = true;
  bool summary = true;
  bool meta = true;
};

struct Scenario {
  int horizon = 1;
  double alpha = 0.05;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  double comparator_tol = 1e-6;
  ProjectionOptions projection;
  std::vector<Device> devices;
  GridModel grid;
  ConstantsOverride constants;
  OutputSettings output;
};

void validate_scenario(const Scenario& scenario);

struct DeviceRecord {
  DeviceKind kind = DeviceKind::Pv;
  double p = 0.0;  // realized power
  double q = 0.0;
  double simplex_point = 0.0;  // HVAC only
  bool on = false;             // HVAC only
  bool locked = false;         // HVAC lock state when the step was implemented
  double soc = 0.0;            // battery state of charge after the step
};

struct StepRecord {
  int step = 0;
  int advertisement_step = 0;  // production step of the advertisements the CC consumed
  Vector requested;            // x_n
  Vector implemented;          // y_n (simplex point for HVAC blocks)
  Vector measured;             // estimate of y_n seen by the CC
  Vector realized_power;       // physical (P, Q) per node
  Vector comparator;           // z_n
  double f_y = 0.0;            // F_n(y_n)
  double f_realized = 0.0;     // F_n with realized HVAC costs
  double f_z = 0.0;            // F_n(z_n)
  double regret = 0.0;         // f_realized - f_z
  double variability_step = 0.0;
  Vector voltage;  // at the expected-power point of y_n
  double substation_power = 0.0;
  double target = 0.0;
  double grad_bound = 0.0;
  double lipschitz = 0.0;
  double diameter = 0.0;
  double norm_bound = 0.0;
  double y_norm = 0.0;
  std::vector<DeviceRecord> devices;
};

struct EpisodeLog {
  std::vector<StepRecord> rows;
  RegretAccount account;
  BoundConstants constants;
  double bound = 0.0;         // asymptotic form with the final average variability
  double bound_finite = 0.0;  // plus the finite-horizon transient
  bool bibs = true;
};

struct EpisodeHooks {
  // Called with the point at which the CC evaluates the objective gradient.
  std::function<void(int step, const Vector& point)> on_cc_gradient;
};

EpisodeLog run_episode(const Scenario& scenario, const EpisodeHooks& hooks = {});

Vector measure(const Vector& implemented, double epsilon, std::mt19937_64& rng);

struct MonteCarloResult {
  std::vector<std::uint64_t> seeds;
  std::vector<double> average_regret;  // per seed
  std::vector<double> bound_finite;    // per seed
  std::vector<bool> bibs;              // per seed
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
  double mean_bound = 0.0;
};

// Independent episodes, one per seed, run concurrently.
MonteCarloResult run_monte_carlo(const Scenario& scenario, std::span<const std::uint64_t> seeds,
                                 unsigned threads = 0);

// Per-step regret-bound constants: lambda from the objective Hessian, B and D
// from the product of advertised sets, F = |grad F(0)| + lambda * B.
BoundConstants step_constants(const CostFunction& objective, const FeasibleSet& advertised_product,
                              double alpha, double epsilon, const ConstantsOverride& overrides);

}  // namespace ogc
