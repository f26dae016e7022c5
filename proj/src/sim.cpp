#include "ogc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace ogc {

namespace {

[[noreturn]] void rethrow_at_step(int step, const Error& e, bool cc_projection) {
  const std::string where = "step " + std::to_string(step) + ": ";
  if (cc_projection &&
      (e.code() == ErrorCode::NoConvergence || e.code() == ErrorCode::EmptySet)) {
    fail(ErrorCode::InfeasibleStep, where + "projection onto the system feasible set failed: " + e.what());
  }
  fail(e.code(), where + e.what());
}

// Runs f; errors from projecting onto the system set become InfeasibleStep.
template <class F>
auto at_step(int step, bool cc_projection, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    rethrow_at_step(step, e, cc_projection);
  }
}

FeasibleSet advertised_product(std::span<const Advertisement> ads) {
  std::vector<FeasibleSet> factors;
  factors.reserve(ads.size());
  for (const auto& ad : ads) factors.push_back(ad.feasible);
  return FeasibleSet::product(std::move(factors));
}

std::vector<Advertisement> advertise_all(const std::vector<Device>& devices, int step) {
  std::vector<Advertisement> ads;
  ads.reserve(devices.size());
  for (std::size_t j = 0; j < devices.size(); ++j) {
    ads.push_back(advertise(devices[j], step, static_cast<int>(j)));
  }
  return ads;
}

}  // namespace

void validate_scenario(const Scenario& s) {
  require(s.horizon >= 1, ErrorCode::SchemaError, "run.horizon must be >= 1");
  require(std::isfinite(s.alpha) && s.alpha > 0.0, ErrorCode::SchemaError, "run.alpha must be > 0");
  require(std::isfinite(s.epsilon) && s.epsilon >= 0.0, ErrorCode::SchemaError,
          "run.epsilon must be >= 0");
  require(std::isfinite(s.comparator_tol) && s.comparator_tol > 0.0, ErrorCode::SchemaError,
          "run.comparator_tolerance must be > 0");
  require(s.projection.tol > 0.0 && s.projection.max_iter > 0, ErrorCode::SchemaError,
          "run projection tolerance and iteration budget must be > 0");
  require(!s.devices.empty(), ErrorCode::SchemaError, "devices must not be empty");
  for (std::size_t j = 0; j < s.devices.size(); ++j) {
    const std::string at = "devices[" + std::to_string(j) + "]";
    if (const auto* pv = std::get_if<PvDevice>(&s.devices[j])) {
      require(pv->s_rated > 0.0, ErrorCode::SchemaError, at + ".s_rated must be > 0");
      require(pv->c1 >= 0.0 && pv->c2 >= 0.0, ErrorCode::SchemaError, at + " costs must be >= 0");
      require(pv->available_power.covers(s.horizon), ErrorCode::SeriesLengthError,
              at + ".available_power does not cover the horizon");
      for (double v : pv->available_power.values()) {
        require(std::isfinite(v) && v >= 0.0, ErrorCode::SchemaError,
                at + ".available_power must be >= 0");
      }
    } else if (const auto* b = std::get_if<BatteryDevice>(&s.devices[j])) {
      require(b->s_rated > 0.0, ErrorCode::SchemaError, at + ".s_rated must be > 0");
      require(b->soc >= 0.0 && b->soc <= 1.0, ErrorCode::SchemaError, at + ".soc must lie in [0, 1]");
      require(b->soc_target >= 0.0 && b->soc_target <= 1.0, ErrorCode::SchemaError,
              at + ".soc_target must lie in [0, 1]");
      require(b->capacity_energy > 0.0, ErrorCode::SchemaError, at + ".capacity must be > 0");
      require(b->step_duration > 0.0, ErrorCode::SchemaError, at + ".step_hours must be > 0");
      require(b->limits.p_min <= 0.0 && b->limits.p_max >= 0.0, ErrorCode::SchemaError,
              at + " requires p_min <= 0 <= p_max");
      require(b->limits.taper_band >= 0.0 && b->limits.taper_band <= 1.0, ErrorCode::SchemaError,
              at + ".taper_band must lie in [0, 1]");
      require(b->c1 >= 0.0 && b->c2 >= 0.0, ErrorCode::SchemaError, at + " costs must be >= 0");
    } else {
      const auto& h = std::get<HvacDevice>(s.devices[j]);
      require(h.p_max > 0.0, ErrorCode::SchemaError, at + ".p_max must be > 0");
      require(h.min_on_steps >= 0 && h.min_off_steps >= 0, ErrorCode::SchemaError,
              at + " dwell steps must be >= 0");
      require(!h.locked || h.dwell_counter > 0, ErrorCode::SchemaError,
              at + ".dwell_counter must be > 0 when locked");
      require(h.dwell_counter >= 0 && h.dwell_counter <= std::max(h.min_on_steps, h.min_off_steps),
              ErrorCode::SchemaError, at + ".dwell_counter must not exceed the dwell steps");
      require(h.cost_on.covers(s.horizon), ErrorCode::SeriesLengthError,
              at + ".cost_on does not cover the horizon");
      require(h.cost_off.covers(s.horizon), ErrorCode::SeriesLengthError,
              at + ".cost_off does not cover the horizon");
    }
  }
  const DecisionLayout layout = make_layout(s.devices);
  validate_grid(s.grid, layout, s.horizon);
}

Vector measure(const Vector& implemented, double epsilon, std::mt19937_64& rng) {
  return implemented + sample_uniform_ball(static_cast<int>(implemented.size()), epsilon, rng);
}

BoundConstants step_constants(const CostFunction& objective, const FeasibleSet& advertised,
                              double alpha, double epsilon, const ConstantsOverride& overrides) {
  const SetBounds sb = bounds(advertised);
  const double lipschitz = overrides.lipschitz.value_or(gradient_lipschitz(objective));
  const double norm_bound = overrides.norm_bound.value_or(sb.norm_bound);
  const double diameter = overrides.diameter.value_or(sb.diameter);
  const double grad_bound = overrides.grad_bound.value_or(
      gradient(objective, Vector::Zero(objective.dimension())).norm() + lipschitz * norm_bound);
  return BoundConstants::make(grad_bound, lipschitz, diameter, norm_bound, alpha, epsilon);
}

EpisodeLog run_episode(const Scenario& scenario, const EpisodeHooks& hooks) {
  validate_scenario(scenario);
  const DecisionLayout layout = make_layout(scenario.devices);
  const GridModel& grid = scenario.grid;
  const std::size_t device_count = scenario.devices.size();
  ComparatorOptions comparator_options;
  comparator_options.tol = scenario.comparator_tol;
  comparator_options.projection = scenario.projection;

  std::mt19937_64 rng(scenario.seed);
  std::vector<Device> devices = scenario.devices;

  // Initial request: the origin projected onto the system set built from the
  // step-0 advertisements.
  Vector requested = at_step(0, true, [&] {
    const auto ads = advertise_all(devices, 0);
    const FeasibleSet initial = build_feasible_set(grid, layout, ads, 0);
    return project(initial, Vector::Zero(layout.decision_dim), scenario.projection);
  });

  EpisodeLog log;
  log.rows.reserve(static_cast<std::size_t>(scenario.horizon));
  std::optional<Vector> previous_comparator;
  double max_grad = 0.0, max_lipschitz = 0.0, max_diameter = 0.0, max_norm = 0.0;

  for (int n = 0; n < scenario.horizon; ++n) {
    StepRecord row;
    row.step = n;
    row.requested = requested;

    // LCs advertise from their step-n state (persistent predictor for n + 1).
    const auto ads = at_step(n, false, [&] { return advertise_all(devices, n); });
    row.advertisement_step = ads.front().valid_for_step - 1;

    // LCs implement.
    Vector implemented(layout.decision_dim);
    Vector power(layout.power_dim);
    row.devices.resize(device_count);
    double realized_cost_shift = 0.0;
    at_step(n, false, [&] {
      for (std::size_t j = 0; j < device_count; ++j) {
        const DeviceSlot& slot = layout.slots[j];
        const Vector x_j = requested.segment(slot.decision.offset, slot.decision.length);
        DeviceRecord& rec = row.devices[j];
        rec.kind = slot.kind;
        if (auto* hvac = std::get_if<HvacDevice>(&devices[j])) {
          rec.locked = hvac->locked;
          const HvacStep out = hvac_implement(*hvac, x_j(0), rng);
          rec.simplex_point = out.simplex_point;
          rec.on = out.realized_on;
          const double weight = device_weight(grid, j, device_count);
          const CostFunction expected = ads[j].cost;
          realized_cost_shift +=
              weight * (hvac_realized_cost(*hvac, n, out.realized_on) -
                        evaluate(expected, Vector::Constant(1, out.simplex_point)));
          implemented(slot.decision.offset) = out.simplex_point;
          *hvac = out.device;
          const PowerPoint pw = realized_power(devices[j], Vector::Constant(1, out.realized_on ? 1.0 : 0.0));
          rec.p = pw.p;
          rec.q = pw.q;
        } else {
          const Vector y_j = lc_implement(x_j, local_set(devices[j], n), scenario.projection);
          implemented.segment(slot.decision.offset, slot.decision.length) = y_j;
          const PowerPoint pw = realized_power(devices[j], y_j);
          rec.p = pw.p;
          rec.q = pw.q;
          if (auto* battery = std::get_if<BatteryDevice>(&devices[j])) {
            *battery = battery_soc_update(*battery, y_j(0));
            rec.soc = battery->soc;
          }
        }
        power(slot.power_offset) = rec.p;
        power(slot.power_offset + 1) = rec.q;
      }
    });
    row.implemented = implemented;
    row.realized_power = power;
    row.y_norm = implemented.norm();

    // Measurement.
    row.measured = measure(implemented, scenario.epsilon, rng);

    // CC assembles F_n and U_n from the advertisements and step-n grid data.
    const CostFunction objective =
        at_step(n, false, [&] { return build_objective(grid, layout, ads, n); });
    const FeasibleSet system_set =
        at_step(n, false, [&] { return build_feasible_set(grid, layout, ads, n); });

    row.f_y = evaluate(objective, implemented);
    row.f_realized = row.f_y + realized_cost_shift;
    row.comparator =
        at_step(n, true, [&] { return comparator_step(objective, system_set, comparator_options); });
    row.f_z = evaluate(objective, row.comparator);
    row.regret = row.f_realized - row.f_z;
    row.variability_step = previous_comparator ? (row.comparator - *previous_comparator).norm() : 0.0;
    log.account = accumulate_regret(std::move(log.account), row.f_realized, row.f_z,
                                    previous_comparator, row.comparator);
    previous_comparator = row.comparator;

    const BoundConstants sc = at_step(n, false, [&] {
      return step_constants(objective, advertised_product(ads), scenario.alpha, scenario.epsilon,
                            scenario.constants);
    });
    row.grad_bound = sc.grad_bound;
    row.lipschitz = sc.lipschitz;
    row.diameter = sc.diameter;
    row.norm_bound = sc.norm_bound;
    max_grad = std::max(max_grad, sc.grad_bound);
    max_lipschitz = std::max(max_lipschitz, sc.lipschitz);
    max_diameter = std::max(max_diameter, sc.diameter);
    max_norm = std::max(max_norm, sc.norm_bound);

    row.voltage = voltages(grid, layout, implemented, n);
    row.substation_power = substation_power(grid, layout, implemented, n);
    row.target = grid.tracking_signal.at(n);

    // CC update, gradient taken at the measurement.
    if (hooks.on_cc_gradient) hooks.on_cc_gradient(n, row.measured);
    requested = at_step(n, true, [&] {
      return cc_update(row.measured, objective, system_set, scenario.alpha, scenario.projection);
    });

    log.rows.push_back(std::move(row));
  }

  log.constants = BoundConstants::make(max_grad, max_lipschitz, max_diameter, max_norm,
                                       scenario.alpha, scenario.epsilon);
  log.bound = evaluate_bound(log.constants, log.account.average_variability());
  log.bound_finite =
      finite_horizon_bound(log.constants, log.account.average_variability(), log.account.step_count);
  log.bibs = std::all_of(log.rows.begin(), log.rows.end(), [&](const StepRecord& r) {
    return check_bibs(r.implemented, log.constants.norm_bound);
  });
  return log;
}

MonteCarloResult run_monte_carlo(const Scenario& scenario, std::span<const std::uint64_t> seeds,
                                 unsigned threads) {
  require(!seeds.empty(), ErrorCode::InvalidArgument, "at least one seed is required");
  validate_scenario(scenario);
  const std::size_t count = seeds.size();
  MonteCarloResult out;
  out.seeds.assign(seeds.begin(), seeds.end());
  out.average_regret.assign(count, 0.0);
  out.bound_finite.assign(count, 0.0);
  std::vector<char> bibs(count, 0);
  std::vector<std::exception_ptr> errors(count);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::size_t next = 0;
  std::mutex mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mutex);
        if (next >= count) return;
        i = next++;
      }
      try {
        Scenario s = scenario;
        s.seed = seeds[i];
        const EpisodeLog log = run_episode(s);
        out.average_regret[i] = log.account.average_regret();
        out.bound_finite[i] = log.bound_finite;
        bibs[i] = log.bibs;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  out.bibs.assign(bibs.begin(), bibs.end());
  double sum = 0.0;
  double bound_sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sum += out.average_regret[i];
    bound_sum += out.bound_finite[i];
  }
  out.mean_regret = sum / static_cast<double>(count);
  out.mean_bound = bound_sum / static_cast<double>(count);
  if (count > 1) {
    double ss = 0.0;
    for (double r : out.average_regret) ss += (r - out.mean_regret) * (r - out.mean_regret);
    out.stderr_regret = std::sqrt(ss / static_cast<double>(count - 1) / static_cast<double>(count));
  }
  return out;
}

}  // namespace ogc
