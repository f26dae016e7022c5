// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <boost/math/distributions/chi_squared.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "instances.hpp"
#include "ogc/cost.hpp"
#include "ogc/io.hpp"
#include "ogc/oco.hpp"
#include "ogc/sim.hpp"
#include "oracles.hpp"

using namespace ogc;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id = 0;
  double limit_seconds = 0.0;  // 0 means no runtime limit
  Outcome outcome;
  double seconds = 0.0;
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream ss;
  ss.precision(precision);
  ss << v;
  return ss.str();
}

template <class F>
Criterion timed(int id, double limit_seconds, F&& body) {
  Criterion c;
  c.id = id;
  c.limit_seconds = limit_seconds;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.outcome = body();
  } catch (const std::exception& e) {
    c.outcome = {false, std::string("exception: ") + e.what()};
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "criterion " << id << " evaluated in " << fmt(c.seconds, 3) << " s\n";
  return c;
}

// ---------------------------------------------------------------------------
// Scenarios

PvDevice pv(double s, double available, double c1, double c2) {
  PvDevice d;
  d.s_rated = s;
  d.available_power = Series<double>::constant(available);
  d.c1 = c1;
  d.c2 = c2;
  return d;
}

// Large capacity keeps the state of charge, and therefore the advertised set
// and cost, fixed over the run.
BatteryDevice steady_battery() {
  BatteryDevice b;
  b.s_rated = 0.5;
  b.soc = 0.7;
  b.soc_target = 0.5;
  b.capacity_energy = 1e6;
  b.step_duration = 0.25;
  b.limits = {-0.5, 0.5, 0.05};
  b.c1 = 0.2;
  b.c2 = 0.1;
  return b;
}

std::vector<double> piecewise(int horizon, const std::vector<double>& levels) {
  std::vector<double> out(static_cast<std::size_t>(horizon));
  const int segment = (horizon + static_cast<int>(levels.size()) - 1) / static_cast<int>(levels.size());
  for (int n = 0; n < horizon; ++n) out[static_cast<std::size_t>(n)] = levels[static_cast<std::size_t>(n / segment)];
  return out;
}

// Two PV inverters and a battery on a three-node feeder. Voltage sensitivities
// are nonnegative and the band binds at high production.
Scenario tracking_scenario(int horizon, double epsilon, const std::vector<double>& target_levels) {
  Scenario s;
  s.horizon = horizon;
  s.alpha = 0.05;
  s.epsilon = epsilon;
  s.seed = 11;
  s.comparator_tol = 1e-6;
  s.devices = {pv(1.0, 0.8, 0.1, 0.05), pv(0.8, 0.5, 0.1, 0.05), steady_battery()};
  Matrix a(3, 6);
  a << 0.03, 0.010, 0.015, 0.005, 0.015, 0.005,  //
      0.015, 0.005, 0.03, 0.010, 0.015, 0.005,   //
      0.015, 0.005, 0.015, 0.005, 0.03, 0.010;
  s.grid.voltage_matrix = Series<Matrix>::constant(a);
  s.grid.voltage_offset = Series<Vector>::constant(Vector::Constant(3, 1.02));
  Vector w(6);
  w << 1, 0, 1, 0, 1, 0;
  s.grid.substation_weights = Series<Vector>::constant(w);
  s.grid.substation_offset = Series<double>::constant(0.0);
  s.grid.tracking_signal = Series<double>::of(piecewise(horizon, target_levels));
  return s;
}

const std::vector<double> kJumpLevels = {0.4, 1.6, -0.3, 1.0, 0.2, 1.4};

// Largest norm of any point in the product of device sets, from the device
// ratings alone.
double rated_norm_bound(const Scenario& s) {
  double sq = 0.0;
  for (const auto& d : s.devices) {
    if (const auto* p = std::get_if<PvDevice>(&d)) sq += p->s_rated * p->s_rated;
    else if (const auto* b = std::get_if<BatteryDevice>(&d)) sq += b->s_rated * b->s_rated;
    else sq += 1.0;
  }
  return std::sqrt(sq);
}

// Decision-to-power map built from device parameters.
Matrix power_map(const Scenario& s) {
  int dim = 0;
  for (const auto& d : s.devices) dim += std::holds_alternative<HvacDevice>(d) ? 1 : 2;
  Matrix m = Matrix::Zero(2 * static_cast<Eigen::Index>(s.devices.size()), dim);
  int k = 0;
  for (std::size_t j = 0; j < s.devices.size(); ++j) {
    const auto row = 2 * static_cast<Eigen::Index>(j);
    if (const auto* h = std::get_if<HvacDevice>(&s.devices[j])) {
      m(row, k) = -h->p_max;
      k += 1;
    } else {
      m(row, k) = 1.0;
      m(row + 1, k + 1) = 1.0;
      k += 2;
    }
  }
  return m;
}

struct BibsTally {
  long steps = 0;
  long violations = 0;
  int runs = 0;
  void add(const EpisodeLog& log, double bound) {
    ++runs;
    for (const auto& row : log.rows) {
      ++steps;
      if (!(row.implemented.norm() <= bound + 1e-9) || !(row.implemented.norm() <= row.norm_bound + 1e-9)) {
        ++violations;
      }
    }
    if (!log.bibs) ++violations;
  }
};

// Independent evaluation of the finite-horizon regret bound at prefix n with
// the running maxima of the per-step constants.
struct PrefixCheck {
  int checked = 0;
  int violations = 0;
  double worst_margin = kInf;  // min over n of bound - average regret
  double final_regret = 0.0;
  double final_bound = 0.0;
};

PrefixCheck check_prefix_bounds(const EpisodeLog& log, double alpha, double epsilon, int from) {
  PrefixCheck out;
  double cumulative = 0.0, path = 0.0, f = 0.0, lambda = 0.0, d = 0.0, b = 0.0;
  const int steps = static_cast<int>(log.rows.size());
  for (int n = 1; n <= steps; ++n) {
    const auto& row = log.rows[static_cast<std::size_t>(n - 1)];
    cumulative += row.regret;
    path += row.variability_step;
    f = std::max(f, row.grad_bound);
    lambda = std::max(lambda, row.lipschitz);
    d = std::max(d, row.diameter);
    b = std::max(b, row.norm_bound);
    if (n < from) continue;
    const double k1 = f * f / 2.0;
    const double k2 = (2.0 * (d + alpha * f) + (1.0 + alpha * lambda) * epsilon) / 2.0;
    const double k3 = d + b;
    const double bound = k1 * alpha + k2 * (1.0 + alpha * lambda) * epsilon / alpha +
                         k3 * (path / n) / alpha + d * d / (2.0 * alpha * n);
    const double average = cumulative / n;
    ++out.checked;
    if (!(average <= bound)) ++out.violations;
    out.worst_margin = std::min(out.worst_margin, bound - average);
    out.final_regret = average;
    out.final_bound = bound;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Criteria 1-3: geometry and gradients

Outcome criterion_projection_oracles() {
  std::mt19937_64 rng(1001);
  constexpr int kInstances = 500;
  std::map<std::string, double> worst;
  int failures = 0;
  for (int i = 0; i < kInstances; ++i) {
    for (const auto& in : inst::convex_variants(rng)) {
      const Vector x = oracle::uniform_vec(in.set.dimension(), -2.0 * in.scale, 2.0 * in.scale, rng);
      const double err = (project(in.set, x) - inst::oracle_projection(in, x)).norm();
      worst[in.name] = std::max(worst[in.name], err);
      if (!(err <= 1e-4)) ++failures;
    }
  }
  double qp_worst = 0.0;
  int qp_failures = 0;
  for (int i = 0; i < 100; ++i) {
    const auto bh = inst::random_box_halfspace(rng);
    const Vector x = oracle::uniform_vec(2, -3.0, 3.0, rng);
    const double err = (project(bh.set(), x) - oracle::box_halfspace_qp(bh.lo, bh.hi, bh.normal, bh.bound, x)).norm();
    qp_worst = std::max(qp_worst, err);
    if (!(err <= 1e-6)) ++qp_failures;
  }
  double grid_worst = 0.0;
  for (const auto& [name, e] : worst) {
    grid_worst = std::max(grid_worst, e);
    std::cerr << "  " << name << " max error " << e << "\n";
  }
  return {failures == 0 && qp_failures == 0,
          std::to_string(worst.size()) + " variants x " + std::to_string(kInstances) +
              " instances, max grid-oracle error " + fmt(grid_worst, 3) + " (tol 1e-4); Dykstra vs QP max " +
              fmt(qp_worst, 3) + " (tol 1e-6)"};
}

Outcome criterion_nonexpansive() {
  std::mt19937_64 rng(2002);
  constexpr int kPairs = 10000;
  double worst_expansion = -kInf;
  double worst_idem = 0.0;
  int failures = 0;
  std::vector<inst::Instance> variants;
  for (int i = 0; i < kPairs; ++i) {
    if (i % 100 == 0) variants = inst::convex_variants(rng);
    for (const auto& in : variants) {
      const int d = in.set.dimension();
      const Vector x = oracle::uniform_vec(d, -2.0 * in.scale, 2.0 * in.scale, rng);
      const Vector y = oracle::uniform_vec(d, -2.0 * in.scale, 2.0 * in.scale, rng);
      const Vector px = project(in.set, x);
      const Vector py = project(in.set, y);
      const double expansion = (px - py).norm() - (x - y).norm();
      const double idem = (project(in.set, px) - px).cwiseAbs().maxCoeff();
      worst_expansion = std::max(worst_expansion, expansion);
      worst_idem = std::max(worst_idem, idem);
      if (!(expansion <= 1e-12) || !(idem <= 1e-12)) ++failures;
    }
  }
  return {failures == 0, std::to_string(variants.size()) + " variants x " + std::to_string(kPairs) +
                             " pairs, max |Px-Py|-|x-y| " + fmt(worst_expansion, 3) + ", max |P(Px)-Px| " +
                             fmt(worst_idem, 3)};
}

std::shared_ptr<const CostFunction> share(CostFunction f) {
  return std::make_shared<const CostFunction>(std::move(f));
}

Outcome criterion_gradients() {
  std::mt19937_64 rng(3003);
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  using Maker = std::function<CostFunction()>;
  const std::vector<std::pair<std::string, Maker>> variants = {
      {"linear_quadratic_pq", [&] { return CostFunction::linear_quadratic_pq(u(0.1, 2), u(0.1, 2), u(0, 1) < 0.5 ? -1 : 1); }},
      {"expected_finite", [&] { return CostFunction::expected_finite({u(-2, 2), u(-2, 2), u(-2, 2)}); }},
      {"expected_binary", [&] { return CostFunction::expected_binary(u(0, 2), u(2.1, 4)); }},
      {"quadratic_tracking",
       [&] { return CostFunction::quadratic_tracking(oracle::uniform_vec(4, -1, 1, rng), u(-1, 1), u(-1, 1)); }},
      {"weighted_sum", [&] {
         std::vector<WeightedSum::Term> terms;
         terms.push_back({u(0.1, 1), share(CostFunction::linear_quadratic_pq(u(0.1, 2), u(0.1, 2), -1)), {0, 2}});
         terms.push_back({u(0.1, 1), share(CostFunction::linear_quadratic_pq(u(0.1, 2), u(0.1, 2), 1)), {2, 2}});
         terms.push_back({u(0.1, 1), share(CostFunction::expected_binary(u(0, 1), u(1, 2))), {4, 1}});
         terms.push_back({1.0, share(CostFunction::quadratic_tracking(oracle::uniform_vec(5, -1, 1, rng), u(-1, 1), u(-1, 1))),
                          {0, 5}});
         return CostFunction::weighted_sum(std::move(terms), 5);
       }}};
  double worst = 0.0;
  int failures = 0;
  for (const auto& [name, make] : variants) {
    for (int i = 0; i < 100; ++i) {
      const CostFunction f = make();
      const Vector x = oracle::uniform_vec(f.dimension(), -1.5, 1.5, rng);
      const Vector g = gradient(f, x);
      const Vector fd = oracle::finite_difference([&](const Vector& v) { return evaluate(f, v); }, x, 1e-5);
      const double rel = (g - fd).norm() / g.norm();
      worst = std::max(worst, rel);
      if (!(rel <= 1e-5)) ++failures;
    }
  }
  return {failures == 0, std::to_string(variants.size()) + " variants x 100 points, max relative error " +
                             fmt(worst, 3) + " (tol 1e-5)"};
}

// ---------------------------------------------------------------------------
// Criteria 4, 5 and 8: regret bound, vanishing variability, voltage band

struct TrackingRuns {
  std::array<EpisodeLog, 2> logs;
  std::array<Scenario, 2> scenarios;
};

Outcome criterion_bound(TrackingRuns& runs, BibsTally& bibs) {
  constexpr int kHorizon = 10000;
  const std::array<double, 2> epsilons = {0.0, 0.01};
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < 2; ++i) {
    runs.scenarios[i] = tracking_scenario(kHorizon, epsilons[i], kJumpLevels);
    runs.logs[i] = run_episode(runs.scenarios[i]);
    bibs.add(runs.logs[i], rated_norm_bound(runs.scenarios[i]));
    const PrefixCheck c = check_prefix_bounds(runs.logs[i], runs.scenarios[i].alpha, epsilons[i], 100);
    pass = pass && c.violations == 0 && c.checked == kHorizon - 99;
    detail += (i ? "; " : "") + std::string("eps=") + fmt(epsilons[i]) + ": avg regret " + fmt(c.final_regret) +
              " <= bound " + fmt(c.final_bound) + " at n=1e4, min margin over n>=100 " + fmt(c.worst_margin, 3) +
              ", violations " + std::to_string(c.violations);
  }
  return {pass, detail};
}

Outcome criterion_vanishing_variability(BibsTally& bibs) {
  constexpr int kHorizon = 10000;
  const Scenario s = tracking_scenario(kHorizon, 0.0, {0.4});
  const EpisodeLog log = run_episode(s);
  bibs.add(log, rated_norm_bound(s));
  double path = 0.0, f = 0.0, d = 0.0, cumulative = 0.0;
  for (const auto& row : log.rows) {
    path += row.variability_step;
    f = std::max(f, row.grad_bound);
    d = std::max(d, row.diameter);
    cumulative += row.regret;
  }
  const double average = cumulative / kHorizon;
  const double limit = f * f / 2.0 * s.alpha + d * d / (2.0 * s.alpha * kHorizon) + 1e-6;
  return {average <= limit && path == 0.0, "avg regret " + fmt(average) + " <= K1*alpha + D^2/(2 alpha n) + 1e-6 = " +
                                               fmt(limit) + ", comparator path length " + fmt(path)};
}

Outcome criterion_voltage(const TrackingRuns& runs) {
  long steps = 0, violations = 0;
  double worst = -kInf;
  long binding = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    const Scenario& s = runs.scenarios[i];
    const Matrix m = power_map(s);
    for (const auto& row : runs.logs[i].rows) {
      const int n = row.step;
      const Vector v = s.grid.voltage_matrix.at(n) * (m * row.implemented) + s.grid.voltage_offset.at(n);
      ++steps;
      const double excess = std::max((s.grid.v_min - v.array()).maxCoeff(), (v.array() - s.grid.v_max).maxCoeff());
      worst = std::max(worst, excess);
      if (!(excess <= 1e-6)) ++violations;
      if (excess > -1e-4) ++binding;
    }
  }
  return {violations == 0 && steps == 20000,
          std::to_string(steps) + " steps, worst band excess " + fmt(worst, 3) + " (tol 1e-6), steps within 1e-4 of a limit " +
              std::to_string(binding) + ", violations " + std::to_string(violations)};
}

// ---------------------------------------------------------------------------
// Criterion 6: randomized control

Scenario hvac_scenario() {
  Scenario s;
  s.horizon = 2000;
  s.alpha = 0.1;
  s.epsilon = 0.01;
  HvacDevice h;
  h.p_max = 0.5;
  h.min_on_steps = 3;
  h.min_off_steps = 2;
  h.cost_on = Series<double>::constant(0.05);
  h.cost_off = Series<double>::constant(0.3);
  s.devices = {pv(1.0, 0.6, 0.1, 0.05), h};
  Matrix a(2, 4);
  a << 0.03, 0.01, 0.01, 0.0,  //
      0.01, 0.005, 0.03, 0.0;
  s.grid.voltage_matrix = Series<Matrix>::constant(a);
  s.grid.voltage_offset = Series<Vector>::constant(Vector::Constant(2, 1.0));
  Vector w(4);
  w << 1, 0, 1, 0;
  s.grid.substation_weights = Series<Vector>::constant(w);
  s.grid.substation_offset = Series<double>::constant(0.0);
  std::vector<double> target(2000);
  for (std::size_t n = 0; n < target.size(); ++n) target[n] = 0.25 + 0.2 * std::sin(2.0 * M_PI * static_cast<double>(n) / 500.0);
  s.grid.tracking_signal = Series<double>::of(target);
  return s;
}

Outcome criterion_randomized(BibsTally& bibs) {
  constexpr int kSeeds = 100;
  constexpr int kBins = 10;
  const Scenario base = hvac_scenario();
  std::vector<double> regrets, bounds;
  std::array<double, kBins> observed{}, expected{}, variance{};
  long fractional = 0;
  long forced_mismatch = 0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    Scenario s = base;
    s.seed = static_cast<std::uint64_t>(seed);
    const EpisodeLog log = run_episode(s);
    bibs.add(log, rated_norm_bound(s));
    regrets.push_back(log.account.average_regret());
    bounds.push_back(log.bound_finite);
    for (const auto& row : log.rows) {
      const DeviceRecord& d = row.devices[1];
      const double p = d.simplex_point;
      if (d.locked || p <= 0.0 || p >= 1.0) {
        if (d.on != (p >= 1.0)) ++forced_mismatch;
        continue;
      }
      const auto bin = static_cast<std::size_t>(std::min(kBins - 1, static_cast<int>(p * kBins)));
      observed[bin] += d.on ? 1.0 : 0.0;
      expected[bin] += p;
      variance[bin] += p * (1.0 - p);
      ++fractional;
    }
  }
  double mean = 0.0, mean_bound = 0.0;
  for (int i = 0; i < kSeeds; ++i) {
    mean += regrets[static_cast<std::size_t>(i)] / kSeeds;
    mean_bound += bounds[static_cast<std::size_t>(i)] / kSeeds;
  }
  double ss = 0.0;
  for (double r : regrets) ss += (r - mean) * (r - mean);
  const double se = std::sqrt(ss / (kSeeds - 1) / kSeeds);

  double statistic = 0.0;
  int dof = 0;
  for (std::size_t b = 0; b < kBins; ++b) {
    if (variance[b] < 5.0) continue;
    statistic += (observed[b] - expected[b]) * (observed[b] - expected[b]) / variance[b];
    ++dof;
  }
  const double critical = dof > 0 ? boost::math::quantile(boost::math::chi_squared(dof), 0.99) : 0.0;

  // The library aggregation must agree with the per-episode runs.
  const std::vector<std::uint64_t> first = {1, 2, 3};
  const MonteCarloResult mc = run_monte_carlo(base, first);
  const bool aggregation_agrees = mc.average_regret[0] == regrets[0] && mc.average_regret[2] == regrets[2];

  const bool pass = mean <= mean_bound && dof >= 3 && statistic <= critical && forced_mismatch == 0 && aggregation_agrees;
  return {pass, "mean avg regret " + fmt(mean) + ", 3-sigma interval [" + fmt(mean - 3 * se) + ", " + fmt(mean + 3 * se) +
                    "] vs mean bound " + fmt(mean_bound) + "; chi-square " + fmt(statistic, 4) + " on " +
                    std::to_string(dof) + " bins (1% critical " + fmt(critical, 4) + ") over " +
                    std::to_string(fractional) + " fractional steps"};
}

// ---------------------------------------------------------------------------
// Criterion 9: reduction to online gradient descent

Outcome criterion_ogd(BibsTally& bibs) {
  constexpr int kHorizon = 1000;
  Scenario s = tracking_scenario(kHorizon, 0.0, kJumpLevels);
  s.grid.v_min = -kInf;
  s.grid.v_max = kInf;
  s.alpha = 0.1;
  const EpisodeLog log = run_episode(s);
  bibs.add(log, rated_norm_bound(s));

  // Sets and costs from the device parameters, fixed over the run.
  const auto& pv1 = std::get<PvDevice>(s.devices[0]);
  const auto& pv2 = std::get<PvDevice>(s.devices[1]);
  const auto& bat = std::get<BatteryDevice>(s.devices[2]);
  const std::vector<FeasibleSet> local = {
      FeasibleSet::inverter_disk(std::min(pv1.available_power.at(0), pv1.s_rated), pv1.s_rated),
      FeasibleSet::inverter_disk(std::min(pv2.available_power.at(0), pv2.s_rated), pv2.s_rated),
      FeasibleSet::inverter_disk(bat.limits.p_min, bat.limits.p_max, bat.s_rated)};
  const FeasibleSet u = FeasibleSet::product(local);
  const Matrix m = power_map(s);
  const double w = 1.0 / 3.0;
  auto objective = [&](int n) {
    std::vector<WeightedSum::Term> terms = {
        {w, share(CostFunction::linear_quadratic_pq(pv1.c1, pv1.c2, -1)), {0, 2}},
        {w, share(CostFunction::linear_quadratic_pq(pv2.c1, pv2.c2, -1)), {2, 2}},
        {w, share(CostFunction::linear_quadratic_pq(bat.c1, bat.c2, bat.soc > bat.soc_target ? -1 : 1)), {4, 2}},
        {1.0,
         share(CostFunction::quadratic_tracking(m.transpose() * s.grid.substation_weights.at(n),
                                                s.grid.substation_offset.at(n), s.grid.tracking_signal.at(n))),
         {0, 6}}};
    return CostFunction::weighted_sum(std::move(terms), 6);
  };

  int mismatched = 0;
  Vector x = project(u, Vector::Zero(6));
  for (int n = 0; n < kHorizon; ++n) {
    Vector y(6);
    for (int j = 0; j < 3; ++j) y.segment(2 * j, 2) = project(local[static_cast<std::size_t>(j)], x.segment(2 * j, 2));
    const auto& row = log.rows[static_cast<std::size_t>(n)];
    const bool same = (row.requested.array() == x.array()).all() && (row.implemented.array() == y.array()).all();
    if (!same) ++mismatched;
    const Vector g = gradient(objective(n), y);
    x = project(u, Vector(y - s.alpha * g));
  }
  return {mismatched == 0 && log.rows.size() == kHorizon,
          std::to_string(kHorizon) + " steps, steps differing bitwise from the reference loop: " + std::to_string(mismatched)};
}

// ---------------------------------------------------------------------------
// Criterion 10: determinism and reporting through the command-line tool

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_elapsed(const std::string& meta) {
  std::istringstream in(meta);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("elapsed_seconds:", 0) == 0) continue;
    out += line + "\n";
  }
  return out;
}

std::pair<int, std::string> run_cli(const std::string& args) {
  const std::string command = std::string("\"") + OGC_CLI_PATH + "\" " + args + " 2>&1";
  std::string output;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::array<char, 4096> buffer{};
  std::size_t got;
  while ((got = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) output.append(buffer.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

Outcome criterion_determinism(BibsTally& bibs) {
  const fs::path root = fs::temp_directory_path() / "ogc_acceptance";
  fs::remove_all(root);
  const std::string scenario = std::string("\"") + OGC_EXAMPLE_SCENARIO + "\"";
  std::vector<std::string> problems;
  auto expect_ok = [&](const std::string& args) {
    const auto [code, out] = run_cli(args);
    if (code != 0) problems.push_back("'" + args + "' exited " + std::to_string(code) + ": " + out);
    return out;
  };
  auto dir = [&](const std::string& name) { return (root / name).string(); };

  expect_ok("run " + scenario + " --seed 3 --out \"" + dir("a") + "\"");
  expect_ok("run " + scenario + " --seed 3 --out \"" + dir("b") + "\"");
  expect_ok("run " + scenario + " --seed 4 --out \"" + dir("c") + "\"");
  expect_ok("run " + scenario + " --seed 3 --epsilon 0 --out \"" + dir("d") + "\"");
  expect_ok("run " + scenario + " --seed 3 --epsilon 0 --out \"" + dir("e") + "\"");
  expect_ok("run " + scenario + " --seeds 1..4 --out \"" + dir("f") + "\"");
  expect_ok("run " + scenario + " --seeds 1..4 --out \"" + dir("g") + "\"");

  int compared = 0;
  auto same = [&](const std::string& x, const std::string& y, const std::string& file) {
    const std::string a = read_file(root / x / file);
    const std::string b = read_file(root / y / file);
    ++compared;
    if (a.empty() || a != b) problems.push_back(file + " differs between " + x + " and " + y);
  };
  for (const auto& [x, y] : std::vector<std::pair<std::string, std::string>>{{"a", "b"}, {"d", "e"}}) {
    same(x, y, "trajectory.csv");
    same(x, y, "summary.csv");
    ++compared;
    if (without_elapsed(read_file(root / x / "meta.txt")) != without_elapsed(read_file(root / y / "meta.txt"))) {
      problems.push_back("meta.txt differs between " + x + " and " + y);
    }
  }
  same("f", "g", "aggregate.csv");
  same("f", "g", "aggregate_summary.csv");
  if (read_file(root / "a" / "trajectory.csv") == read_file(root / "c" / "trajectory.csv")) {
    problems.push_back("different seeds produced identical trajectories");
  }
  if (read_file(root / "d" / "meta.txt").find("overrides: seed,epsilon") == std::string::npos) {
    problems.push_back("epsilon override missing from meta.txt");
  }

  int reports = 0;
  for (const char* name : {"a", "c", "d"}) {
    const std::string out = expect_ok("report \"" + dir(name) + "\"");
    ++reports;
    if (out != read_file(root / name / "summary.csv")) problems.push_back(std::string("report differs for ") + name);
  }

  // BIBS on the emitted trajectories.
  for (const char* name : {"a", "c", "d"}) {
    const Table t = parse_csv(read_file(root / name / "trajectory.csv"));
    const std::size_t y = t.column("y_norm"), b = t.column("norm_bound_n");
    ++bibs.runs;
    for (const auto& row : t.rows) {
      ++bibs.steps;
      if (!(row[y] <= row[b] + 1e-9)) ++bibs.violations;
    }
  }

  std::string detail = std::to_string(compared) + " file comparisons, " + std::to_string(reports) + " report checks";
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  BibsTally bibs;
  TrackingRuns tracking;

  results.push_back(timed(1, 60, criterion_projection_oracles));
  results.push_back(timed(2, 10, criterion_nonexpansive));
  results.push_back(timed(3, 5, criterion_gradients));
  results.push_back(timed(4, 120, [&] { return criterion_bound(tracking, bibs); }));
  results.push_back(timed(5, 60, [&] { return criterion_vanishing_variability(bibs); }));
  results.push_back(timed(6, 180, [&] { return criterion_randomized(bibs); }));
  results.push_back(timed(8, 0, [&] { return criterion_voltage(tracking); }));
  results.push_back(timed(9, 0, [&] { return criterion_ogd(bibs); }));
  results.push_back(timed(10, 0, [&] { return criterion_determinism(bibs); }));
  results.push_back(timed(7, 0, [&] {
    return Outcome{bibs.violations == 0 && bibs.steps > 0,
                   std::to_string(bibs.runs) + " runs, " + std::to_string(bibs.steps) + " steps, " +
                       std::to_string(bibs.violations) + " violations of |y_n| <= B"};
  }));
  std::sort(results.begin(), results.end(), [](const Criterion& a, const Criterion& b) { return a.id < b.id; });

  bool all = true;
  for (const auto& c : results) {
    const bool in_time = c.limit_seconds <= 0.0 || c.seconds < c.limit_seconds;
    const bool pass = c.outcome.pass && in_time;
    all = all && pass;
    std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << " | " << c.outcome.detail << " | "
              << fmt(c.seconds, 3) << " s";
    if (c.limit_seconds > 0.0) std::cout << " (limit " << fmt(c.limit_seconds) << " s)";
    std::cout << "\n";
  }
  std::cout << (all ? "all criteria passed" : "some criteria failed") << std::endl;
  return all ? 0 : 1;
}
