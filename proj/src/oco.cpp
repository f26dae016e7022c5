#include "ogc/oco.hpp"

#include <cmath>

namespace ogc {

Vector cc_update(const Vector& measured, const CostFunction& objective, const FeasibleSet& feasible,
                 double step_size, const ProjectionOptions& options) {
  require(step_size > 0.0 && std::isfinite(step_size), ErrorCode::InvalidArgument,
          "step size must be finite and > 0");
  require(measured.size() == feasible.dimension(), ErrorCode::DimensionMismatch,
          "measured setpoint does not match the feasible set dimension");
  const Vector g = gradient(objective, measured);
  if (!g.allFinite()) fail(ErrorCode::GradientNotFinite, "objective gradient has non-finite entries");
  return project(feasible, measured - step_size * g, options);
}

Vector lc_implement(const Vector& requested, const FeasibleSet& local_set,
                    const ProjectionOptions& options) {
  return project(local_set, requested, options);
}

Vector comparator_step(const CostFunction& objective, const FeasibleSet& feasible,
                       const ComparatorOptions& options) {
  require(options.tol > 0.0, ErrorCode::InvalidArgument, "comparator tolerance must be > 0");
  const auto& proj = options.projection;
  Vector z = project(feasible, Vector::Zero(feasible.dimension()), proj);
  double step = 1.0;
  double last_mapping = 0.0;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    const double f = evaluate(objective, z);
    const Vector g = gradient(objective, z);
    if (!g.allFinite()) fail(ErrorCode::GradientNotFinite, "objective gradient has non-finite entries");
    Vector next;
    Vector delta;
    for (;;) {
      next = project(feasible, z - step * g, proj);
      delta = next - z;
      const double model = f + g.dot(delta) + delta.squaredNorm() / (2.0 * step);
      if (evaluate(objective, next) <= model + 1e-12 * (1.0 + std::abs(f)) || step < 1e-16) break;
      step *= 0.5;
    }
    last_mapping = delta.norm() / step;
    z = std::move(next);
    if (last_mapping <= options.tol) return z;
    step *= 2.0;
  }
  throw ConvergenceError("comparator did not converge in " + std::to_string(options.max_iter) +
                             " iterations; gradient mapping norm " + std::to_string(last_mapping),
                         std::vector<double>(z.data(), z.data() + z.size()), {last_mapping});
}

RegretAccount accumulate_regret(RegretAccount account, double f_at_y, double f_at_z,
                                const std::optional<Vector>& z_prev, const Vector& z_now) {
  account.rows.push_back({f_at_y, f_at_z});
  account.cumulative_regret += f_at_y - f_at_z;
  if (z_prev) account.cumulative_variability += (z_now - *z_prev).norm();
  ++account.step_count;
  return account;
}

BoundConstants BoundConstants::make(double grad_bound, double lipschitz, double diameter,
                                    double norm_bound, double step_size, double meas_error) {
  for (double v : {grad_bound, lipschitz, diameter, norm_bound, meas_error}) {
    require(std::isfinite(v) && v >= 0.0, ErrorCode::InvalidArgument,
            "bound constants must be finite and >= 0");
  }
  require(std::isfinite(step_size) && step_size > 0.0, ErrorCode::InvalidArgument,
          "step size must be finite and > 0");
  BoundConstants c;
  c.grad_bound = grad_bound;
  c.lipschitz = lipschitz;
  c.diameter = diameter;
  c.norm_bound = norm_bound;
  c.step_size = step_size;
  c.meas_error = meas_error;
  c.k1 = grad_bound * grad_bound / 2.0;
  c.k2 = (2.0 * (diameter + step_size * grad_bound) + (1.0 + step_size * lipschitz) * meas_error) / 2.0;
  c.k3 = diameter + norm_bound;
  return c;
}

double evaluate_bound(const BoundConstants& c, double avg_variability) {
  const double a = c.step_size;
  return c.k1 * a + c.k2 * (1.0 + a * c.lipschitz) * c.meas_error / a + c.k3 * avg_variability / a;
}

double finite_horizon_bound(const BoundConstants& c, double avg_variability, int steps) {
  require(steps > 0, ErrorCode::InvalidArgument, "steps must be > 0");
  return evaluate_bound(c, avg_variability) +
         c.diameter * c.diameter / (2.0 * c.step_size * static_cast<double>(steps));
}

bool check_bibs(const Vector& implemented, double norm_bound) {
  return implemented.norm() <= norm_bound + 1e-9;
}

}  // namespace ogc
