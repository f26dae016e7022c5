#pragma once

#include <optional>
#include <vector>

#include "ogc/cost.hpp"
#include "ogc/geometry.hpp"

namespace ogc {

// Central-controller update: project(U, measured - step_size * grad F(measured)).
Vector cc_update(const Vector& measured, const CostFunction& objective, const FeasibleSet& feasible,
                 double step_size, const ProjectionOptions& options = {});

// Local-controller implementation: the requested setpoint projected onto the
// device's current feasible set.
Vector lc_implement(const Vector& requested, const FeasibleSet& local_set,
                    const ProjectionOptions& options = {});

struct ComparatorOptions {
  double tol = 1e-6;
  int max_iter = 100000;
  ProjectionOptions projection;
};

// Per-step minimizer of objective over feasible by projected gradient descent
// with backtracking, started at the projection of the origin.
Vector comparator_step(const CostFunction& objective, const FeasibleSet& feasible,
                       const ComparatorOptions& options = {});

struct RegretRow {
  double f_at_y = 0.0;
  double f_at_z = 0.0;
};

struct RegretAccount {
  double cumulative_regret = 0.0;
  double cumulative_variability = 0.0;
  int step_count = 0;
  std::vector<RegretRow> rows;

  double average_regret() const { return step_count ? cumulative_regret / step_count : 0.0; }
  double average_variability() const {
    return step_count ? cumulative_variability / step_count : 0.0;
  }
};

// Appends one step. z_prev is absent on the first step.
RegretAccount accumulate_regret(RegretAccount account, double f_at_y, double f_at_z,
                                const std::optional<Vector>& z_prev, const Vector& z_now);

struct BoundConstants {
  double grad_bound = 0.0;  // F
  double lipschitz = 0.0;   // lambda
  double diameter = 0.0;    // D
  double norm_bound = 0.0;  // B
  double step_size = 0.0;   // alpha
  double meas_error = 0.0;  // epsilon
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;

  static BoundConstants make(double grad_bound, double lipschitz, double diameter,
                             double norm_bound, double step_size, double meas_error);
};

// K1 a + K2 (1 + a lambda) eps / a + K3 avg_variability / a
double evaluate_bound(const BoundConstants& constants, double avg_variability);

// evaluate_bound plus the transient D^2 / (2 a n) that dominates at finite n.
double finite_horizon_bound(const BoundConstants& constants, double avg_variability, int steps);

bool check_bibs(const Vector& implemented, double norm_bound);

}  // namespace ogc
