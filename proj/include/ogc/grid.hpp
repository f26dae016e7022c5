#pragma once

#include <span>
#include <vector>

#include "ogc/cost.hpp"
#include "ogc/devices.hpp"
#include "ogc/geometry.hpp"
#include "ogc/series.hpp"

namespace ogc {

// Linearized feeder model. Power space holds (P, Q) per node, node j hosting
// device j:
//   voltages   v = A_n p + a_n
//   substation P0 = w_n . p + b_n
struct GridModel {
  Series<Matrix> voltage_matrix;
  Series<Vector> voltage_offset;
  Series<Vector> substation_weights;
  Series<double> substation_offset;
  Series<double> tracking_signal;
  double v_min = 0.95;
  double v_max = 1.05;
  Vector device_weights;  // empty means 1/J each
};

struct DeviceSlot {
  DeviceKind kind = DeviceKind::Pv;
  Slice decision;
  int power_offset = 0;
  double hvac_p_max = 0.0;
};

// Maps the central controller's decision vector (P, Q for inverters, ON
// probability for HVAC) onto the power space.
struct DecisionLayout {
  std::vector<DeviceSlot> slots;
  int decision_dim = 0;
  int power_dim = 0;
  Matrix to_power;
};

DecisionLayout make_layout(std::span<const Device> devices);

// Throws if any grid series has inconsistent dimensions for this layout or
// does not cover the horizon.
void validate_grid(const GridModel& model, const DecisionLayout& layout, int horizon);

Vector voltages(const GridModel& model, const DecisionLayout& layout, const Vector& decision,
                int step);
Vector voltages_from_power(const GridModel& model, const Vector& power, int step);
double substation_power(const GridModel& model, const DecisionLayout& layout, const Vector& decision,
                        int step);
double substation_power_from_power(const GridModel& model, const Vector& power, int step);

double device_weight(const GridModel& model, std::size_t device_index, std::size_t device_count);

// Weighted advertised device costs plus the substation tracking term.
CostFunction build_objective(const GridModel& model, const DecisionLayout& layout,
                             std::span<const Advertisement> advertisements, int step);

// Product of advertised sets intersected with the voltage band.
FeasibleSet build_feasible_set(const GridModel& model, const DecisionLayout& layout,
                               std::span<const Advertisement> advertisements, int step);

}  // namespace ogc
