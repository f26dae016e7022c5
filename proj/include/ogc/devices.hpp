#pragma once

#include <random>
#include <utility>
#include <variant>

#include "ogc/cost.hpp"
#include "ogc/geometry.hpp"
#include "ogc/series.hpp"

namespace ogc {

// Positive power is production, negative power is consumption (per-unit).

struct PvDevice {
  double s_rated = 1.0;
  Series<double> available_power;
  double c1 = 0.0;
  double c2 = 0.0;
};

// Power limits as functions of state of charge. Production (discharge) tapers
// linearly to zero over the last taper_band of charge, consumption (charge)
// likewise as the battery fills.
struct BatteryLimits {
  double p_min = -1.0;
  double p_max = 1.0;
  double taper_band = 0.05;

  double p_min_at(double soc) const;
  double p_max_at(double soc) const;
};

struct BatteryDevice {
  double s_rated = 1.0;
  double soc = 0.5;
  double soc_target = 0.5;
  double capacity_energy = 1.0;  // per-unit hours
  double step_duration = 1.0;    // hours
  BatteryLimits limits;
  double c1 = 0.0;
  double c2 = 0.0;
};

// ON/OFF load with minimum dwell times. After a switch the device is locked
// in its new state for min_on_steps (or min_off_steps) subsequent steps.
struct HvacDevice {
  double p_max = 1.0;
  bool locked = false;
  bool last_on = false;
  int min_on_steps = 0;
  int min_off_steps = 0;
  int dwell_counter = 0;
  Series<double> cost_on;
  Series<double> cost_off;
};

using Device = std::variant<PvDevice, BatteryDevice, HvacDevice>;

enum class DeviceKind { Pv, Battery, Hvac };

DeviceKind device_kind(const Device& device) noexcept;
const char* device_kind_name(DeviceKind kind) noexcept;

// Dimension of the device's block in the central controller's decision vector.
int decision_width(DeviceKind kind) noexcept;

struct Advertisement {
  FeasibleSet feasible;
  CostFunction cost;
  int device_id = 0;
  int valid_for_step = 0;
};

// The local feasible set the device will implement into at `step`. For the
// HVAC device this is the simplex form (scalar probability of ON).
FeasibleSet local_set(const Device& device, int step);

Advertisement pv_advertise(const PvDevice& device, int step, int device_id = 0);
Advertisement battery_advertise(const BatteryDevice& device, int step, int device_id = 0);
Advertisement hvac_advertise(const HvacDevice& device, int step, int device_id = 0);
Advertisement advertise(const Device& device, int step, int device_id);

BatteryDevice battery_soc_update(BatteryDevice device, double implemented_p);

struct HvacStep {
  bool realized_on = false;
  double simplex_point = 0.0;
  HvacDevice device;
};

HvacStep hvac_implement(const HvacDevice& device, double requested_y, std::mt19937_64& rng);

// Lock/dwell bookkeeping after the device has run in state `on` for one step.
HvacDevice hvac_transition(HvacDevice device, bool on);

struct PowerPoint {
  double p = 0.0;
  double q = 0.0;
};

// Physical (P, Q) of a realized control. HVAC controls are 1.0 (ON) or 0.0 (OFF).
PowerPoint realized_power(const Device& device, const Vector& control);

// Realized cost of the HVAC device at `step` for the realized state.
double hvac_realized_cost(const HvacDevice& device, int step, bool on);

}  // namespace ogc
