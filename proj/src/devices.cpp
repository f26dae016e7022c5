#include "ogc/devices.hpp"

#include <algorithm>
#include <cmath>

namespace ogc {

double BatteryLimits::p_min_at(double soc) const {
  if (p_min >= 0.0 || taper_band <= 0.0) return p_min;
  return p_min * std::clamp((1.0 - soc) / taper_band, 0.0, 1.0);
}

double BatteryLimits::p_max_at(double soc) const {
  if (p_max <= 0.0 || taper_band <= 0.0) return p_max;
  return p_max * std::clamp(soc / taper_band, 0.0, 1.0);
}

DeviceKind device_kind(const Device& device) noexcept {
  switch (device.index()) {
    case 0: return DeviceKind::Pv;
    case 1: return DeviceKind::Battery;
    default: return DeviceKind::Hvac;
  }
}

const char* device_kind_name(DeviceKind kind) noexcept {
  switch (kind) {
    case DeviceKind::Pv: return "pv";
    case DeviceKind::Battery: return "battery";
    case DeviceKind::Hvac: return "hvac";
  }
  return "unknown";
}

int decision_width(DeviceKind kind) noexcept { return kind == DeviceKind::Hvac ? 1 : 2; }

namespace {

FeasibleSet pv_set(const PvDevice& d, int step) {
  const double available = d.available_power.at(step);
  return FeasibleSet::inverter_disk(std::min(std::max(available, 0.0), d.s_rated), d.s_rated);
}

FeasibleSet battery_set(const BatteryDevice& d) {
  const double lo = d.limits.p_min_at(d.soc);
  const double hi = d.limits.p_max_at(d.soc);
  if (lo > hi || hi < -d.s_rated || lo > d.s_rated) {
    fail(ErrorCode::InfeasibleLimits, "battery power interval [" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "] at soc " +
                                          std::to_string(d.soc) + " misses [-s, s]");
  }
  return FeasibleSet::inverter_disk(lo, hi, d.s_rated);
}

FeasibleSet hvac_set(const HvacDevice& d) {
  if (d.locked) return FeasibleSet::singleton(d.last_on ? 1.0 : 0.0);
  return FeasibleSet::interval(0.0, 1.0);
}

}  // namespace

FeasibleSet local_set(const Device& device, int step) {
  switch (device_kind(device)) {
    case DeviceKind::Pv: return pv_set(std::get<PvDevice>(device), step);
    case DeviceKind::Battery: return battery_set(std::get<BatteryDevice>(device));
    case DeviceKind::Hvac: return hvac_set(std::get<HvacDevice>(device));
  }
  fail(ErrorCode::InvalidArgument, "unknown device kind");
}

Advertisement pv_advertise(const PvDevice& device, int step, int device_id) {
  return Advertisement{pv_set(device, step),
                       CostFunction::linear_quadratic_pq(device.c1, device.c2, -1), device_id,
                       step + 1};
}

Advertisement battery_advertise(const BatteryDevice& device, int step, int device_id) {
  require(device.soc >= 0.0 && device.soc <= 1.0, ErrorCode::InvalidArgument,
          "battery soc must lie in [0, 1]");
  // Above target: encourage production. Below: encourage consumption. At
  // target: reactive penalty only.
  double c1 = device.c1;
  int sign = 1;
  if (device.soc > device.soc_target) {
    sign = -1;
  } else if (device.soc == device.soc_target) {
    c1 = 0.0;
  }
  return Advertisement{battery_set(device), CostFunction::linear_quadratic_pq(c1, device.c2, sign),
                       device_id, step + 1};
}

Advertisement hvac_advertise(const HvacDevice& device, int step, int device_id) {
  return Advertisement{hvac_set(device),
                       CostFunction::expected_binary(device.cost_off.at(step), device.cost_on.at(step)),
                       device_id, step + 1};
}

Advertisement advertise(const Device& device, int step, int device_id) {
  return std::visit(
      [&](const auto& d) -> Advertisement {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PvDevice>) return pv_advertise(d, step, device_id);
        else if constexpr (std::is_same_v<T, BatteryDevice>) return battery_advertise(d, step, device_id);
        else return hvac_advertise(d, step, device_id);
      },
      device);
}

BatteryDevice battery_soc_update(BatteryDevice device, double implemented_p) {
  device.soc = std::clamp(
      device.soc - implemented_p * device.step_duration / device.capacity_energy, 0.0, 1.0);
  return device;
}

HvacDevice hvac_transition(HvacDevice device, bool on) {
  if (device.locked) {
    device.dwell_counter = std::max(0, device.dwell_counter - 1);
    if (device.dwell_counter == 0) device.locked = false;
  } else if (on != device.last_on) {
    device.dwell_counter = on ? device.min_on_steps : device.min_off_steps;
    device.locked = device.dwell_counter > 0;
  }
  device.last_on = on;
  return device;
}

HvacStep hvac_implement(const HvacDevice& device, double requested_y, std::mt19937_64& rng) {
  HvacStep out;
  out.simplex_point = project(hvac_set(device), Vector::Constant(1, requested_y))(0);
  if (device.locked) {
    out.realized_on = device.last_on;
  } else {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    out.realized_on = uniform(rng) < out.simplex_point;
  }
  out.device = hvac_transition(device, out.realized_on);
  return out;
}

PowerPoint realized_power(const Device& device, const Vector& control) {
  if (const auto* hvac = std::get_if<HvacDevice>(&device)) {
    require(control.size() == 1, ErrorCode::DimensionMismatch, "HVAC control must be scalar");
    return control(0) >= 0.5 ? PowerPoint{-hvac->p_max, 0.0} : PowerPoint{0.0, 0.0};
  }
  require(control.size() == 2, ErrorCode::DimensionMismatch, "inverter control must be (P, Q)");
  return {control(0), control(1)};
}

double hvac_realized_cost(const HvacDevice& device, int step, bool on) {
  return on ? device.cost_on.at(step) : device.cost_off.at(step);
}

}  // namespace ogc
