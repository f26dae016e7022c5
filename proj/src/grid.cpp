#include "ogc/grid.hpp"

#include <cmath>
#include <memory>

namespace ogc {

DecisionLayout make_layout(std::span<const Device> devices) {
  require(!devices.empty(), ErrorCode::InvalidArgument, "layout needs at least one device");
  DecisionLayout layout;
  int offset = 0;
  for (std::size_t j = 0; j < devices.size(); ++j) {
    DeviceSlot slot;
    slot.kind = device_kind(devices[j]);
    slot.decision = {offset, decision_width(slot.kind)};
    slot.power_offset = static_cast<int>(2 * j);
    if (const auto* hvac = std::get_if<HvacDevice>(&devices[j])) slot.hvac_p_max = hvac->p_max;
    offset += slot.decision.length;
    layout.slots.push_back(slot);
  }
  layout.decision_dim = offset;
  layout.power_dim = static_cast<int>(2 * devices.size());
  layout.to_power = Matrix::Zero(layout.power_dim, layout.decision_dim);
  for (const auto& slot : layout.slots) {
    if (slot.kind == DeviceKind::Hvac) {
      layout.to_power(slot.power_offset, slot.decision.offset) = -slot.hvac_p_max;
    } else {
      layout.to_power(slot.power_offset, slot.decision.offset) = 1.0;
      layout.to_power(slot.power_offset + 1, slot.decision.offset + 1) = 1.0;
    }
  }
  return layout;
}

void validate_grid(const GridModel& model, const DecisionLayout& layout, int horizon) {
  const Eigen::Index nodes = static_cast<Eigen::Index>(layout.slots.size());
  const Eigen::Index pdim = layout.power_dim;
  require(model.v_min < model.v_max, ErrorCode::SchemaError, "grid.v_min must be < grid.v_max");
  auto covers = [&](bool ok, const char* name) {
    require(ok, ErrorCode::SeriesLengthError, std::string("grid.") + name + " does not cover the horizon");
  };
  covers(model.voltage_matrix.covers(horizon), "voltage_matrix");
  covers(model.voltage_offset.covers(horizon), "voltage_offset");
  covers(model.substation_weights.covers(horizon), "substation_weights");
  covers(model.substation_offset.covers(horizon), "substation_offset");
  covers(model.tracking_signal.covers(horizon), "tracking_signal");
  for (const auto& m : model.voltage_matrix.values()) {
    require(m.rows() == nodes && m.cols() == pdim, ErrorCode::DimensionMismatch,
            "grid.voltage_matrix must be " + std::to_string(nodes) + " x " + std::to_string(pdim));
    require(m.allFinite(), ErrorCode::SchemaError, "grid.voltage_matrix must be finite");
  }
  for (const auto& v : model.voltage_offset.values()) {
    require(v.size() == nodes, ErrorCode::DimensionMismatch,
            "grid.voltage_offset must have " + std::to_string(nodes) + " entries");
  }
  for (const auto& v : model.substation_weights.values()) {
    require(v.size() == pdim, ErrorCode::DimensionMismatch,
            "grid.substation_weights must have " + std::to_string(pdim) + " entries");
  }
  if (model.device_weights.size() != 0) {
    require(model.device_weights.size() == nodes, ErrorCode::DimensionMismatch,
            "grid.device_weights must have one entry per device");
    require((model.device_weights.array() >= 0.0).all(), ErrorCode::SchemaError,
            "grid.device_weights must be >= 0");
  }
}

Vector voltages_from_power(const GridModel& model, const Vector& power, int step) {
  const Matrix& a = model.voltage_matrix.at(step);
  require(power.size() == a.cols(), ErrorCode::DimensionMismatch,
          "power vector does not match the voltage matrix");
  return a * power + model.voltage_offset.at(step);
}

Vector voltages(const GridModel& model, const DecisionLayout& layout, const Vector& decision,
                int step) {
  require(decision.size() == layout.decision_dim, ErrorCode::DimensionMismatch,
          "decision vector does not match the layout");
  return voltages_from_power(model, layout.to_power * decision, step);
}

double substation_power_from_power(const GridModel& model, const Vector& power, int step) {
  const Vector& w = model.substation_weights.at(step);
  require(power.size() == w.size(), ErrorCode::DimensionMismatch,
          "power vector does not match the substation weights");
  return w.dot(power) + model.substation_offset.at(step);
}

double substation_power(const GridModel& model, const DecisionLayout& layout, const Vector& decision,
                        int step) {
  require(decision.size() == layout.decision_dim, ErrorCode::DimensionMismatch,
          "decision vector does not match the layout");
  return substation_power_from_power(model, layout.to_power * decision, step);
}

double device_weight(const GridModel& model, std::size_t device_index, std::size_t device_count) {
  if (model.device_weights.size() == 0) return 1.0 / static_cast<double>(device_count);
  return model.device_weights(static_cast<Eigen::Index>(device_index));
}

namespace {

void check_advertisements(const DecisionLayout& layout, std::span<const Advertisement> ads) {
  if (ads.size() != layout.slots.size()) {
    fail(ErrorCode::MissingAdvertisement, "expected " + std::to_string(layout.slots.size()) +
                                              " advertisements, got " + std::to_string(ads.size()));
  }
  for (std::size_t j = 0; j < ads.size(); ++j) {
    if (ads[j].device_id != static_cast<int>(j)) {
      fail(ErrorCode::MissingAdvertisement, "no advertisement for device " + std::to_string(j));
    }
    require(ads[j].feasible.dimension() == layout.slots[j].decision.length &&
                ads[j].cost.dimension() == layout.slots[j].decision.length,
            ErrorCode::DimensionMismatch,
            "advertisement of device " + std::to_string(j) + " does not match its decision block");
  }
}

}  // namespace

CostFunction build_objective(const GridModel& model, const DecisionLayout& layout,
                             std::span<const Advertisement> advertisements, int step) {
  check_advertisements(layout, advertisements);
  std::vector<WeightedSum::Term> terms;
  terms.reserve(advertisements.size() + 1);
  for (std::size_t j = 0; j < advertisements.size(); ++j) {
    terms.push_back({device_weight(model, j, advertisements.size()),
                     std::make_shared<const CostFunction>(advertisements[j].cost),
                     layout.slots[j].decision});
  }
  // Tracking term composed with the decision-to-power map.
  const Vector weights = layout.to_power.transpose() * model.substation_weights.at(step);
  terms.push_back({1.0,
                   std::make_shared<const CostFunction>(CostFunction::quadratic_tracking(
                       weights, model.substation_offset.at(step), model.tracking_signal.at(step))),
                   Slice{0, layout.decision_dim}});
  return CostFunction::weighted_sum(std::move(terms), layout.decision_dim);
}

FeasibleSet build_feasible_set(const GridModel& model, const DecisionLayout& layout,
                               std::span<const Advertisement> advertisements, int step) {
  check_advertisements(layout, advertisements);
  std::vector<FeasibleSet> factors;
  factors.reserve(advertisements.size());
  for (const auto& ad : advertisements) factors.push_back(ad.feasible);
  const Matrix band_matrix = model.voltage_matrix.at(step) * layout.to_power;
  const Eigen::Index rows = band_matrix.rows();
  std::vector<FeasibleSet> members;
  members.push_back(FeasibleSet::product(std::move(factors)));
  members.push_back(FeasibleSet::halfspace_band(band_matrix, model.voltage_offset.at(step),
                                                Vector::Constant(rows, model.v_min),
                                                Vector::Constant(rows, model.v_max)));
  return FeasibleSet::intersection(std::move(members));
}

}  // namespace ogc
