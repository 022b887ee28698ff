#include "mspcguard/plant.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "mspcguard/errors.hpp"

namespace mspcguard {

namespace {
constexpr double kEpsVolume = 1e-6;  // m^3 floor, keeps frac ODE finite at empty tank
}

std::array<double, kNumSensors> PlantParams::sensor_noise_abs() const {
  std::array<double, kNumSensors> abs{};
  for (std::size_t i = 0; i < kNumSensors; ++i) {
    abs[i] = sensor_noise_sigma[i] * kNominalSensors[i];
  }
  return abs;
}

void PlantParams::validate() const {
  if (!(tank_area > 0.0) || !(k_feed_a > 0.0) || !(k_feed_b > 0.0) || !(k_out > 0.0)) {
    throw InputFault("plant coefficients must be strictly positive");
  }
  if (!(step_size > 0.0)) throw InputFault("step_size must be > 0");
  for (double s : sensor_noise_sigma) {
    if (s < 0.0) throw InputFault("sensor_noise_sigma must be >= 0");
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (load_sigma[i] < 0.0) throw InputFault("load_sigma must be >= 0");
    if (!(load_tau_s[i] > 0.0)) throw InputFault("load_tau_s must be > 0");
  }
}

void PlantState::validate() const {
  if (level < 0.0) throw InputFault("level must be >= 0");
  if (frac_a < 0.0 || frac_a > 1.0) throw InputFault("frac_a must be in [0,1]");
  if (feed_avail_a < 0.0 || feed_avail_a > 1.0) {
    throw InputFault("feed_avail_a must be in [0,1]");
  }
}

PlantParams PlantParams::from_json(const nlohmann::json& j) {
  PlantParams p;
  p.tank_area = j.value("tank_area", p.tank_area);
  p.k_feed_a = j.value("k_feed_a", p.k_feed_a);
  p.k_feed_b = j.value("k_feed_b", p.k_feed_b);
  p.k_out = j.value("k_out", p.k_out);
  p.step_size = j.value("step_size_s", p.step_size);
  if (j.contains("sensor_noise_sigma")) {
    const auto& arr = j.at("sensor_noise_sigma");
    if (arr.is_number()) {
      p.sensor_noise_sigma.fill(arr.get<double>());
    } else {
      for (std::size_t i = 0; i < kNumSensors; ++i) p.sensor_noise_sigma[i] = arr.at(i).get<double>();
    }
  }
  if (j.contains("load_sigma")) {
    for (std::size_t i = 0; i < 3; ++i) p.load_sigma[i] = j.at("load_sigma").at(i).get<double>();
  }
  if (j.contains("load_tau_s")) {
    for (std::size_t i = 0; i < 3; ++i) p.load_tau_s[i] = j.at("load_tau_s").at(i).get<double>();
  }
  p.validate();
  return p;
}

nlohmann::json PlantParams::to_json() const {
  return nlohmann::json{
      {"tank_area", tank_area},
      {"k_feed_a", k_feed_a},
      {"k_feed_b", k_feed_b},
      {"k_out", k_out},
      {"step_size_s", step_size},
      {"sensor_noise_sigma", sensor_noise_sigma},
      {"load_sigma", load_sigma},
      {"load_tau_s", load_tau_s},
  };
}

std::array<double, kNumSensors> measure(const PlantState& state,
                                        const std::array<double, kNumActuators>& applied,
                                        const PlantParams& params) {
  const double flow_a =
      params.k_feed_a * applied[0] * state.feed_avail_a * state.load[0];
  const double flow_b = params.k_feed_b * applied[1] * state.load[1];
  const double flow_out =
      params.k_out * applied[2] * std::sqrt(std::max(state.level, 0.0)) * state.load[2];
  return {flow_a, flow_b, state.level, state.frac_a, flow_out};
}

PlantStepResult plant_step(const PlantState& state,
                           const std::array<double, kNumActuators>& applied,
                           const PlantParams& params,
                           std::span<const double> noise_draws) {
  if (noise_draws.size() < kNoiseDrawsPerStep) {
    throw InputFault("plant_step needs 8 noise draws per step");
  }
  for (double u : applied) {
    if (!(u >= 0.0 && u <= 1.0)) throw InputFault("valve openings must be in [0,1]");
  }

  const double h = params.step_size / 3600.0;  // hours
  const double flow_a =
      params.k_feed_a * applied[0] * state.feed_avail_a * state.load[0];
  const double flow_b = params.k_feed_b * applied[1] * state.load[1];
  const double flow_out =
      params.k_out * applied[2] * std::sqrt(std::max(state.level, 0.0)) * state.load[2];

  PlantState next = state;
  next.level = state.level + (flow_a + flow_b - flow_out) * h / params.tank_area;
  const double volume = std::max(params.tank_area * state.level, kEpsVolume);
  next.frac_a =
      state.frac_a + (flow_a * (1.0 - state.frac_a) - flow_b * state.frac_a) * h / volume;
  next.level = std::max(next.level, 0.0);
  next.frac_a = std::clamp(next.frac_a, 0.0, 1.0);

  // AR(1) load factors, parameterized by stationary sigma and time constant.
  for (std::size_t i = 0; i < 3; ++i) {
    if (params.load_sigma[i] > 0.0) {
      const double rho = std::exp(-params.step_size / params.load_tau_s[i]);
      const double inno = params.load_sigma[i] * std::sqrt(1.0 - rho * rho);
      double load = 1.0 + rho * (state.load[i] - 1.0) + inno * noise_draws[kNumSensors + i];
      next.load[i] = std::clamp(load, 0.5, 1.5);
    }
  }

  if (!std::isfinite(next.level) || !std::isfinite(next.frac_a)) {
    throw SimulationFault("plant state became non-finite");
  }

  const auto noise_abs = params.sensor_noise_abs();
  PlantStepResult result;
  result.state = next;
  result.sensors = {flow_a + noise_abs[0] * noise_draws[0],
                    flow_b + noise_abs[1] * noise_draws[1],
                    next.level + noise_abs[2] * noise_draws[2],
                    next.frac_a + noise_abs[3] * noise_draws[3],
                    flow_out + noise_abs[4] * noise_draws[4]};
  return result;
}

}  // namespace mspcguard
