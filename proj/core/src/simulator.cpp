#include "mspcguard/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mspcguard/errors.hpp"
#include "mspcguard/rng.hpp"

namespace mspcguard {

namespace {

std::size_t variable_index(const std::string& name, bool sensor_side) {
  const std::size_t begin = sensor_side ? 0 : kNumSensors;
  const std::size_t end = sensor_side ? kNumSensors : kNumVariables;
  for (std::size_t i = begin; i < end; ++i) {
    if (name == kVariableNames[i]) return sensor_side ? i : i - kNumSensors;
  }
  throw InputFault("attack target '" + name + "' does not name a " +
                   (sensor_side ? std::string("sensor") : std::string("actuator")) +
                   " channel");
}

}  // namespace

ChannelSet ChannelSet::from_attacks(std::span<const AttackSpec> attacks) {
  ChannelSet set;
  for (const auto& spec : attacks) {
    if (spec.direction == Direction::ToController) {
      auto& ch = set.sensor[variable_index(spec.target, true)];
      if (ch.attack()) throw InputFault("duplicate attack on channel " + spec.target);
      ch = Channel(spec);
    } else {
      auto& ch = set.actuator[variable_index(spec.target, false)];
      if (ch.attack()) throw InputFault("duplicate attack on channel " + spec.target);
      ch = Channel(spec);
    }
  }
  return set;
}

RunRecord simulate_run(const ScenarioConfig& scenario, const PlantParams& params,
                       const ControlConfig& control, ChannelSet channels) {
  scenario.validate();
  params.validate();

  const double dt = params.step_size;
  const auto steps = static_cast<std::size_t>(std::llround(scenario.duration_h * 3600.0 / dt));
  if (steps == 0) throw InputFault("run shorter than one step");

  RunRecord rec;
  rec.variable_names.assign(kVariableNames.begin(), kVariableNames.end());
  rec.scenario = scenario;
  rec.params = params;
  rec.control = control;
  rec.times_s.resize(steps);
  rec.controller_view.resize(static_cast<Eigen::Index>(steps), kNumVariables);
  rec.process_view.resize(static_cast<Eigen::Index>(steps), kNumVariables);

  GaussianStream rng(scenario.seed);

  PlantState state;
  state.frac_a = control.frac_setpoint;
  state.level = control.level_setpoint;
  // Load factors start from their stationary distribution so runs are
  // statistically homogeneous from the first sample.
  for (std::size_t i = 0; i < 3; ++i) {
    if (params.load_sigma[i] > 0.0) {
      state.load[i] = std::clamp(1.0 + params.load_sigma[i] * rng.next(), 0.5, 1.5);
    }
  }

  ControllerBank bank(control, params);

  const double u_out0 = std::clamp(
      (kNominalSensors[0] + params.k_feed_b * control.u_b) /
          (params.k_out * std::sqrt(std::max(control.level_setpoint, 1e-12))),
      0.0, 1.0);
  std::array<double, kNumActuators> applied{kNominalFeedA, control.u_b, u_out0};

  auto true_sensors = measure(state, applied, params);
  {
    const auto noise = params.sensor_noise_abs();
    for (std::size_t i = 0; i < kNumSensors; ++i) true_sensors[i] += noise[i] * rng.next();
  }

  std::array<double, kNoiseDrawsPerStep> draws{};
  for (std::size_t k = 0; k < steps; ++k) {
    const double t_s = static_cast<double>(k) * dt;
    const double t_h = t_s / 3600.0;
    rec.times_s[k] = t_s;

    for (const auto& d : scenario.disturbances) {
      if (t_h >= d.start_h) state.feed_avail_a = d.magnitude;
    }

    std::array<double, kNumSensors> received{};
    for (std::size_t i = 0; i < kNumSensors; ++i) {
      received[i] = channels.sensor[i].transmit(true_sensors[i], t_h);
    }

    const auto commanded = bank.step(received, dt);

    std::array<double, kNumActuators> next_applied{};
    for (std::size_t i = 0; i < kNumActuators; ++i) {
      next_applied[i] = channels.actuator[i].transmit(commanded[i], t_h);
    }

    const auto row = static_cast<Eigen::Index>(k);
    for (std::size_t i = 0; i < kNumSensors; ++i) {
      rec.controller_view(row, static_cast<Eigen::Index>(i)) = received[i];
      rec.process_view(row, static_cast<Eigen::Index>(i)) = true_sensors[i];
    }
    for (std::size_t i = 0; i < kNumActuators; ++i) {
      rec.controller_view(row, static_cast<Eigen::Index>(kNumSensors + i)) = commanded[i];
      rec.process_view(row, static_cast<Eigen::Index>(kNumSensors + i)) = next_applied[i];
    }

    applied = next_applied;
    for (auto& d : draws) d = rng.next();
    try {
      auto result = plant_step(state, applied, params, draws);
      state = result.state;
      true_sensors = result.sensors;
    } catch (const SimulationFault& fault) {
      throw SimulationFault(fault.what(), k);
    }
  }
  return rec;
}

RunRecord simulate_run(const ScenarioConfig& scenario, const PlantParams& params,
                       const ControlConfig& control) {
  return simulate_run(scenario, params, control, ChannelSet::from_attacks(scenario.attacks));
}

}  // namespace mspcguard
