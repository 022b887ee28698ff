#pragma once

#include <array>
#include <span>

#include "mspcguard/attack.hpp"
#include "mspcguard/controller.hpp"
#include "mspcguard/run_record.hpp"
#include "mspcguard/scenario.hpp"

namespace mspcguard {

/// Per-variable transmission lines for one run: one sensor-direction channel
/// per sensor, one actuator-direction channel per actuator. A channel carries
/// at most one attack; attacks on other directions/variables never touch it.
struct ChannelSet {
  std::array<Channel, kNumSensors> sensor;
  std::array<Channel, kNumActuators> actuator;

  static ChannelSet from_attacks(std::span<const AttackSpec> attacks);
};

/// Runs the closed loop sensor -> sensor channel -> controller -> actuator
/// channel -> plant for duration/step_size steps and records both views of
/// all 8 variables per step. Seeded noise makes the run bit-reproducible.
RunRecord simulate_run(const ScenarioConfig& scenario, const PlantParams& params,
                       const ControlConfig& control, ChannelSet channels);

/// Convenience overload: channels built from scenario.attacks.
RunRecord simulate_run(const ScenarioConfig& scenario, const PlantParams& params,
                       const ControlConfig& control);

}  // namespace mspcguard
