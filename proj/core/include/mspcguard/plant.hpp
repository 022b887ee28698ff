#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace mspcguard {

inline constexpr std::size_t kNumSensors = 5;
inline constexpr std::size_t kNumActuators = 3;
inline constexpr std::size_t kNumVariables = kNumSensors + kNumActuators;

/// Recorded variable order: 5 sensors then 3 actuators.
inline constexpr std::array<const char*, kNumVariables> kVariableNames{
    "flow_a", "flow_b", "level", "frac_a", "flow_out", "u_a", "u_b", "u_out"};

/// Design operating point. Sensor noise magnitudes and controller integral
/// preloads are expressed relative to these values.
inline constexpr std::array<double, kNumSensors> kNominalSensors{1.6, 1.6, 2.0, 0.5, 3.2};
inline constexpr double kNominalFeedA = 0.4;   // u_a
inline constexpr double kNominalFeedB = 0.4;   // u_b (held constant)
inline constexpr double kFracSetpoint = 0.5;
inline constexpr double kLevelSetpoint = 2.0;  // m

/// Blending-tank parameters. Feed and outflow coefficients are multiplied by
/// slowly wandering AR(1) load factors (supply pressure / demand variation);
/// load_sigma zero turns that off and leaves the plain deterministic tank.
struct PlantParams {
  double tank_area = 2.0;    // m^2
  double k_feed_a = 4.0;     // m^3/h at full valve opening
  double k_feed_b = 4.0;     // m^3/h
  double k_out = 3.0;        // m^3/h per sqrt(m)
  double step_size = 5.0;    // s
  std::array<double, kNumSensors> sensor_noise_sigma{0.01, 0.01, 0.01, 0.01, 0.01};
  std::array<double, 3> load_sigma{0.0, 0.0, 0.0};      // feed A, feed B, outflow
  std::array<double, 3> load_tau_s{300.0, 3600.0, 300.0};

  /// Absolute per-sensor noise std (sigma fraction times nominal value).
  std::array<double, kNumSensors> sensor_noise_abs() const;

  void validate() const;

  static PlantParams from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Tank state plus the disturbance handle and the three load factors.
struct PlantState {
  double level = kLevelSetpoint;  // m
  double frac_a = kFracSetpoint;  // mass fraction of A
  double feed_avail_a = 1.0;      // 0 = feed A lost
  std::array<double, 3> load{1.0, 1.0, 1.0};

  void validate() const;
};

/// Noise layout consumed per step: 5 sensor draws then 3 load innovations.
inline constexpr std::size_t kNoiseDrawsPerStep = kNumSensors + 3;

struct PlantStepResult {
  PlantState state;
  std::array<double, kNumSensors> sensors;  // flow_a, flow_b, level, frac_a, flow_out
};

/// One explicit-Euler step. Flows are computed from the incoming state and the
/// applied valve openings; level/frac_a are the post-update values. Sensor
/// readings carry Gaussian noise from noise_draws (see kNoiseDrawsPerStep).
/// Throws SimulationFault via the caller's step index when the state goes
/// non-finite.
PlantStepResult plant_step(const PlantState& state,
                           const std::array<double, kNumActuators>& applied,
                           const PlantParams& params,
                           std::span<const double> noise_draws);

/// Noise-free sensor readings for the current state and valve openings; used
/// to prime the loop before the first plant step.
std::array<double, kNumSensors> measure(const PlantState& state,
                                        const std::array<double, kNumActuators>& applied,
                                        const PlantParams& params);

}  // namespace mspcguard
