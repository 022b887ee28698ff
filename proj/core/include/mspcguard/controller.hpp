#pragma once

#include <array>

#include <nlohmann/json_fwd.hpp>

#include "mspcguard/plant.hpp"

namespace mspcguard {

/// Positional PI, out = clamp(kp*e + (kp/ti) * integral(e dt)), with
/// conditional anti-windup: the integral freezes while the output is clamped.
/// action = -1 flips the error for direct-acting loops (output raises the
/// measurement downward, like an outflow valve holding a level).
struct PiController {
  double kp = 1.0;
  double ti = 100.0;  // s
  double setpoint = 0.0;
  double integral_state = 0.0;
  double out_lo = 0.0;
  double out_hi = 1.0;
  double action = 1.0;

  /// Seed integral_state so the output equals `output` at zero error.
  void preload_output(double output) { integral_state = output * ti / kp; }

  double step(double measurement, double dt);
};

/// Gains and setpoints of the three-loop cascade.
struct ControlConfig {
  // L1: composition, reads (filtered) frac_a, output is the feed-A flow
  // setpoint as a fraction of k_feed_a.
  double comp_kp = 2.25;
  double comp_ti = 1200.0;
  double frac_setpoint = kFracSetpoint;
  double frac_filter_tau = 300.0;  // s, first-order filter on the analyzer
  // L2: feed-A flow, commands u_a.
  double flow_kp = 0.1;
  double flow_ti = 30.0;
  // L3: level, commands u_out (direct-acting).
  double level_kp = 2.0;
  double level_ti = 1800.0;
  double level_setpoint = kLevelSetpoint;
  double u_b = kNominalFeedB;  // feed-B valve held at a fixed opening

  static ControlConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Runtime state of the cascade. Integral states are preloaded so the bank
/// starts out holding the design operating point.
class ControllerBank {
 public:
  explicit ControllerBank(const ControlConfig& config, const PlantParams& params);

  /// Reads the five received sensor values, advances the three loops, returns
  /// the commanded valve openings [u_a, u_b, u_out].
  std::array<double, kNumActuators> step(const std::array<double, kNumSensors>& sensors,
                                         double dt);

  const PiController& composition_loop() const { return comp_; }
  const PiController& flow_loop() const { return flow_; }
  const PiController& level_loop() const { return level_; }

 private:
  PiController comp_;
  PiController flow_;
  PiController level_;
  double k_feed_a_;
  double u_b_;
  double frac_filt_;
  double frac_filter_tau_;
};

}  // namespace mspcguard
