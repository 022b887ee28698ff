#include "mspcguard/controller.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace mspcguard {

double PiController::step(double measurement, double dt) {
  const double error = action * (setpoint - measurement);
  const double candidate = integral_state + error * dt;
  const double raw = kp * error + (kp / ti) * candidate;
  if (raw >= out_lo && raw <= out_hi) {
    integral_state = candidate;
    return raw;
  }
  return std::clamp(raw, out_lo, out_hi);
}

ControlConfig ControlConfig::from_json(const nlohmann::json& j) {
  ControlConfig c;
  c.comp_kp = j.value("comp_kp", c.comp_kp);
  c.comp_ti = j.value("comp_ti_s", c.comp_ti);
  c.frac_setpoint = j.value("frac_setpoint", c.frac_setpoint);
  c.frac_filter_tau = j.value("frac_filter_tau_s", c.frac_filter_tau);
  c.flow_kp = j.value("flow_kp", c.flow_kp);
  c.flow_ti = j.value("flow_ti_s", c.flow_ti);
  c.level_kp = j.value("level_kp", c.level_kp);
  c.level_ti = j.value("level_ti_s", c.level_ti);
  c.level_setpoint = j.value("level_setpoint", c.level_setpoint);
  c.u_b = j.value("u_b", c.u_b);
  return c;
}

nlohmann::json ControlConfig::to_json() const {
  return nlohmann::json{
      {"comp_kp", comp_kp},           {"comp_ti_s", comp_ti},
      {"frac_setpoint", frac_setpoint}, {"frac_filter_tau_s", frac_filter_tau},
      {"flow_kp", flow_kp},           {"flow_ti_s", flow_ti},
      {"level_kp", level_kp},         {"level_ti_s", level_ti},
      {"level_setpoint", level_setpoint}, {"u_b", u_b},
  };
}

ControllerBank::ControllerBank(const ControlConfig& config, const PlantParams& params)
    : k_feed_a_(params.k_feed_a),
      u_b_(config.u_b),
      frac_filt_(config.frac_setpoint),
      frac_filter_tau_(config.frac_filter_tau) {
  comp_ = PiController{config.comp_kp, config.comp_ti, config.frac_setpoint};
  flow_ = PiController{config.flow_kp, config.flow_ti, kNominalSensors[0]};
  level_ = PiController{config.level_kp, config.level_ti, config.level_setpoint};
  level_.action = -1.0;  // opening u_out lowers the level

  // Start out holding the design point: nominal feed-A fraction, nominal u_a,
  // and the u_out that balances the nominal inflow at the level setpoint.
  comp_.preload_output(kNominalFeedA);
  flow_.preload_output(kNominalFeedA);
  const double inflow = kNominalSensors[0] + params.k_feed_b * config.u_b;
  const double u_out0 =
      inflow / (params.k_out * std::sqrt(std::max(config.level_setpoint, 1e-12)));
  level_.preload_output(std::clamp(u_out0, 0.0, 1.0));
}

std::array<double, kNumActuators> ControllerBank::step(
    const std::array<double, kNumSensors>& sensors, double dt) {
  // Analyzer loop reads a filtered composition measurement.
  const double alpha = 1.0 - std::exp(-dt / frac_filter_tau_);
  frac_filt_ += alpha * (sensors[3] - frac_filt_);

  const double flow_sp_fraction = comp_.step(frac_filt_, dt);
  flow_.setpoint = flow_sp_fraction * k_feed_a_;
  const double u_a = flow_.step(sensors[0], dt);
  const double u_out = level_.step(sensors[2], dt);
  return {u_a, u_b_, u_out};
}

}  // namespace mspcguard
