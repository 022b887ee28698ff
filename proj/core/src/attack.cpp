#include "mspcguard/attack.hpp"

#include <nlohmann/json.hpp>

#include "mspcguard/errors.hpp"

namespace mspcguard {

void AttackSpec::validate(double duration_h) const {
  if (target.empty()) throw InputFault("attack target must name a channel");
  if (start_h < 0.0) throw InputFault("attack start_h must be >= 0");
  if (end_h) {
    if (!(*end_h > start_h)) throw InputFault("attack window must satisfy start_h < end_h");
    if (*end_h > duration_h) throw InputFault("attack window extends past run end");
  }
  if (start_h >= duration_h) throw InputFault("attack starts after run end");
}

std::string to_string(AttackKind kind) {
  return kind == AttackKind::Integrity ? "integrity" : "dos";
}

std::string to_string(Direction direction) {
  return direction == Direction::ToController ? "to_controller" : "to_actuator";
}

AttackSpec AttackSpec::from_json(const nlohmann::json& j) {
  AttackSpec spec;
  spec.target = j.at("target").get<std::string>();
  const auto dir = j.at("direction").get<std::string>();
  if (dir == "to_controller") {
    spec.direction = Direction::ToController;
  } else if (dir == "to_actuator") {
    spec.direction = Direction::ToActuator;
  } else {
    throw InputFault("unknown attack direction: " + dir);
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "integrity") {
    spec.kind = AttackKind::Integrity;
    spec.value = j.at("value").get<double>();
  } else if (kind == "dos") {
    spec.kind = AttackKind::DoS;
  } else {
    throw InputFault("unknown attack kind: " + kind);
  }
  spec.start_h = j.at("start_h").get<double>();
  if (j.contains("end_h") && !j.at("end_h").is_null()) {
    spec.end_h = j.at("end_h").get<double>();
  }
  return spec;
}

nlohmann::json AttackSpec::to_json() const {
  nlohmann::json j{
      {"target", target},
      {"direction", to_string(direction)},
      {"kind", to_string(kind)},
      {"start_h", start_h},
  };
  if (kind == AttackKind::Integrity) j["value"] = value;
  if (end_h) j["end_h"] = *end_h;
  return j;
}

double Channel::transmit(double value, double t_h) {
  if (!attack_ || !attack_->active_at(t_h)) {
    last_clean_ = value;
    return value;
  }
  if (attack_->kind == AttackKind::Integrity) {
    return attack_->value;
  }
  // DoS: replay the last sample transmitted strictly before the window. A
  // channel that was never live holds 0.
  return last_clean_.value_or(0.0);
}

}  // namespace mspcguard
