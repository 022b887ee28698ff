#include "mspcguard/scenario.hpp"

#include <nlohmann/json.hpp>

#include "mspcguard/errors.hpp"

namespace mspcguard {

void DisturbanceSpec::validate() const {
  if (start_h < 0.0) throw InputFault("disturbance start must be >= 0");
  if (magnitude < 0.0 || magnitude >= 1.0) {
    throw InputFault("feed loss magnitude must be in [0,1)");
  }
}

DisturbanceSpec DisturbanceSpec::from_json(const nlohmann::json& j) {
  DisturbanceSpec d;
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "feed_a_loss") throw InputFault("unknown disturbance kind: " + kind);
  d.kind = DisturbanceKind::FeedALoss;
  d.magnitude = j.value("magnitude", 0.0);
  d.start_h = j.at("start_h").get<double>();
  d.validate();
  return d;
}

nlohmann::json DisturbanceSpec::to_json() const {
  return nlohmann::json{
      {"kind", "feed_a_loss"},
      {"magnitude", magnitude},
      {"start_h", start_h},
  };
}

void ScenarioConfig::validate() const {
  if (!(duration_h > 0.0)) throw InputFault("duration must be > 0");
  if (!(onset_h < duration_h)) throw InputFault("onset must be before run end");
  for (const auto& d : disturbances) d.validate();
  for (const auto& a : attacks) a.validate(duration_h);
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  c.duration_h = j.value("duration_h", c.duration_h);
  c.seed = j.value("seed", c.seed);
  c.onset_h = j.value("onset_h", c.onset_h);
  if (j.contains("disturbances")) {
    for (const auto& dj : j.at("disturbances")) {
      c.disturbances.push_back(DisturbanceSpec::from_json(dj));
    }
  }
  if (j.contains("attacks")) {
    for (const auto& aj : j.at("attacks")) {
      c.attacks.push_back(AttackSpec::from_json(aj));
    }
  }
  c.validate();
  return c;
}

nlohmann::json ScenarioConfig::to_json() const {
  nlohmann::json dists = nlohmann::json::array();
  for (const auto& d : disturbances) dists.push_back(d.to_json());
  nlohmann::json atks = nlohmann::json::array();
  for (const auto& a : attacks) atks.push_back(a.to_json());
  return nlohmann::json{
      {"duration_h", duration_h},
      {"seed", seed},
      {"onset_h", onset_h},
      {"disturbances", dists},
      {"attacks", atks},
  };
}

}  // namespace mspcguard
