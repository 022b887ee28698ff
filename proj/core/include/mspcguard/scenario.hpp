#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mspcguard/attack.hpp"

namespace mspcguard {

enum class DisturbanceKind { FeedALoss };

/// A physical (non-malicious) upset: feed A availability drops to `magnitude`
/// at `start_h` and stays there.
struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::FeedALoss;
  double magnitude = 0.0;  // target feed_avail_a in [0,1)
  double start_h = 0.0;

  void validate() const;
  static DisturbanceSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct ScenarioConfig {
  double duration_h = 24.0;
  std::uint64_t seed = 1;
  double onset_h = 10.0;  // anomaly start, informational for ARL
  std::vector<DisturbanceSpec> disturbances;
  std::vector<AttackSpec> attacks;

  void validate() const;
  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

}  // namespace mspcguard
