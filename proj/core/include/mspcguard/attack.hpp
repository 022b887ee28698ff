#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace mspcguard {

enum class AttackKind { Integrity, DoS };

/// Side of the loop the manipulation sits on: sensor readings on their way to
/// the controller, or commands on their way to the actuator.
enum class Direction { ToController, ToActuator };

/// Declarative description of one man-in-the-middle manipulation on a single
/// named channel. An integrity attack replaces transmissions with a constant
/// inside the window; a DoS freezes the channel at the last clean value from
/// start_h on. end_h absent means the attack never ends.
struct AttackSpec {
  std::string target;
  Direction direction = Direction::ToController;
  AttackKind kind = AttackKind::Integrity;
  double value = 0.0;  // integrity replacement value
  double start_h = 0.0;
  std::optional<double> end_h;

  /// Throws InputFault unless 0 <= start_h < end_h <= duration_h.
  void validate(double duration_h) const;

  bool active_at(double t_h) const {
    return t_h >= start_h && (!end_h || t_h <= *end_h);
  }

  static AttackSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

std::string to_string(AttackKind kind);
std::string to_string(Direction direction);

/// One directed transmission line. Remembers the most recent clean value so a
/// DoS can keep replaying it. Calls must have nondecreasing t.
class Channel {
 public:
  Channel() = default;
  explicit Channel(AttackSpec attack) : attack_(std::move(attack)) {}

  /// Returns what the far end receives at time t (hours).
  double transmit(double value, double t_h);

  const std::optional<AttackSpec>& attack() const { return attack_; }

 private:
  std::optional<AttackSpec> attack_;
  std::optional<double> last_clean_;
};

}  // namespace mspcguard
