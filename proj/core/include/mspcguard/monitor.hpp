#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mspcguard/limits.hpp"
#include "mspcguard/pca.hpp"

namespace mspcguard {

enum class Statistic { D, Q };
enum class View { Controller, Process };

std::string to_string(Statistic s);
std::string to_string(View v);

/// One detection event: the 99% limit was exceeded by three consecutive
/// observations. alarm_t is the third exceedance; the event stays open (no
/// re-alarm) until the statistic sits at or below the limit for three
/// consecutive points.
struct AlarmEvent {
  Statistic statistic = Statistic::D;
  View view = View::Controller;
  double first_exceedance_t = 0.0;  // s
  double alarm_t = 0.0;             // s
};

/// Incremental three-consecutive-rule monitor. Feeding observations one at a
/// time or in chunks yields exactly the same statistics and alarms.
class StreamMonitor {
 public:
  StreamMonitor(const PcaModel& model, const ControlLimits& limits, View view);

  /// Observation over the model's effective variables, recording order.
  StatPoint push(const Eigen::VectorXd& x_effective, double t);

  const std::vector<StatPoint>& stats() const { return stats_; }
  const std::vector<AlarmEvent>& alarms() const { return alarms_; }

 private:
  struct RuleState {
    int run_above = 0;
    int run_below = 0;
    bool open = false;
    double first_t = 0.0;
  };

  void apply_rule(RuleState& rule, Statistic statistic, double value, double limit, double t);

  const PcaModel& model_;
  ControlLimits limits_;
  View view_;
  RuleState d_rule_;
  RuleState q_rule_;
  std::vector<StatPoint> stats_;
  std::vector<AlarmEvent> alarms_;
};

struct MonitorResult {
  std::vector<StatPoint> stats;
  std::vector<AlarmEvent> alarms;
};

/// Batch wrapper over StreamMonitor. Rows of `observations` are full
/// recorded-order vectors; the model's effective variables are selected by
/// name. Throws InputFault naming the row index on non-finite input.
MonitorResult monitor_stream(const PcaModel& model, const ControlLimits& limits,
                             const Eigen::MatrixXd& observations,
                             const std::vector<std::string>& names,
                             std::span<const double> times, View view);

/// Time from onset to the earliest alarm at or after onset; nullopt when no
/// alarm fired ("not detected").
std::optional<double> compute_arl(std::span<const AlarmEvent> alarms, double onset_s);

}  // namespace mspcguard
