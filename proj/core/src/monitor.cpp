#include "mspcguard/monitor.hpp"

#include <algorithm>

#include "mspcguard/errors.hpp"

namespace mspcguard {

std::string to_string(Statistic s) { return s == Statistic::D ? "D" : "Q"; }

std::string to_string(View v) { return v == View::Controller ? "controller" : "process"; }

StreamMonitor::StreamMonitor(const PcaModel& model, const ControlLimits& limits, View view)
    : model_(model), limits_(limits), view_(view) {}

void StreamMonitor::apply_rule(RuleState& rule, Statistic statistic, double value,
                               double limit, double t) {
  // Exceedance is strict; points exactly at the limit reset the run.
  if (value > limit) {
    if (rule.run_above == 0) rule.first_t = t;
    ++rule.run_above;
    rule.run_below = 0;
    if (rule.run_above == 3 && !rule.open) {
      alarms_.push_back(AlarmEvent{statistic, view_, rule.first_t, t});
      rule.open = true;
    }
  } else {
    rule.run_above = 0;
    if (rule.open) {
      ++rule.run_below;
      if (rule.run_below >= 3) {
        rule.open = false;
        rule.run_below = 0;
      }
    }
  }
}

StatPoint StreamMonitor::push(const Eigen::VectorXd& x_effective, double t) {
  const Projection p = project(model_, x_effective);
  StatPoint point{t, d_statistic(model_, p.scores), q_statistic(p.residual)};
  stats_.push_back(point);
  apply_rule(d_rule_, Statistic::D, point.d, limits_.d_99, t);
  apply_rule(q_rule_, Statistic::Q, point.q, limits_.q_99, t);
  return point;
}

MonitorResult monitor_stream(const PcaModel& model, const ControlLimits& limits,
                             const Eigen::MatrixXd& observations,
                             const std::vector<std::string>& names,
                             std::span<const double> times, View view) {
  if (static_cast<std::size_t>(observations.rows()) != times.size()) {
    throw InputFault("observation count does not match time vector");
  }
  // Column picker resolved once; rows then go through the streaming path.
  std::vector<Eigen::Index> cols;
  cols.reserve(model.variable_names.size());
  for (const auto& name : model.variable_names) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InputFault("observations lack variable " + name);
    cols.push_back(static_cast<Eigen::Index>(it - names.begin()));
  }

  StreamMonitor monitor(model, limits, view);
  Eigen::VectorXd x(static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index i = 0; i < observations.rows(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      x[static_cast<Eigen::Index>(j)] = observations(i, cols[j]);
    }
    if (!x.allFinite()) {
      throw InputFault("non-finite observation at index " + std::to_string(i));
    }
    monitor.push(x, times[static_cast<std::size_t>(i)]);
  }
  return MonitorResult{monitor.stats(), monitor.alarms()};
}

std::optional<double> compute_arl(std::span<const AlarmEvent> alarms, double onset_s) {
  std::optional<double> best;
  for (const auto& alarm : alarms) {
    if (alarm.alarm_t < onset_s) continue;
    const double lapse = alarm.alarm_t - onset_s;
    if (!best || lapse < *best) best = lapse;
  }
  return best;
}

}  // namespace mspcguard
