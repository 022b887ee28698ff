#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mspcguard/model_store.hpp"
#include "mspcguard/monitor.hpp"
#include "mspcguard/omeda.hpp"
#include "mspcguard/run_record.hpp"

namespace mspcguard {

enum class Classification { Disturbance, Attack, Inconclusive };

std::string to_string(Classification c);

struct DiagnosisOptions {
  std::size_t group_size = 20;   // observations from the first exceedance
  double tau = 0.5;              // divergence threshold for Attack
  double noise_floor = 0.0;      // absolute |omega| floor; 0 = derive from model
};

/// Outcome of diagnosing one alarm event: the two per-view contribution
/// vectors, where they disagree, and what that implies.
struct DiagnosisReport {
  OmedaVector controller_omeda;
  OmedaVector process_omeda;
  Eigen::VectorXd divergence;      // per effective variable
  double max_divergence = 0.0;
  std::string max_divergence_variable;
  Classification classification = Classification::Inconclusive;
  std::vector<std::string> implicated_controller;     // ranked by |omega|
  std::vector<std::string> implicated_process;        // ranked by |omega|
  std::vector<std::string> implicated_by_divergence;  // ranked by divergence
  bool truncated = false;          // alarm group ran past the end of the run
  bool weak_localization = false;  // contributions near the noise floor
  double tau_used = 0.0;
  double noise_floor_used = 0.0;

  nlohmann::json to_json() const;
};

/// Divergence + classification from a pair of per-view oMEDA vectors.
/// Divergence per variable is |w_c - w_p| normalized by the larger of the two
/// infinity norms; Attack when the max exceeds tau, Inconclusive when both
/// vectors sit below the noise floor.
DiagnosisReport classify_event(const OmedaVector& controller, const OmedaVector& process,
                               double tau, double noise_floor);

/// Builds the dummy group (group_size observations from the alarm's first
/// exceedance), computes oMEDA on both views, and classifies. A zero
/// options.noise_floor defaults to 5% of the model's calibration oMEDA
/// magnitude p99.
DiagnosisReport diagnose_event(const MonitoringModel& model, const RunRecord& run,
                               const AlarmEvent& alarm,
                               const DiagnosisOptions& options = {});

}  // namespace mspcguard
