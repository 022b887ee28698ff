#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mspcguard/diagnose.hpp"
#include "mspcguard/model_store.hpp"
#include "mspcguard/monitor.hpp"
#include "mspcguard/simulator.hpp"

namespace mspcguard {

/// The four benchmark scenarios: one physical disturbance and three
/// man-in-the-middle manipulations converging on the same loop.
enum class ScenarioKind {
  D1FeedLoss,           // feed A availability drops to zero
  A1IntegrityActuator,  // attacker forces the feed-A valve shut
  A2IntegritySensor,    // attacker zeroes the feed-A flow reading
  A3DoSActuator,        // feed-A valve commands frozen at the last clean value
  Custom,
};

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_from_string(const std::string& name);

/// Plant parameters used by the benchmark pipeline: the spec defaults plus
/// slow multiplicative load variation so calibration data carries realistic
/// correlated structure for the model to learn.
PlantParams bench_default_params();

ScenarioConfig make_scenario(ScenarioKind kind, std::uint64_t seed, double duration_h,
                             double onset_h,
                             const std::filesystem::path& custom_path = {});

struct ExperimentConfig {
  ScenarioKind scenario = ScenarioKind::D1FeedLoss;
  std::filesystem::path custom_scenario;
  std::uint64_t master_seed = 1;
  int num_seeds = 10;
  int calibration_runs = 30;
  double duration_h = 24.0;
  double onset_h = 10.0;
  PlantParams params = bench_default_params();
  ControlConfig control;
  RetentionPolicy retention;
  DiagnosisOptions diagnosis;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::filesystem::path& path);
};

/// Seed ids are derived from the master seed by stream index; calibration,
/// held-out and scenario runs use disjoint index ranges.
std::uint64_t calibration_seed(std::uint64_t master, int run_index);
std::uint64_t heldout_seed(std::uint64_t master, int run_index);
std::uint64_t scenario_seed(std::uint64_t master, int run_index);

/// Simulates calibration_runs attack-free runs, pools them, calibrates the
/// PCA model, sets empirical limits, and records the calibration oMEDA
/// magnitude reference. Refuses calibration_runs < 2.
MonitoringModel run_calibration(const ExperimentConfig& config);

/// Calibration statistics recomputed from the pooled calibration data
/// (exposed for the theoretical-limits path and reporting).
std::vector<StatPoint> calibration_statistics(const ExperimentConfig& config,
                                              const PcaModel& model);

struct ScenarioRunResult {
  RunRecord run;
  MonitorResult controller;
  MonitorResult process;
  std::vector<AlarmEvent> alarms;  // both views, ordered by alarm time
  std::optional<AlarmEvent> first_post_onset;
};

ScenarioRunResult run_scenario(const ScenarioConfig& scenario, const PlantParams& params,
                               const ControlConfig& control, const MonitoringModel& model);

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool detected = false;
  std::optional<double> arl_s;  // min over statistics and views
  std::optional<double> arl_d_controller_s, arl_d_process_s;
  std::optional<double> arl_q_controller_s, arl_q_process_s;
  Classification classification = Classification::Inconclusive;
  std::string localized_variable;   // argmax divergence
  std::string top_controller_variable;  // largest |omega| in controller view
  double max_divergence = 0.0;
  std::string error;  // nonempty when the run faulted
};

struct ExperimentReport {
  ScenarioKind scenario = ScenarioKind::D1FeedLoss;
  std::vector<SeedOutcome> outcomes;
  double detection_rate = 0.0;
  std::optional<double> median_arl_s;  // undetected runs count as +inf
  int classified_attack = 0;
  int classified_disturbance = 0;
  int classified_inconclusive = 0;
  std::vector<std::string> chart_paths;

  nlohmann::json to_json() const;
  /// One row per (seed, statistic, view).
  void write_csv(const std::filesystem::path& path) const;
};

/// Runs every seed of the configured scenario against the model, aggregates
/// ARL and classification outcomes, and (optionally) emits control charts and
/// per-run plus mean-aggregated oMEDA charts under out_dir.
ExperimentReport run_experiment(const ExperimentConfig& config, const MonitoringModel& model,
                                const std::filesystem::path& out_dir, bool emit_charts);

}  // namespace mspcguard
