#include "mspcguard/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "mspcguard/csv.hpp"
#include "mspcguard/errors.hpp"
#include "mspcguard/omeda.hpp"
#include "mspcguard/rng.hpp"
#include "mspcguard/svg.hpp"

namespace mspcguard {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::D1FeedLoss: return "D1";
    case ScenarioKind::A1IntegrityActuator: return "A1";
    case ScenarioKind::A2IntegritySensor: return "A2";
    case ScenarioKind::A3DoSActuator: return "A3";
    case ScenarioKind::Custom: return "custom";
  }
  return "custom";
}

ScenarioKind scenario_from_string(const std::string& name) {
  if (name == "D1") return ScenarioKind::D1FeedLoss;
  if (name == "A1") return ScenarioKind::A1IntegrityActuator;
  if (name == "A2") return ScenarioKind::A2IntegritySensor;
  if (name == "A3") return ScenarioKind::A3DoSActuator;
  if (name == "custom") return ScenarioKind::Custom;
  throw InputFault("unknown scenario: " + name);
}

PlantParams bench_default_params() {
  PlantParams p;
  p.load_sigma = {0.03, 0.015, 0.035};
  p.load_tau_s = {300.0, 3600.0, 300.0};
  return p;
}

ScenarioConfig make_scenario(ScenarioKind kind, std::uint64_t seed, double duration_h,
                             double onset_h, const std::filesystem::path& custom_path) {
  ScenarioConfig config;
  config.duration_h = duration_h;
  config.onset_h = onset_h;
  config.seed = seed;
  switch (kind) {
    case ScenarioKind::D1FeedLoss:
      config.disturbances.push_back({DisturbanceKind::FeedALoss, 0.0, onset_h});
      break;
    case ScenarioKind::A1IntegrityActuator:
      config.attacks.push_back(
          {"u_a", Direction::ToActuator, AttackKind::Integrity, 0.0, onset_h, {}});
      break;
    case ScenarioKind::A2IntegritySensor:
      config.attacks.push_back(
          {"flow_a", Direction::ToController, AttackKind::Integrity, 0.0, onset_h, {}});
      break;
    case ScenarioKind::A3DoSActuator:
      config.attacks.push_back(
          {"u_a", Direction::ToActuator, AttackKind::DoS, 0.0, onset_h, {}});
      break;
    case ScenarioKind::Custom: {
      std::ifstream in(custom_path);
      if (!in) throw InputFault("cannot open scenario file " + custom_path.string());
      config = ScenarioConfig::from_json(nlohmann::json::parse(in));
      config.seed = seed;
      config.duration_h = duration_h;
      config.onset_h = onset_h;
      break;
    }
  }
  config.validate();
  return config;
}

std::uint64_t calibration_seed(std::uint64_t master, int run_index) {
  return derive_seed(master, static_cast<std::uint64_t>(run_index));
}
std::uint64_t heldout_seed(std::uint64_t master, int run_index) {
  return derive_seed(master, 100000 + static_cast<std::uint64_t>(run_index));
}
std::uint64_t scenario_seed(std::uint64_t master, int run_index) {
  return derive_seed(master, 200000 + static_cast<std::uint64_t>(run_index));
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("scenario")) {
    const auto& s = j.at("scenario");
    if (s.is_object()) {
      c.scenario = ScenarioKind::Custom;
      c.custom_scenario = s.at("custom").get<std::string>();
    } else {
      c.scenario = scenario_from_string(s.get<std::string>());
    }
  }
  c.master_seed = j.value("master_seed", c.master_seed);
  c.num_seeds = j.value("num_seeds", c.num_seeds);
  c.calibration_runs = j.value("calibration_runs", c.calibration_runs);
  c.duration_h = j.value("duration_h", c.duration_h);
  c.onset_h = j.value("onset_h", c.onset_h);
  if (j.contains("plant")) {
    // Overrides are applied on top of the bench defaults.
    nlohmann::json merged = c.params.to_json();
    merged.update(j.at("plant"));
    c.params = PlantParams::from_json(merged);
  }
  if (j.contains("control")) c.control = ControlConfig::from_json(j.at("control"));
  if (j.contains("retention")) {
    const auto& r = j.at("retention");
    if (r.contains("count")) {
      c.retention = RetentionPolicy::fixed(r.at("count").get<int>());
    } else {
      c.retention = RetentionPolicy::by_variance(r.value("threshold", 0.90));
    }
  }
  if (j.contains("diagnosis")) {
    const auto& d = j.at("diagnosis");
    c.diagnosis.group_size = d.value("group_size", c.diagnosis.group_size);
    c.diagnosis.tau = d.value("tau", c.diagnosis.tau);
    c.diagnosis.noise_floor = d.value("noise_floor", c.diagnosis.noise_floor);
  }
  if (c.num_seeds < 1) throw InputFault("num_seeds must be >= 1");
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputFault("cannot open config file " + path.string());
  return from_json(nlohmann::json::parse(in));
}

namespace {

ScenarioConfig attack_free_scenario(const ExperimentConfig& config, std::uint64_t seed) {
  ScenarioConfig s;
  s.duration_h = config.duration_h;
  s.onset_h = config.onset_h;
  s.seed = seed;
  return s;
}

DataMatrix stack_calibration_runs(const ExperimentConfig& config) {
  if (config.calibration_runs < 2) {
    throw CalibrationFault("calibration needs at least 2 runs (variance pooling)");
  }
  DataMatrix data;
  data.variable_names.assign(kVariableNames.begin(), kVariableNames.end());
  Eigen::Index offset = 0;
  for (int i = 0; i < config.calibration_runs; ++i) {
    const auto run = simulate_run(
        attack_free_scenario(config, calibration_seed(config.master_seed, i)),
        config.params, config.control);
    if (i == 0) {
      data.values.resize(run.rows() * config.calibration_runs, kNumVariables);
    }
    data.values.middleRows(offset, run.rows()) = run.controller_view;
    offset += run.rows();
  }
  data.values.conservativeResize(offset, Eigen::NoChange);
  return data;
}

std::vector<StatPoint> statistics_of(const PcaModel& model, const DataMatrix& data,
                                     double dt) {
  std::vector<StatPoint> stats;
  stats.reserve(static_cast<std::size_t>(data.values.rows()));
  std::vector<Eigen::Index> cols;
  for (const auto& name : model.variable_names) {
    const auto it =
        std::find(data.variable_names.begin(), data.variable_names.end(), name);
    cols.push_back(static_cast<Eigen::Index>(it - data.variable_names.begin()));
  }
  Eigen::VectorXd x(static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index i = 0; i < data.values.rows(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      x[static_cast<Eigen::Index>(j)] = data.values(i, cols[j]);
    }
    const auto p = project(model, x);
    stats.push_back(
        StatPoint{static_cast<double>(i) * dt, d_statistic(model, p.scores), q_statistic(p.residual)});
  }
  return stats;
}

/// 99th percentile of ||omega||_inf over disjoint consecutive calibration
/// groups; 5% of this is the default diagnosis noise floor.
double omeda_magnitude_p99(const PcaModel& model, const DataMatrix& calibration,
                           std::size_t group_size, Eigen::Index run_length) {
  std::vector<double> magnitudes;
  const Eigen::Index n = calibration.values.rows();
  for (Eigen::Index run_start = 0; run_start < n; run_start += run_length) {
    const Eigen::Index run_end = std::min(run_start + run_length, n);
    for (Eigen::Index g = run_start; g + static_cast<Eigen::Index>(group_size) <= run_end;
         g += static_cast<Eigen::Index>(group_size)) {
      DataMatrix slice{
          calibration.values.middleRows(g, static_cast<Eigen::Index>(group_size)),
          calibration.variable_names};
      DummyVector dummy;
      dummy.weights.assign(group_size, 1.0);
      magnitudes.push_back(omeda(model, slice, dummy).max_abs());
    }
  }
  if (magnitudes.empty()) throw CalibrationFault("no calibration oMEDA groups");
  return quantile_linear(magnitudes, 0.99);
}

}  // namespace

MonitoringModel run_calibration(const ExperimentConfig& config) {
  const DataMatrix data = stack_calibration_runs(config);
  MonitoringModel model;
  model.pca = calibrate(data, config.retention);
  const auto stats = statistics_of(model.pca, data, config.params.step_size);
  model.limits = empirical_limits(stats);
  const auto run_length =
      static_cast<Eigen::Index>(data.values.rows() / config.calibration_runs);
  model.omeda_magnitude_p99 =
      omeda_magnitude_p99(model.pca, data, config.diagnosis.group_size, run_length);
  model.master_seed = config.master_seed;
  model.calibration_runs = config.calibration_runs;
  model.calibration_samples = data.values.rows();
  return model;
}

std::vector<StatPoint> calibration_statistics(const ExperimentConfig& config,
                                              const PcaModel& model) {
  const DataMatrix data = stack_calibration_runs(config);
  return statistics_of(model, data, config.params.step_size);
}

ScenarioRunResult run_scenario(const ScenarioConfig& scenario, const PlantParams& params,
                               const ControlConfig& control, const MonitoringModel& model) {
  ScenarioRunResult result;
  result.run = simulate_run(scenario, params, control);
  result.controller =
      monitor_stream(model.pca, model.limits, result.run.controller_view,
                     result.run.variable_names, result.run.times_s, View::Controller);
  result.process =
      monitor_stream(model.pca, model.limits, result.run.process_view,
                     result.run.variable_names, result.run.times_s, View::Process);

  result.alarms = result.controller.alarms;
  result.alarms.insert(result.alarms.end(), result.process.alarms.begin(),
                       result.process.alarms.end());
  std::stable_sort(result.alarms.begin(), result.alarms.end(),
                   [](const AlarmEvent& a, const AlarmEvent& b) {
                     if (a.alarm_t != b.alarm_t) return a.alarm_t < b.alarm_t;
                     if (a.statistic != b.statistic) return a.statistic < b.statistic;
                     return a.view < b.view;
                   });
  const double onset_s = scenario.onset_h * 3600.0;
  for (const auto& alarm : result.alarms) {
    if (alarm.alarm_t >= onset_s) {
      result.first_post_onset = alarm;
      break;
    }
  }
  return result;
}

namespace {

std::optional<double> median_with_missing(std::vector<std::optional<double>> values) {
  std::vector<double> v;
  v.reserve(values.size());
  for (const auto& x : values) v.push_back(x ? *x : std::numeric_limits<double>::infinity());
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const double med = (v.size() % 2 == 1)
                         ? v[v.size() / 2]
                         : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  if (!std::isfinite(med)) return std::nullopt;
  return med;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, const MonitoringModel& model,
                                const std::filesystem::path& out_dir, bool emit_charts) {
  ExperimentReport report;
  report.scenario = config.scenario;
  if (emit_charts) std::filesystem::create_directories(out_dir);

  Eigen::VectorXd omega_sum_c, omega_sum_p;
  std::vector<std::string> omega_names;
  int omega_count = 0;

  for (int j = 0; j < config.num_seeds; ++j) {
    SeedOutcome outcome;
    outcome.seed = scenario_seed(config.master_seed, j);
    try {
      const auto scenario =
          make_scenario(config.scenario, outcome.seed, config.duration_h, config.onset_h,
                        config.custom_scenario);
      const auto result = run_scenario(scenario, config.params, config.control, model);
      const double onset_s = config.onset_h * 3600.0;

      const auto arl_for = [&](const std::vector<AlarmEvent>& alarms, Statistic s, View v) {
        std::vector<AlarmEvent> filtered;
        for (const auto& a : alarms) {
          if (a.statistic == s && a.view == v) filtered.push_back(a);
        }
        return compute_arl(filtered, onset_s);
      };
      outcome.arl_d_controller_s = arl_for(result.controller.alarms, Statistic::D, View::Controller);
      outcome.arl_q_controller_s = arl_for(result.controller.alarms, Statistic::Q, View::Controller);
      outcome.arl_d_process_s = arl_for(result.process.alarms, Statistic::D, View::Process);
      outcome.arl_q_process_s = arl_for(result.process.alarms, Statistic::Q, View::Process);
      outcome.arl_s = compute_arl(result.alarms, onset_s);
      outcome.detected = outcome.arl_s.has_value();

      if (result.first_post_onset) {
        const auto diag =
            diagnose_event(model, result.run, *result.first_post_onset, config.diagnosis);
        outcome.classification = diag.classification;
        outcome.localized_variable = diag.max_divergence_variable;
        outcome.max_divergence = diag.max_divergence;
        if (!diag.implicated_controller.empty()) {
          outcome.top_controller_variable = diag.implicated_controller.front();
        }
        if (omega_count == 0) {
          omega_sum_c = diag.controller_omeda.contributions;
          omega_sum_p = diag.process_omeda.contributions;
          omega_names = diag.controller_omeda.variable_names;
        } else {
          omega_sum_c += diag.controller_omeda.contributions;
          omega_sum_p += diag.process_omeda.contributions;
        }
        ++omega_count;

        if (emit_charts) {
          const auto seed_dir = out_dir / ("seed_" + std::to_string(j));
          std::filesystem::create_directories(seed_dir);
          const auto title = to_string(config.scenario) + " seed " + std::to_string(j);
          const struct {
            const char* name;
            const std::vector<StatPoint>* stats;
            bool use_d;
          } charts[] = {
              {"d_controller.svg", &result.controller.stats, true},
              {"q_controller.svg", &result.controller.stats, false},
              {"d_process.svg", &result.process.stats, true},
              {"q_process.svg", &result.process.stats, false},
          };
          for (const auto& c : charts) {
            const auto path = seed_dir / c.name;
            write_text_file(path, control_chart_svg(*c.stats, c.use_d, model.limits,
                                                    title + (c.use_d ? " D" : " Q")));
            report.chart_paths.push_back(path.string());
          }
          const auto& oc = diag.controller_omeda;
          const auto& op = diag.process_omeda;
          const auto pc = seed_dir / "omeda_controller.svg";
          const auto pp = seed_dir / "omeda_process.svg";
          write_text_file(pc, bar_chart_svg(oc.variable_names,
                                            {oc.contributions.data(),
                                             static_cast<std::size_t>(oc.contributions.size())},
                                            title + " oMEDA (controller)"));
          write_text_file(pp, bar_chart_svg(op.variable_names,
                                            {op.contributions.data(),
                                             static_cast<std::size_t>(op.contributions.size())},
                                            title + " oMEDA (process)"));
          report.chart_paths.push_back(pc.string());
          report.chart_paths.push_back(pp.string());
        }
      }
    } catch (const SimulationFault& fault) {
      outcome.error = fault.what();  // recorded per-seed, batch continues
    }
    report.outcomes.push_back(std::move(outcome));
  }

  int detected = 0;
  std::vector<std::optional<double>> arls;
  for (const auto& o : report.outcomes) {
    detected += o.detected ? 1 : 0;
    arls.push_back(o.arl_s);
    switch (o.classification) {
      case Classification::Attack: ++report.classified_attack; break;
      case Classification::Disturbance: ++report.classified_disturbance; break;
      case Classification::Inconclusive: ++report.classified_inconclusive; break;
    }
  }
  report.detection_rate =
      report.outcomes.empty()
          ? 0.0
          : static_cast<double>(detected) / static_cast<double>(report.outcomes.size());
  report.median_arl_s = median_with_missing(arls);

  if (emit_charts && omega_count > 0) {
    const Eigen::VectorXd mean_c = omega_sum_c / omega_count;
    const Eigen::VectorXd mean_p = omega_sum_p / omega_count;
    const auto pc = out_dir / "omeda_controller_mean.svg";
    const auto pp = out_dir / "omeda_process_mean.svg";
    write_text_file(pc, bar_chart_svg(omega_names,
                                      {mean_c.data(), static_cast<std::size_t>(mean_c.size())},
                                      to_string(config.scenario) + " mean oMEDA (controller)"));
    write_text_file(pp, bar_chart_svg(omega_names,
                                      {mean_p.data(), static_cast<std::size_t>(mean_p.size())},
                                      to_string(config.scenario) + " mean oMEDA (process)"));
    report.chart_paths.push_back(pc.string());
    report.chart_paths.push_back(pp.string());
  }
  return report;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json outcomes_json = nlohmann::json::array();
  const auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  for (const auto& o : outcomes) {
    outcomes_json.push_back(nlohmann::json{
        {"seed", o.seed},
        {"detected", o.detected},
        {"arl_s", opt(o.arl_s)},
        {"arl_d_controller_s", opt(o.arl_d_controller_s)},
        {"arl_d_process_s", opt(o.arl_d_process_s)},
        {"arl_q_controller_s", opt(o.arl_q_controller_s)},
        {"arl_q_process_s", opt(o.arl_q_process_s)},
        {"classification", to_string(o.classification)},
        {"localized_variable", o.localized_variable},
        {"top_controller_variable", o.top_controller_variable},
        {"max_divergence", o.max_divergence},
        {"error", o.error},
    });
  }
  return nlohmann::json{
      {"scenario", to_string(scenario)},
      {"outcomes", outcomes_json},
      {"detection_rate", detection_rate},
      {"median_arl_s", opt(median_arl_s)},
      {"classified_attack", classified_attack},
      {"classified_disturbance", classified_disturbance},
      {"classified_inconclusive", classified_inconclusive},
      {"charts", chart_paths},
  };
}

void ExperimentReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputFault("cannot open " + path.string() + " for writing");
  out << "seed,statistic,view,arl_s,detected\n";
  for (const auto& o : outcomes) {
    const struct {
      const char* stat;
      const char* view;
      const std::optional<double>* arl;
    } rows[] = {
        {"D", "controller", &o.arl_d_controller_s},
        {"D", "process", &o.arl_d_process_s},
        {"Q", "controller", &o.arl_q_controller_s},
        {"Q", "process", &o.arl_q_process_s},
    };
    for (const auto& r : rows) {
      out << o.seed << ',' << r.stat << ',' << r.view << ','
          << (r.arl->has_value() ? format_double(**r.arl) : "not_detected") << ','
          << (r.arl->has_value() ? 1 : 0) << '\n';
    }
  }
}

}  // namespace mspcguard
