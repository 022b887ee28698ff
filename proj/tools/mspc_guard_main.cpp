// mspc-guard: calibrate a monitoring model on the simulated plant, replay the
// benchmark scenarios, and diagnose alarms as disturbances or attacks.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mspcguard/csv.hpp"
#include "mspcguard/diagnose.hpp"
#include "mspcguard/errors.hpp"
#include "mspcguard/experiment.hpp"
#include "mspcguard/model_store.hpp"
#include "mspcguard/svg.hpp"

namespace fs = std::filesystem;
using namespace mspcguard;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDataFault = 2;
constexpr int kExitNumericalFault = 3;

fs::path default_out_dir() {
  if (const char* env = std::getenv("MSPC_GUARD_OUT")) return fs::path(env);
  return fs::path("out");
}

ExperimentConfig load_config(const std::string& config_path) {
  if (config_path.empty()) return ExperimentConfig{};
  return ExperimentConfig::from_file(config_path);
}

void write_alarms_json(const fs::path& path, const std::vector<AlarmEvent>& alarms) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : alarms) {
    arr.push_back(nlohmann::json{{"statistic", to_string(a.statistic)},
                                 {"view", to_string(a.view)},
                                 {"first_exceedance_s", a.first_exceedance_t},
                                 {"alarm_s", a.alarm_t}});
  }
  std::ofstream out(path);
  if (!out) throw InputFault("cannot write " + path.string());
  out << arr.dump(2) << '\n';
}

std::vector<AlarmEvent> read_alarms_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputFault("cannot open alarms file " + path.string());
  std::vector<AlarmEvent> alarms;
  for (const auto& j : nlohmann::json::parse(in)) {
    AlarmEvent a;
    a.statistic = j.at("statistic").get<std::string>() == "D" ? Statistic::D : Statistic::Q;
    a.view = j.at("view").get<std::string>() == "controller" ? View::Controller : View::Process;
    a.first_exceedance_t = j.at("first_exceedance_s").get<double>();
    a.alarm_t = j.at("alarm_s").get<double>();
    alarms.push_back(a);
  }
  return alarms;
}

void write_stats_csv(const fs::path& path, const std::vector<StatPoint>& controller,
                     const std::vector<StatPoint>& process) {
  std::ofstream out(path);
  if (!out) throw InputFault("cannot write " + path.string());
  out << "time_s,d_controller,q_controller,d_process,q_process\n";
  for (std::size_t i = 0; i < controller.size(); ++i) {
    out << format_double(controller[i].t) << ',' << format_double(controller[i].d) << ','
        << format_double(controller[i].q) << ',' << format_double(process[i].d) << ','
        << format_double(process[i].q) << '\n';
  }
}

int cmd_calibrate(const std::string& config_path, const std::string& model_path,
                  const fs::path& out_dir) {
  ExperimentConfig config = load_config(config_path);
  const MonitoringModel model = run_calibration(config);
  fs::path target = model_path.empty() ? out_dir / "model.json" : fs::path(model_path);
  fs::create_directories(target.parent_path().empty() ? "." : target.parent_path());
  save_model(model, target);
  std::cout << "model written to " << target.string() << " (A=" << model.pca.retained
            << ", variables=" << model.pca.variable_names.size() << ", excluded="
            << model.pca.excluded_variables.size() << ")\n";
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& scenario_name,
            const std::string& model_path, std::uint64_t seed, const fs::path& out_dir) {
  ExperimentConfig config = load_config(config_path);
  if (!scenario_name.empty()) {
    if (fs::exists(scenario_name)) {
      config.scenario = ScenarioKind::Custom;
      config.custom_scenario = scenario_name;
    } else {
      config.scenario = scenario_from_string(scenario_name);
    }
  }
  const MonitoringModel model = load_model(model_path);
  const auto scenario = make_scenario(config.scenario, seed, config.duration_h,
                                      config.onset_h, config.custom_scenario);
  const auto result = run_scenario(scenario, config.params, config.control, model);

  fs::create_directories(out_dir);
  const auto stem = to_string(config.scenario) + "_seed" + std::to_string(seed);
  const auto run_path = out_dir / (stem + ".csv");
  result.run.write_csv(run_path);
  write_stats_csv(out_dir / (stem + "_stats.csv"), result.controller.stats,
                  result.process.stats);
  write_alarms_json(out_dir / (stem + "_alarms.json"), result.alarms);
  std::cout << "run written to " << run_path.string() << "; " << result.alarms.size()
            << " alarm(s)\n";
  return kExitOk;
}

int cmd_diagnose(const std::string& run_path, const std::string& model_path,
                 const std::string& alarms_path, const fs::path& out_dir,
                 std::size_t group_size, double tau) {
  const MonitoringModel model = load_model(model_path);
  const RunRecord run = RunRecord::read_csv(run_path);
  auto alarms = read_alarms_json(alarms_path);
  const double onset_s = run.scenario.onset_h * 3600.0;
  std::erase_if(alarms, [onset_s](const AlarmEvent& a) { return a.alarm_t < onset_s; });
  if (alarms.empty()) {
    std::cout << "no alarms at or after onset; nothing to diagnose\n";
    return kExitOk;
  }

  fs::create_directories(out_dir);
  DiagnosisOptions options;
  options.group_size = group_size;
  options.tau = tau;
  for (std::size_t i = 0; i < alarms.size(); ++i) {
    const auto report = diagnose_event(model, run, alarms[i], options);
    const auto stem = "event_" + std::to_string(i);
    std::ofstream out(out_dir / (stem + "_report.json"));
    out << report.to_json().dump(2) << '\n';
    const auto& oc = report.controller_omeda;
    const auto& op = report.process_omeda;
    write_text_file(out_dir / (stem + "_omeda_controller.svg"),
                    bar_chart_svg(oc.variable_names,
                                  {oc.contributions.data(),
                                   static_cast<std::size_t>(oc.contributions.size())},
                                  stem + " oMEDA (controller)"));
    write_text_file(out_dir / (stem + "_omeda_process.svg"),
                    bar_chart_svg(op.variable_names,
                                  {op.contributions.data(),
                                   static_cast<std::size_t>(op.contributions.size())},
                                  stem + " oMEDA (process)"));
    std::cout << stem << ": " << to_string(report.classification) << " (max divergence "
              << report.max_divergence << " at " << report.max_divergence_variable << ")\n";
  }
  return kExitOk;
}

int cmd_experiment(const std::string& config_path, const std::string& scenario_name,
                   const std::string& model_path, const fs::path& out_dir) {
  ExperimentConfig config = load_config(config_path);
  if (!scenario_name.empty()) config.scenario = scenario_from_string(scenario_name);

  MonitoringModel model;
  if (!model_path.empty() && fs::exists(model_path)) {
    model = load_model(model_path);
  } else {
    std::cout << "calibrating model (" << config.calibration_runs << " runs)...\n";
    model = run_calibration(config);
    if (!model_path.empty()) save_model(model, model_path);
  }

  const auto exp_dir = out_dir / ("experiment_" + to_string(config.scenario));
  fs::create_directories(exp_dir);
  const auto report = run_experiment(config, model, exp_dir, /*emit_charts=*/true);
  report.write_csv(exp_dir / "report.csv");
  std::ofstream out(exp_dir / "report.json");
  out << report.to_json().dump(2) << '\n';

  std::cout << to_string(config.scenario) << ": detection "
            << report.detection_rate * 100.0 << "%, median ARL ";
  if (report.median_arl_s) {
    std::cout << *report.median_arl_s / 60.0 << " min";
  } else {
    std::cout << "not detected";
  }
  std::cout << ", attack/disturbance/inconclusive " << report.classified_attack << "/"
            << report.classified_disturbance << "/" << report.classified_inconclusive
            << "\n  report: " << (exp_dir / "report.json").string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PCA-based MSPC anomaly detection and disturbance/attack diagnosis"};
  app.require_subcommand(1);

  std::string config_path, model_path, scenario, run_path, alarms_path;
  std::string out_dir_flag;
  std::uint64_t seed = 1;
  std::size_t group_size = 20;
  double tau = 0.5;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config JSON");
    cmd->add_option("--out", out_dir_flag, "output directory (default $MSPC_GUARD_OUT or ./out)");
  };

  auto* calibrate_cmd = app.add_subcommand("calibrate", "build and persist the monitoring model");
  add_common(calibrate_cmd);
  calibrate_cmd->add_option("--model", model_path, "where to write the model JSON");

  auto* run_cmd = app.add_subcommand("run", "simulate one scenario run and monitor it");
  add_common(run_cmd);
  run_cmd->add_option("--model", model_path, "model JSON path")->required();
  run_cmd->add_option("--scenario", scenario, "D1|A1|A2|A3 or a scenario JSON path");
  run_cmd->add_option("--seed", seed, "run seed");

  auto* diagnose_cmd = app.add_subcommand("diagnose", "oMEDA diagnosis of recorded alarms");
  add_common(diagnose_cmd);
  diagnose_cmd->add_option("--run", run_path, "run CSV path")->required();
  diagnose_cmd->add_option("--model", model_path, "model JSON path")->required();
  diagnose_cmd->add_option("--alarms", alarms_path, "alarms JSON path")->required();
  diagnose_cmd->add_option("--group-size", group_size, "observations per diagnosis group");
  diagnose_cmd->add_option("--tau", tau, "divergence threshold for attack classification");

  auto* experiment_cmd =
      app.add_subcommand("experiment", "multi-seed scenario experiment with ARL table");
  add_common(experiment_cmd);
  experiment_cmd->add_option("--model", model_path, "model JSON (built on demand if absent)");
  experiment_cmd->add_option("--scenario", scenario, "D1|A1|A2|A3");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const fs::path out_dir = out_dir_flag.empty() ? default_out_dir() : fs::path(out_dir_flag);
  try {
    if (calibrate_cmd->parsed()) return cmd_calibrate(config_path, model_path, out_dir);
    if (run_cmd->parsed()) return cmd_run(config_path, scenario, model_path, seed, out_dir);
    if (diagnose_cmd->parsed()) {
      return cmd_diagnose(run_path, model_path, alarms_path, out_dir, group_size, tau);
    }
    if (experiment_cmd->parsed()) {
      return cmd_experiment(config_path, scenario, model_path, out_dir);
    }
  } catch (const InputFault& e) {
    std::cerr << "data fault: " << e.what() << '\n';
    return kExitDataFault;
  } catch (const CalibrationFault& e) {
    std::cerr << "calibration fault: " << e.what() << '\n';
    return kExitNumericalFault;
  } catch (const SimulationFault& e) {
    std::cerr << "simulation fault: " << e.what() << '\n';
    return kExitNumericalFault;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumericalFault;
  }
  return kExitUsage;
}
