#include "mspcguard/diagnose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "mspcguard/errors.hpp"

namespace mspcguard {

namespace {
constexpr double kDivergenceEps = 1e-12;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Disturbance: return "disturbance";
    case Classification::Attack: return "attack";
    case Classification::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

DiagnosisReport classify_event(const OmedaVector& controller, const OmedaVector& process,
                               double tau, double noise_floor) {
  if (controller.variable_names != process.variable_names) {
    throw InputFault("controller/process oMEDA variable sets differ");
  }
  DiagnosisReport report;
  report.controller_omeda = controller;
  report.process_omeda = process;
  report.tau_used = tau;
  report.noise_floor_used = noise_floor;

  const double norm_c = controller.max_abs();
  const double norm_p = process.max_abs();
  const double denom = std::max({norm_c, norm_p, kDivergenceEps});
  report.divergence = (controller.contributions - process.contributions).cwiseAbs() / denom;

  Eigen::Index argmax = 0;
  report.max_divergence =
      report.divergence.size() == 0 ? 0.0 : report.divergence.maxCoeff(&argmax);
  if (!controller.variable_names.empty()) {
    report.max_divergence_variable =
        controller.variable_names[static_cast<std::size_t>(argmax)];
  }

  if (norm_c < noise_floor && norm_p < noise_floor) {
    report.classification = Classification::Inconclusive;
    report.weak_localization = true;
  } else if (report.max_divergence > tau) {
    report.classification = Classification::Attack;
  } else {
    report.classification = Classification::Disturbance;
  }
  if (std::min(norm_c, norm_p) < noise_floor) report.weak_localization = true;

  report.implicated_controller = controller.ranked();
  report.implicated_process = process.ranked();
  {
    std::vector<std::size_t> order(controller.variable_names.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&report](std::size_t a, std::size_t b) {
      return report.divergence[static_cast<Eigen::Index>(a)] >
             report.divergence[static_cast<Eigen::Index>(b)];
    });
    for (std::size_t i : order) {
      report.implicated_by_divergence.push_back(controller.variable_names[i]);
    }
  }
  return report;
}

DiagnosisReport diagnose_event(const MonitoringModel& model, const RunRecord& run,
                               const AlarmEvent& alarm, const DiagnosisOptions& options) {
  if (options.group_size < 1) throw InputFault("group_size must be >= 1");
  const auto n = static_cast<std::size_t>(run.rows());
  if (n == 0) throw InputFault("empty run record");

  // Locate the first-exceedance row. Times are uniform by construction.
  const double dt = run.times_s.size() > 1 ? run.times_s[1] - run.times_s[0] : 1.0;
  const auto start = static_cast<std::size_t>(
      std::clamp<long long>(std::llround((alarm.first_exceedance_t - run.times_s.front()) / dt),
                            0, static_cast<long long>(n - 1)));

  const bool truncated = start + options.group_size > n;
  const DummyVector dummy = DummyVector::window(n, start, options.group_size);

  DataMatrix controller{run.controller_view, run.variable_names};
  DataMatrix process{run.process_view, run.variable_names};
  const OmedaVector omega_c = omeda(model.pca, controller, dummy);
  const OmedaVector omega_p = omeda(model.pca, process, dummy);

  double floor = options.noise_floor;
  if (floor <= 0.0) floor = 0.05 * model.omeda_magnitude_p99;

  DiagnosisReport report = classify_event(omega_c, omega_p, options.tau, floor);
  report.truncated = truncated;
  return report;
}

nlohmann::json DiagnosisReport::to_json() const {
  nlohmann::json j;
  j["variables"] = controller_omeda.variable_names;
  j["controller_omeda"] =
      std::vector<double>(controller_omeda.contributions.data(),
                          controller_omeda.contributions.data() + controller_omeda.contributions.size());
  j["process_omeda"] =
      std::vector<double>(process_omeda.contributions.data(),
                          process_omeda.contributions.data() + process_omeda.contributions.size());
  j["divergence"] = std::vector<double>(divergence.data(), divergence.data() + divergence.size());
  j["max_divergence"] = max_divergence;
  j["max_divergence_variable"] = max_divergence_variable;
  j["classification"] = to_string(classification);
  j["implicated_controller"] = implicated_controller;
  j["implicated_process"] = implicated_process;
  j["implicated_by_divergence"] = implicated_by_divergence;
  j["truncated"] = truncated;
  j["weak_localization"] = weak_localization;
  j["tau"] = tau_used;
  j["noise_floor"] = noise_floor_used;
  return j;
}

}  // namespace mspcguard
