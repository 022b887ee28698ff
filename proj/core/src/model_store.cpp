#include "mspcguard/model_store.hpp"

#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "mspcguard/errors.hpp"

namespace mspcguard {

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  return nlohmann::json(out);
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

}  // namespace

void save_model(const MonitoringModel& model, const std::filesystem::path& path) {
  const auto& pca = model.pca;
  nlohmann::json loadings = nlohmann::json::array();
  for (Eigen::Index i = 0; i < pca.loadings.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < pca.loadings.cols(); ++j) row.push_back(pca.loadings(i, j));
    loadings.push_back(row);
  }
  nlohmann::json j{
      {"variables", pca.variable_names},
      {"excluded_variables", pca.excluded_variables},
      {"mean", vector_to_json(pca.mean)},
      {"std", vector_to_json(pca.std_dev)},
      {"loadings", loadings},
      {"score_variances", vector_to_json(pca.score_variances)},
      {"eigenvalues", vector_to_json(pca.eigenvalues)},
      {"retained", pca.retained},
      {"limits",
       {{"method", model.limits.method == LimitMethod::Empirical ? "empirical" : "theoretical"},
        {"d_95", model.limits.d_95},
        {"d_99", model.limits.d_99},
        {"q_95", model.limits.q_95},
        {"q_99", model.limits.q_99}}},
      {"omeda_magnitude_p99", model.omeda_magnitude_p99},
      {"calibration",
       {{"master_seed", model.master_seed},
        {"runs", model.calibration_runs},
        {"samples", model.calibration_samples}}},
  };
  std::ofstream out(path);
  if (!out) throw InputFault("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw InputFault("write failed: " + path.string());
}

MonitoringModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputFault("cannot open model file " + path.string());
  const nlohmann::json j = nlohmann::json::parse(in);

  MonitoringModel model;
  auto& pca = model.pca;
  pca.variable_names = j.at("variables").get<std::vector<std::string>>();
  pca.excluded_variables = j.at("excluded_variables").get<std::vector<std::string>>();
  pca.mean = vector_from_json(j.at("mean"));
  pca.std_dev = vector_from_json(j.at("std"));
  pca.score_variances = vector_from_json(j.at("score_variances"));
  pca.eigenvalues = vector_from_json(j.at("eigenvalues"));
  pca.retained = j.at("retained").get<int>();

  const auto& loadings = j.at("loadings");
  const auto rows = static_cast<Eigen::Index>(loadings.size());
  if (rows != pca.mean.size()) throw InputFault("model loadings row count mismatch");
  pca.loadings.resize(rows, pca.retained);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = loadings.at(static_cast<std::size_t>(i));
    if (static_cast<int>(row.size()) != pca.retained) {
      throw InputFault("model loadings column count mismatch");
    }
    for (Eigen::Index jj = 0; jj < pca.retained; ++jj) {
      pca.loadings(i, jj) = row.at(static_cast<std::size_t>(jj)).get<double>();
    }
  }

  const auto& lim = j.at("limits");
  model.limits.method = lim.at("method").get<std::string>() == "theoretical"
                            ? LimitMethod::Theoretical
                            : LimitMethod::Empirical;
  model.limits.d_95 = lim.at("d_95").get<double>();
  model.limits.d_99 = lim.at("d_99").get<double>();
  model.limits.q_95 = lim.at("q_95").get<double>();
  model.limits.q_99 = lim.at("q_99").get<double>();

  model.omeda_magnitude_p99 = j.value("omeda_magnitude_p99", 0.0);
  if (j.contains("calibration")) {
    const auto& cal = j.at("calibration");
    model.master_seed = cal.value("master_seed", std::uint64_t{0});
    model.calibration_runs = cal.value("runs", 0);
    model.calibration_samples = cal.value("samples", std::int64_t{0});
  }
  return model;
}

}  // namespace mspcguard
