#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mspcguard/controller.hpp"
#include "mspcguard/plant.hpp"
#include "mspcguard/scenario.hpp"

namespace mspcguard {

/// Dual-view time series from one run: every variable as the controllers saw
/// it and as it truly was at the plant. The two matrices share shape and
/// column order (kVariableNames); without attacks they are bit-identical.
struct RunRecord {
  std::vector<double> times_s;
  Eigen::MatrixXd controller_view;  // N x 8
  Eigen::MatrixXd process_view;     // N x 8
  std::vector<std::string> variable_names;
  ScenarioConfig scenario;
  PlantParams params;
  ControlConfig control;

  Eigen::Index rows() const { return controller_view.rows(); }

  /// Wide CSV: time_s, 8 `_c` columns, 8 `_p` columns; values are shortest
  /// round-trip decimals. The sidecar `<stem>.meta.json` carries scenario,
  /// seed, onset and the parameter set.
  void write_csv(const std::filesystem::path& csv_path) const;
  static RunRecord read_csv(const std::filesystem::path& csv_path);
};

}  // namespace mspcguard
