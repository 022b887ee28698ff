#pragma once

#include <cstdint>
#include <filesystem>

#include "mspcguard/limits.hpp"
#include "mspcguard/pca.hpp"

namespace mspcguard {

/// Everything a monitoring deployment needs: the PCA model, its control
/// limits, and the calibration oMEDA magnitude reference used as the
/// diagnosis noise floor.
struct MonitoringModel {
  PcaModel pca;
  ControlLimits limits;
  double omeda_magnitude_p99 = 0.0;
  std::uint64_t master_seed = 0;
  int calibration_runs = 0;
  std::int64_t calibration_samples = 0;
};

/// JSON round-trip; loadings stored row-major. Numbers are written with
/// shortest round-trip precision so save/load reproduces statistics exactly.
void save_model(const MonitoringModel& model, const std::filesystem::path& path);
MonitoringModel load_model(const std::filesystem::path& path);

}  // namespace mspcguard
