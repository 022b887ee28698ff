#pragma once

#include <string>
#include <vector>

#include "mspcguard/pca.hpp"

namespace mspcguard {

/// Marks the anomalous observation group: weight 1 selects a row, 0 ignores
/// it. (Contrast groups are not used here.)
struct DummyVector {
  std::vector<double> weights;

  static DummyVector window(std::size_t n, std::size_t start, std::size_t count);
};

/// Signed per-variable contributions for a group of observations; covers the
/// model's effective variables only.
struct OmedaVector {
  std::vector<std::string> variable_names;
  Eigen::VectorXd contributions;

  double max_abs() const {
    return contributions.size() == 0 ? 0.0 : contributions.cwiseAbs().maxCoeff();
  }

  /// Variable names sorted by decreasing |contribution|.
  std::vector<std::string> ranked() const;
};

/// Observation-group contribution vector: with z the auto-scaled data and
/// zhat its projection onto the model subspace, variable m contributes
///   sum_i dummy_i * (2 z_im - zhat_im) * |zhat_im| / sum_i |dummy_i|.
/// The |zhat| factor keeps the sign of the deviation, matching the bar-plot
/// convention this diagnosis is read with. X is engineering-unit data over
/// the full recorded variable set; scaling uses the model's parameters.
OmedaVector omeda(const PcaModel& model, const DataMatrix& data, const DummyVector& dummy);

}  // namespace mspcguard
