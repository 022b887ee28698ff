#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace mspcguard {

/// N observations x M variables, engineering units.
struct DataMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> variable_names;

  /// Throws InputFault on non-finite entries, N < 2, M < 1, or name mismatch.
  void validate() const;
};

/// How many principal components to keep.
struct RetentionPolicy {
  enum class Mode { FixedCount, ExplainedVariance };
  Mode mode = Mode::ExplainedVariance;
  int count = 0;
  double threshold = 0.90;

  static RetentionPolicy fixed(int a) { return {Mode::FixedCount, a, 0.0}; }
  static RetentionPolicy by_variance(double t) { return {Mode::ExplainedVariance, 0, t}; }
};

/// Calibrated PCA model over the auto-scaled variables. Variables whose
/// calibration column is (near-)constant are excluded and listed separately;
/// all vectors/matrices here cover the effective variables only, in the
/// original recording order.
struct PcaModel {
  std::vector<std::string> variable_names;      // effective variables
  std::vector<std::string> excluded_variables;  // dropped for near-zero variance
  Eigen::VectorXd mean;                         // M_eff
  Eigen::VectorXd std_dev;                      // M_eff
  Eigen::MatrixXd loadings;                     // M_eff x A, columnwise orthonormal
  Eigen::VectorXd score_variances;              // A, nonincreasing
  Eigen::VectorXd eigenvalues;                  // all M_eff, for explained variance
  int retained = 0;

  Eigen::Index effective_count() const { return mean.size(); }

  /// Select the effective entries of a full recorded-order vector.
  Eigen::VectorXd select_effective(const Eigen::VectorXd& full,
                                   const std::vector<std::string>& full_names) const;

  /// (x - mean) / std over the effective variables.
  Eigen::VectorXd scale(const Eigen::VectorXd& x_effective) const;
};

/// Fits mean/std (N-1 denominator, compensated summation), drops near-constant
/// columns, auto-scales, and extracts the top-A eigenvectors of the scaled
/// covariance. Score variances are the sample variances of the calibration
/// score columns. Column signs are fixed so the largest-magnitude entry of
/// each loading is positive.
PcaModel calibrate(const DataMatrix& data, const RetentionPolicy& policy);

struct Projection {
  Eigen::VectorXd scores;    // A
  Eigen::VectorXd residual;  // M_eff
};

/// Scores and residual of one observation given in full recorded order.
Projection project(const PcaModel& model, const Eigen::VectorXd& x,
                   const std::vector<std::string>& names);

/// As above when x already covers exactly the model's effective variables.
Projection project(const PcaModel& model, const Eigen::VectorXd& x_effective);

/// Hotelling distance in score space: sum of scores_a^2 / lambda_a.
double d_statistic(const PcaModel& model, const Eigen::VectorXd& scores);

/// Squared prediction error: squared norm of the residual.
double q_statistic(const Eigen::VectorXd& residual);

}  // namespace mspcguard
