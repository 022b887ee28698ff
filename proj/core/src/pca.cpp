#include "mspcguard/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "mspcguard/errors.hpp"

namespace mspcguard {

namespace {

constexpr double kStdFloor = 1e-12;

// Neumaier-compensated column sum; plain accumulation over ~5e5 rows leaves a
// bit-constant column with an apparent std above kStdFloor.
double compensated_sum(const Eigen::Ref<const Eigen::VectorXd>& col) {
  double sum = 0.0, comp = 0.0;
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    const double x = col[i];
    const double t = sum + x;
    comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

void DataMatrix::validate() const {
  if (values.rows() < 2 || values.cols() < 1) {
    throw InputFault("data matrix needs N >= 2 observations and M >= 1 variables");
  }
  if (!values.allFinite()) throw InputFault("data matrix contains non-finite entries");
  if (!variable_names.empty() &&
      static_cast<Eigen::Index>(variable_names.size()) != values.cols()) {
    throw InputFault("variable name count does not match column count");
  }
}

Eigen::VectorXd PcaModel::select_effective(const Eigen::VectorXd& full,
                                           const std::vector<std::string>& full_names) const {
  if (static_cast<Eigen::Index>(full_names.size()) != full.size()) {
    throw InputFault("observation and name vector sizes differ");
  }
  Eigen::VectorXd out(effective_count());
  Eigen::Index k = 0;
  for (const auto& name : variable_names) {
    const auto it = std::find(full_names.begin(), full_names.end(), name);
    if (it == full_names.end()) throw InputFault("observation lacks variable " + name);
    out[k++] = full[static_cast<Eigen::Index>(it - full_names.begin())];
  }
  return out;
}

Eigen::VectorXd PcaModel::scale(const Eigen::VectorXd& x_effective) const {
  if (x_effective.size() != effective_count()) {
    throw InputFault("dimension mismatch: expected " + std::to_string(effective_count()) +
                     " variables, got " + std::to_string(x_effective.size()));
  }
  return (x_effective - mean).cwiseQuotient(std_dev);
}

PcaModel calibrate(const DataMatrix& data, const RetentionPolicy& policy) {
  data.validate();
  const Eigen::Index n = data.values.rows();
  const Eigen::Index m = data.values.cols();

  std::vector<std::string> names = data.variable_names;
  if (names.empty()) {
    for (Eigen::Index j = 0; j < m; ++j) names.push_back("x" + std::to_string(j));
  }

  Eigen::VectorXd mean(m), std_dev(m);
  std::vector<bool> keep(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto col = data.values.col(j);
    const double mu = compensated_sum(col) / static_cast<double>(n);
    Eigen::VectorXd centered = col.array() - mu;
    const double var =
        compensated_sum(centered.cwiseProduct(centered)) / static_cast<double>(n - 1);
    mean[j] = mu;
    std_dev[j] = std::sqrt(std::max(var, 0.0));
    const bool constant = col.maxCoeff() == col.minCoeff();
    keep[static_cast<std::size_t>(j)] = !constant && std_dev[j] >= kStdFloor;
  }

  PcaModel model;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (keep[static_cast<std::size_t>(j)]) {
      model.variable_names.push_back(names[static_cast<std::size_t>(j)]);
    } else {
      model.excluded_variables.push_back(names[static_cast<std::size_t>(j)]);
    }
  }
  const auto m_eff = static_cast<Eigen::Index>(model.variable_names.size());
  if (m_eff == 0) throw CalibrationFault("all variables excluded (zero variance)");

  Eigen::MatrixXd scaled(n, m_eff);
  model.mean.resize(m_eff);
  model.std_dev.resize(m_eff);
  {
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!keep[static_cast<std::size_t>(j)]) continue;
      model.mean[k] = mean[j];
      model.std_dev[k] = std_dev[j];
      scaled.col(k) = (data.values.col(j).array() - mean[j]) / std_dev[j];
      ++k;
    }
  }

  const Eigen::MatrixXd cov =
      scaled.transpose() * scaled / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw CalibrationFault("eigendecomposition failed");

  // eigh returns ascending order; flip to nonincreasing.
  Eigen::VectorXd eigenvalues = solver.eigenvalues().reverse();
  Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index a = 0; a < vectors.cols(); ++a) {
    Eigen::Index imax = 0;
    vectors.col(a).cwiseAbs().maxCoeff(&imax);
    if (vectors(imax, a) < 0.0) vectors.col(a) = -vectors.col(a);
  }
  model.eigenvalues = eigenvalues.cwiseMax(0.0);

  int retained = 0;
  if (policy.mode == RetentionPolicy::Mode::FixedCount) {
    if (policy.count < 1) throw InputFault("retention count must be >= 1");
    retained = static_cast<int>(std::min<Eigen::Index>(policy.count, m_eff));
  } else {
    const double total = model.eigenvalues.sum();
    double cum = 0.0;
    for (Eigen::Index a = 0; a < m_eff; ++a) {
      cum += model.eigenvalues[a];
      retained = static_cast<int>(a) + 1;
      if (cum >= policy.threshold * total) break;
    }
  }
  model.retained = retained;
  model.loadings = vectors.leftCols(retained);

  // Sample variance of each calibration score column; equals the eigenvalue in
  // exact arithmetic, kept empirical per the model definition.
  const Eigen::MatrixXd scores = scaled * model.loadings;
  model.score_variances.resize(retained);
  for (int a = 0; a < retained; ++a) {
    const double mu = scores.col(a).mean();
    model.score_variances[a] =
        (scores.col(a).array() - mu).square().sum() / static_cast<double>(n - 1);
  }
  if ((model.score_variances.array() <= 0.0).any()) {
    throw CalibrationFault("degenerate score variance; reduce retained components");
  }
  return model;
}

Projection project(const PcaModel& model, const Eigen::VectorXd& x_effective) {
  if (!x_effective.allFinite()) throw InputFault("observation contains non-finite values");
  const Eigen::VectorXd z = model.scale(x_effective);
  Projection p;
  p.scores = model.loadings.transpose() * z;
  p.residual = z - model.loadings * p.scores;
  return p;
}

Projection project(const PcaModel& model, const Eigen::VectorXd& x,
                   const std::vector<std::string>& names) {
  return project(model, model.select_effective(x, names));
}

double d_statistic(const PcaModel& model, const Eigen::VectorXd& scores) {
  if (scores.size() != model.score_variances.size()) {
    throw InputFault("score vector length does not match retained components");
  }
  return (scores.array().square() / model.score_variances.array()).sum();
}

double q_statistic(const Eigen::VectorXd& residual) { return residual.squaredNorm(); }

}  // namespace mspcguard
