#include "mspcguard/omeda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mspcguard/errors.hpp"

namespace mspcguard {

DummyVector DummyVector::window(std::size_t n, std::size_t start, std::size_t count) {
  DummyVector d;
  d.weights.assign(n, 0.0);
  for (std::size_t i = start; i < std::min(start + count, n); ++i) d.weights[i] = 1.0;
  return d;
}

std::vector<std::string> OmedaVector::ranked() const {
  std::vector<std::size_t> order(variable_names.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return std::abs(contributions[static_cast<Eigen::Index>(a)]) >
           std::abs(contributions[static_cast<Eigen::Index>(b)]);
  });
  std::vector<std::string> names;
  names.reserve(order.size());
  for (std::size_t i : order) names.push_back(variable_names[i]);
  return names;
}

OmedaVector omeda(const PcaModel& model, const DataMatrix& data, const DummyVector& dummy) {
  data.validate();
  if (dummy.weights.size() != static_cast<std::size_t>(data.values.rows())) {
    throw InputFault("dummy length does not match observation count");
  }
  double weight_sum = 0.0;
  for (double w : dummy.weights) {
    if (w < 0.0) throw InputFault("dummy weights must be nonnegative");
    weight_sum += std::abs(w);
  }
  if (weight_sum == 0.0) throw InputFault("dummy vector selects no observations");

  // Column selection by name, then scale with the model's parameters.
  std::vector<Eigen::Index> cols;
  cols.reserve(model.variable_names.size());
  const auto& names = data.variable_names;
  for (const auto& name : model.variable_names) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InputFault("data lacks variable " + name);
    cols.push_back(static_cast<Eigen::Index>(it - names.begin()));
  }

  const auto m_eff = static_cast<Eigen::Index>(cols.size());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m_eff);
  Eigen::VectorXd z(m_eff);
  for (std::size_t i = 0; i < dummy.weights.size(); ++i) {
    const double w = dummy.weights[i];
    if (w == 0.0) continue;
    const auto row = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = 0; j < m_eff; ++j) {
      z[j] = (data.values(row, cols[static_cast<std::size_t>(j)]) - model.mean[j]) /
             model.std_dev[j];
    }
    const Eigen::VectorXd zhat = model.loadings * (model.loadings.transpose() * z);
    acc += w * (2.0 * z - zhat).cwiseProduct(zhat.cwiseAbs());
  }

  OmedaVector out;
  out.variable_names = model.variable_names;
  out.contributions = acc / weight_sum;
  return out;
}

}  // namespace mspcguard
