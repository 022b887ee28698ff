#include "mspcguard/limits.hpp"

#include <algorithm>
#include <cmath>

#include "mspcguard/errors.hpp"
#include "mspcguard/special_functions.hpp"

namespace mspcguard {

void ControlLimits::validate() const {
  if (!(d_95 > 0.0) || !(q_95 > 0.0)) throw InputFault("limits must be positive");
  if (d_95 > d_99 || q_95 > q_99) throw InputFault("95% limit above 99% limit");
}

double quantile_linear(std::span<const double> values, double p) {
  if (values.empty()) throw InputFault("quantile of empty series");
  if (!(p >= 0.0 && p <= 1.0)) throw InputFault("quantile level outside [0,1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = (static_cast<double>(n) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ControlLimits empirical_limits(std::span<const StatPoint> calibration_stats) {
  if (calibration_stats.size() < 100) {
    throw CalibrationFault("too few calibration points for empirical limits (< 100)");
  }
  std::vector<double> d, q;
  d.reserve(calibration_stats.size());
  q.reserve(calibration_stats.size());
  for (const auto& s : calibration_stats) {
    d.push_back(s.d);
    q.push_back(s.q);
  }
  ControlLimits limits;
  limits.method = LimitMethod::Empirical;
  limits.d_95 = quantile_linear(d, 0.95);
  limits.d_99 = quantile_linear(d, 0.99);
  limits.q_95 = quantile_linear(q, 0.95);
  limits.q_99 = quantile_linear(q, 0.99);
  return limits;
}

namespace {

double hotelling_limit(int retained, double n, double alpha) {
  const double a = static_cast<double>(retained);
  const double coeff = a * (n - 1.0) * (n + 1.0) / (n * (n - a));
  return coeff * f_quantile(1.0 - alpha, a, n - a);
}

double box_limit(double q_mean, double q_var, double alpha) {
  if (!(q_mean > 0.0) || !(q_var > 0.0)) {
    throw CalibrationFault("degenerate calibration Q moments");
  }
  const double g = q_var / (2.0 * q_mean);
  const double h = 2.0 * q_mean * q_mean / q_var;
  return g * chi_squared_quantile(1.0 - alpha, h);
}

}  // namespace

ControlLimits theoretical_limits(const PcaModel& model,
                                 std::span<const StatPoint> calibration_stats,
                                 double alpha_95, double alpha_99) {
  const auto n = static_cast<double>(calibration_stats.size());
  if (n <= model.retained) {
    throw CalibrationFault("calibration size must exceed retained component count");
  }
  double q_sum = 0.0;
  for (const auto& s : calibration_stats) q_sum += s.q;
  const double q_mean = q_sum / n;
  double q_ss = 0.0;
  for (const auto& s : calibration_stats) q_ss += (s.q - q_mean) * (s.q - q_mean);
  const double q_var = q_ss / (n - 1.0);

  ControlLimits limits;
  limits.method = LimitMethod::Theoretical;
  limits.d_95 = hotelling_limit(model.retained, n, alpha_95);
  limits.d_99 = hotelling_limit(model.retained, n, alpha_99);
  limits.q_95 = box_limit(q_mean, q_var, alpha_95);
  limits.q_99 = box_limit(q_mean, q_var, alpha_99);
  return limits;
}

}  // namespace mspcguard
