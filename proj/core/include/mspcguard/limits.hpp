#pragma once

#include <span>
#include <vector>

#include "mspcguard/pca.hpp"

namespace mspcguard {

/// One monitored sample: D and Q statistic values at time t.
struct StatPoint {
  double t = 0.0;  // s
  double d = 0.0;
  double q = 0.0;
};

enum class LimitMethod { Empirical, Theoretical };

struct ControlLimits {
  double d_95 = 0.0;
  double d_99 = 0.0;
  double q_95 = 0.0;
  double q_99 = 0.0;
  LimitMethod method = LimitMethod::Empirical;

  void validate() const;
};

/// Linear-interpolation quantile between order statistics (h = (n-1)p + 1 on
/// the sorted sample). p in [0,1].
double quantile_linear(std::span<const double> values, double p);

/// 95th/99th percentiles of the calibration D and Q series. Fewer than 100
/// points is a calibration fault.
ControlLimits empirical_limits(std::span<const StatPoint> calibration_stats);

/// Parametric limits: F-based Hotelling limit for D and the Box chi-squared
/// moment approximation for Q (g = v/2m, h = 2m^2/v from the calibration Q
/// moments). n is the calibration sample count.
ControlLimits theoretical_limits(const PcaModel& model,
                                 std::span<const StatPoint> calibration_stats,
                                 double alpha_95 = 0.05, double alpha_99 = 0.01);

}  // namespace mspcguard
