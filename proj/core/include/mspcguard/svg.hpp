#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mspcguard/limits.hpp"

namespace mspcguard {

/// Control chart: statistic series over time with dashed 95%/99% limit lines.
/// Long series are decimated per x-pixel bucket (min/max preserved) so
/// exceedances stay visible. Output is deterministic for fixed input.
std::string control_chart_svg(std::span<const StatPoint> stats, bool use_d,
                              const ControlLimits& limits, const std::string& title);

/// Signed bar chart, one bar per variable, zero axis drawn.
std::string bar_chart_svg(const std::vector<std::string>& names,
                          std::span<const double> values, const std::string& title);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace mspcguard
