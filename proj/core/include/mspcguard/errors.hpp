#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mspcguard {

/// Bad caller-supplied data: non-finite values, dimension mismatches,
/// malformed configuration.
class InputFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model building failed (degenerate data, too few samples, N <= A, ...).
class CalibrationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The plant state became non-finite; carries the step index where it blew up
/// (npos when raised outside a run loop).
class SimulationFault : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit SimulationFault(const std::string& what)
      : std::runtime_error(what), step_(npos) {}
  SimulationFault(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace mspcguard
