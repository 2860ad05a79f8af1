#pragma once

// Calibration protocols for the constants the algorithms leave open.
// Each protocol runs at fixed small parameters and selects the constant
// meeting a documented operating point; the record carries seeds, trial
// counts and achieved rates.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "degtest/io.hpp"

namespace degtest {

class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, Json diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  [[nodiscard]] const Json& diagnostics() const { return diagnostics_; }

 private:
  Json diagnostics_;
};

/// "gamma", "c_acc", "C_rec", "c_K-check".
std::vector<std::string> calibration_targets();
std::size_t minimum_budget(const std::string& target);
std::size_t default_budget(const std::string& target);
inline constexpr std::uint64_t kDefaultCalibrationSeed = 20240611;

/// Runs one protocol and returns its record. Throws CalibrationError when
/// the budget is below the minimum or the operating point is not reached.
Json calibrate(const std::string& target, std::size_t budget, std::uint64_t seed);

/// Reads a committed calibration file and returns the value of one target.
double calibrated_value(const Json& calibration, const std::string& target);

}  // namespace degtest
