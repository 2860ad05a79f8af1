#include <gtest/gtest.h>

#include "degtest/calibration.hpp"
#include "degtest/tester.hpp"

using namespace degtest;

TEST(Calibration, TargetsAndBudgets) {
  const auto targets = calibration_targets();
  EXPECT_EQ(targets, (std::vector<std::string>{"gamma", "c_acc", "C_rec", "c_K-check"}));
  for (const auto& t : targets) EXPECT_LE(minimum_budget(t), default_budget(t));
  EXPECT_THROW(minimum_budget("delta"), std::invalid_argument);
}

TEST(Calibration, BudgetBelowMinimumFails) {
  for (const auto& t : calibration_targets()) {
    try {
      calibrate(t, 1, kDefaultCalibrationSeed);
      ADD_FAILURE() << t << " accepted a budget of 1";
    } catch (const CalibrationError& e) {
      EXPECT_TRUE(e.diagnostics().contains("minimum")) << t;
    }
  }
}

TEST(Calibration, DeterministicInSeed) {
  const Json a = calibrate("c_acc", minimum_budget("c_acc"), 7);
  const Json b = calibrate("c_acc", minimum_budget("c_acc"), 7);
  EXPECT_EQ(a, b);
  EXPECT_GT(calibrated_value(Json{{"c_acc", a}}, "c_acc"), 0.0);
}

TEST(Calibration, CommittedFileCoversEveryTarget) {
  const Json cal = read_json(DEGTEST_CALIBRATION_FILE);
  for (const auto& t : calibration_targets()) {
    ASSERT_TRUE(cal.contains(t)) << t;
    EXPECT_GT(calibrated_value(cal, t), 0.0);
    EXPECT_TRUE(cal[t].contains("seed"));
    EXPECT_TRUE(cal[t].contains("trials"));
  }
  EXPECT_DOUBLE_EQ(kCalibratedGamma, calibrated_value(cal, "gamma"));
  EXPECT_THROW(calibrated_value(cal, "missing"), std::exception);
}
