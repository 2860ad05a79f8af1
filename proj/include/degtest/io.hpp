#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "degtest/bayesnet.hpp"
#include "degtest/estimators.hpp"
#include "degtest/hardness.hpp"
#include "degtest/learner.hpp"
#include "degtest/tester.hpp"

namespace degtest {

using Json = nlohmann::ordered_json;

/// Thrown for malformed model, mask, or config files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"n", "parents", "cpt"}; cpt[i][c] = Pr[X_i = 1 | parent config c].
Json model_to_json(const BayesNetModel& net);
/// Rejects unknown keys other than "provenance" and any invalid net.
BayesNetModel model_from_json(const Json& j);

/// {"excluded": [[node, value, config], ...]}
Json mask_to_json(const SupportMask& mask);
SupportMask mask_from_json(const Json& j, const Dag& dag);

Json to_json(const TestReport& report);
Json to_json(const DegreeTestReport& report);
Json to_json(const RecurrenceAudit& audit);
/// Summary only; per-trial values go to CSV.
Json summary_json(const RiskReport& report);
Json summary_json(const MinimaxReport& report);

/// trial_index,seed,chi2
std::string risk_csv(const RiskReport& report);
/// trial_index,seed,risk,no_rare_sample,restricted_risk,support_mass
std::string minimax_csv(const MinimaxReport& report);

/// Trial CSV with an optional leading "# <json>" provenance line.
struct CsvTable {
  Json provenance;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
std::string csv_with_provenance(const Json& provenance, const std::string& csv);
CsvTable parse_csv(const std::string& text);

Json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace degtest
