#pragma once

// Experiment configuration and subcommand dispatch behind the degtest binary.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "degtest/io.hpp"

namespace degtest::cli {

inline constexpr int kExitAccept = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitError = 2;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { number, integer, string };

struct Field {
  std::string name;
  Kind kind;
  Json fallback;  // null: required (or derived, see `derived`)
  bool derived = false;  // null means "computed from the other fields"
  std::string help;
};

std::vector<std::string> commands();
const std::vector<Field>& command_fields(const std::string& command);
/// Constant overrides: c, c_K, gamma, m1_multiplier, m2_multiplier, m_multiplier, c_amp.
const std::vector<Field>& constant_fields();

/// Converts a command-line string to the JSON type the field expects.
Json parse_field_value(const Field& field, const std::string& text);

struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = ".";
  Json constants;  // every constant, defaults filled in
  Json params;     // the active command's block, defaults filled in

  /// Strict: unknown top-level keys, blocks or fields are rejected, types and
  /// ranges are checked, and every default is written into the result.
  static ExperimentConfig from_json(const Json& j);
  [[nodiscard]] Json to_json() const;
};

/// Dispatches to the subcommand, writes artifacts under output_dir and a
/// JSON summary to `out`. Returns 0 accept/success, 1 reject, 2 error (the
/// error JSON then goes to `out`).
int run(const ExperimentConfig& config, std::ostream& out);

/// Parses then runs; configuration errors also produce exit 2 and error JSON.
int run_json(const Json& config, std::ostream& out);

/// {"error": kind, "message": ...}
Json error_json(const std::string& kind, const std::string& message);

}  // namespace degtest::cli
