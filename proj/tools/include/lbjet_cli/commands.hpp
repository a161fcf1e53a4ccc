#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace lbjet::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitInputError = 3;

struct GlobalOptions {
  std::uint64_t seed = 42;
  int samples = 100;
  double tol = 1e-9;
};

/// What a subcommand produced: human text for stdout, the JSON report and the exit code.
struct CommandResult {
  int exit_code = kExitPass;
  std::string text;
  nlohmann::ordered_json report;
};

CommandResult cmd_check(const std::string& spec_path, const GlobalOptions& g);

CommandResult cmd_prolong(const std::string& spec_path, int order, const GlobalOptions& g);

CommandResult cmd_truncate(const std::string& spec_path, int order, const GlobalOptions& g);

struct FlowArgs {
  std::string t = "0.1";
  /// Comma-separated J^order coordinates: x, then y^a_L with a ascending, L inner.
  std::string point;
  std::string mode = "closed";
  int order = 1;
  double h = 1e-3;
};
CommandResult cmd_flow(const std::string& spec_path, const FlowArgs& a, const GlobalOptions& g);

struct ConstructArgs {
  std::string family;
  std::string F1;
  std::string g = "0";
  std::string gamma = "1";
  std::string lambda, slope, q0;
  /// Affine only: use the uncorrected f2 = gamma l F1' - gamma F1 + g.
  bool printed = false;
  std::string name;
};
CommandResult cmd_construct(const ConstructArgs& a, const GlobalOptions& g);

struct VerifyArgs {
  int order = 3;
  /// Semicolon-separated germ profiles in x1; empty skips the germ check.
  std::string germ;
  double a = -1.0, b = 1.0;
  double t = 0.1;
  int points = 41;
  std::string csv_path;
};
CommandResult cmd_verify(const std::string& spec_path, const VerifyArgs& a, const GlobalOptions& g);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace lbjet::cli
