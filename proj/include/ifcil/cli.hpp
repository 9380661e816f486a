#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace ifcil {

enum class Mode { Verify, EmitNusmv, DumpNormalized, DumpGraph, Oracle };

struct RunConfig {
  std::string input;
  std::optional<std::string> flows;
  bool strict_flows = false;
  Mode mode = Mode::Verify;
  std::string emit_path;
  std::optional<std::string> report_path;
  bool force = false;
  bool nusmv_exact = false;
  std::optional<std::string> cross_check;  // external NuSMV binary
};

namespace exit_code {
inline constexpr int kSatisfied = 0;
inline constexpr int kViolated = 1;
inline constexpr int kUnknown = 2;
inline constexpr int kParse = 10;
inline constexpr int kNormalize = 11;
inline constexpr int kSemantics = 12;
inline constexpr int kFlowTable = 13;
inline constexpr int kEmit = 14;
inline constexpr int kUsage = 15;
}  // namespace exit_code

inline constexpr size_t kWitnessDisplayCap = 20;
inline constexpr size_t kOracleTypeLimit = 12;

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace ifcil
