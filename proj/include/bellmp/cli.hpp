#ifndef BELLMP_CLI_HPP
#define BELLMP_CLI_HPP

// Command implementations behind the `bellmp` executable.  Each command is a
// plain function returning JSON (or writing CSV) so tests can drive them
// without spawning processes.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellmp/core.hpp"
#include "bellmp/optimizer.hpp"

namespace bellmp::cli {

using json = nlohmann::json;

enum ExitCode : int { kSuccess = 0, kValidationError = 1, kReproductionFailure = 2 };

/// Malformed user input (files, state specs, flag values).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Rounds to `digits` significant digits; every float the CLI emits goes
/// through this.
[[nodiscard]] double round_sig(double x, int digits = 12);

/// "1,1,0.5,0.5" -> normalized state.  When `d` is given the length must match.
[[nodiscard]] PureState parse_state_spec(const std::string& spec, std::optional<int> d = std::nullopt);

/// Angle file schema: {"d": 4, "A1": [...], "A2": [...], "B1": [...], "B2": [...]}
/// in radians.  Unknown keys are ignored, so optimizer output is itself a
/// valid angle file.
[[nodiscard]] MeasurementSettings angles_from_json(const json& j);
[[nodiscard]] MeasurementSettings read_angle_file(const std::string& path);
[[nodiscard]] json angles_to_json(const MeasurementSettings& settings);

[[nodiscard]] json cmd_eval(const PureState& state, const MeasurementSettings& settings,
                            std::optional<double> noise, KernelVariant variant);

[[nodiscard]] json cmd_lhv(int d, KernelVariant variant);

/// Angle optimization at `state` or, with config.free_state, joint
/// optimization over dimension `d`.
[[nodiscard]] json cmd_optimize(int d, const std::optional<PureState>& state, const OptimizerConfig& config);

[[nodiscard]] json cmd_analytic(const PureState& state);

struct ReproductionRow {
  std::string label;
  double expected;
  double computed;
  double tolerance;
  bool pass;
  std::string method;  ///< Independent route used to compute the value.
  bool gating = true;
};

struct ReproductionReport {
  std::vector<ReproductionRow> rows;
  bool overall_pass;  ///< Conjunction over gating rows.
  std::vector<std::string> diagnostics;
};

struct ReproduceOptions {
  int restarts = 50;
  std::uint64_t seed = 0;
  int threads = 0;
};

[[nodiscard]] ReproductionReport cmd_reproduce(const ReproduceOptions& options = {});
[[nodiscard]] json to_json(const ReproductionReport& report);
void print_report(const ReproductionReport& report, std::ostream& os);

/// The (x, x, y, y) family a = normalize(1, 1, r, r) on an evenly spaced grid.
struct ScanSpec {
  std::string family = "step";
  double r_from = 0.0;
  double r_to = 1.0;
  int steps = 101;
};

inline constexpr const char* kScanHeader = "r,B1,B2,Imax,S1,S2,Imin,Fthr";

void validate(const ScanSpec& spec);
void cmd_scan(const ScanSpec& spec, std::ostream& os);

[[nodiscard]] json cmd_sample(const PureState& state, const MeasurementSettings& settings, std::int64_t shots,
                              std::uint64_t seed, KernelVariant variant);

}  // namespace bellmp::cli

#endif  // BELLMP_CLI_HPP
