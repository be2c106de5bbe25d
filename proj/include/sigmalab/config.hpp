#pragma once

#include "sigmalab/decay_lab.hpp"
#include "sigmalab/solver.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sigmalab {

enum class Subcommand { linear, semilinear, admissible, sweep, oracle_test };

std::string to_string(Subcommand s);

/// Invalid configuration: unknown key, bad value, or a range violation. The
/// message always names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::linear;
  SolverConfig solver;
  /// True when L was left at "auto" and derived from t_end.
  bool auto_length = true;
  std::filesystem::path output_dir = "sigmalab_out";
  std::set<std::string> emit = {"csv", "json"};
  double tol = 0.05;
  std::optional<FitWindow> window;
  std::vector<int> sweep_n;
  std::vector<double> sweep_sigma, sweep_alpha, sweep_p, sweep_m;
  SweepMode sweep_mode = SweepMode::linear;
  unsigned threads = 0;
  /// Every key with its effective canonical value.
  std::map<std::string, std::string> effective;

  /// Fingerprint of `effective`.
  std::string hash() const;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Flat `key = value` document: one pair per line, `#` starts a comment,
/// blank lines ignored. Throws ConfigError on malformed lines.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Documented keys and their defaults, in schema order.
const std::vector<std::pair<std::string, std::string>>& config_schema();

/// Reads `file` (if given), applies `overrides` on top, fills defaults and
/// validates. Throws ConfigError.
RunConfig parse_config(const std::optional<std::filesystem::path>& file, const Overrides& overrides = {});
RunConfig parse_config_text(const std::string& text, const Overrides& overrides = {});

/// Process exit statuses of dispatch().
enum ExitStatus : int {
  kExitOk = 0,
  kExitInternalError = 1,
  kExitValidationError = 2,
  kExitBlowUp = 3,
};

/// Runs the pipeline of config.subcommand, writing outputs and manifest.json
/// under config.output_dir. Returns an ExitStatus.
int dispatch(const RunConfig& config);

/// Environment variable that overrides output_dir.
inline constexpr const char* kOutputDirEnv = "SIGMALAB_OUTPUT_DIR";

}  // namespace sigmalab
