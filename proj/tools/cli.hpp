#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "isp1d/errors.hpp"
#include "isp1d/source.hpp"

namespace isp1d::cli {

enum class Command { simulate, reconstruct, verify, check_lemmas, sweep };

std::string_view to_string(Command c);

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  Command command = Command::simulate;
  /// `bump[:A=..,c=..,w=..,p=..]`, `indicator[:a=..,b=..,v=..]`, `zero`, or a source CSV path.
  std::string source = "bump";
  bool source_given = false;
  double K = 8.0;
  std::optional<double> omega_max;  ///< defaults to K
  std::optional<std::size_t> m;     ///< defaults to nodes_per_unit * omega_max
  double nodes_per_unit = 512.0;
  std::size_t n = 401;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  double alpha = 1e-6;
  std::optional<double> alpha_min;  ///< with alpha_max: decade sweep for tikhonov
  std::optional<double> alpha_max;
  std::string method = "bandlimited";
  std::vector<double> K_list{4.0, 8.0, 16.0, 32.0};
  std::vector<double> sigma_list{0.0};
  std::optional<std::filesystem::path> data;  ///< boundary-data CSV; defaults to <out>/data/boundary.csv
  std::filesystem::path out = "out";

  double resolved_omega_max() const { return omega_max.value_or(K); }
};

/// Parsing or validation failure; maps to exit status 2.
class ConfigError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// Parses `<command> [flags]` (program name excluded) and validates ranges.
RunConfig parse_config(const std::vector<std::string>& args);

void validate(const RunConfig& config);

/// Builds the source named by `spec` on an n-point grid.
SourceFunction make_source(const std::string& spec, std::size_t n);

/// Executes the command. Throws on failure; see `run_cli` for exit statuses.
void run(const RunConfig& config, std::ostream& log);

/// Parse + run with errors mapped to exit statuses (0, 2 or 3) and reported on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& log, std::ostream& err);

}  // namespace isp1d::cli
