#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "blochform/blochform.hpp"

namespace blochform::cli {

enum class Command { Solve, Trace, Classify, Map, Boundary, Validate };
enum class Format { Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitCertificationFailure = 3;

/// Fully resolved command-line configuration. Values from --config files are
/// overridden by explicit flags.
struct RunConfig {
  Command command = Command::Solve;

  // physical inputs
  std::optional<double> gamma;
  std::optional<double> gamma_t;
  std::optional<double> delta;
  std::optional<double> omega;
  double w_eq = -1.0;
  BlochState init{0.0, 0.0, -1.0};

  // dimensionless inputs (mutually exclusive with delta/omega)
  std::optional<double> alpha;
  std::optional<double> alpha_r;  ///< 27 alpha
  std::optional<double> beta;

  double t0 = 0.0;
  double t1 = 50.0;
  double dt = 0.1;
  bool with_oracle = false;

  AxisRange alpha_range{0.0, 0.05, 50};
  AxisRange beta_range{0.0, 0.3, 50};
  std::size_t steps_per_unit = 200;

  std::size_t samples = 1000;
  double tolerance = 1e-6;
  double oracle_step = 1e-3;
  std::uint64_t seed = 20240917;

  std::optional<Format> format;  ///< default depends on the command
  std::string out;               ///< empty: standard output

  Format effective_format() const;

  /// True when (alpha | alpha_r, beta) were given.
  bool dimensionless_input() const;

  /// Bloch parameters from either input style. Throws InputError.
  BlochParams bloch_params() const;
};

/// Thrown by parse_command_line for --help, carrying the rendered usage.
struct HelpRequested {
  std::string text;
};

/// Parses `blochform <command> [options]`. Throws InputError with a
/// field-level message on any malformed or unknown input. The BLOCHFORM_SEED
/// environment variable, when set, fixes `seed`.
RunConfig parse_command_line(const std::vector<std::string>& args);

/// 17 significant digits in %g style; parses back to the identical double.
std::string format_double(double x);

/// Each returns the process exit code and writes the data product to `out`.
int run_solve(const RunConfig& cfg, std::ostream& out);
int run_trace(const RunConfig& cfg, std::ostream& out);
int run_classify(const RunConfig& cfg, std::ostream& out);
int run_map(const RunConfig& cfg, std::ostream& out);
int run_boundary(const RunConfig& cfg, std::ostream& out);
int run_validate(const RunConfig& cfg, std::ostream& out);

/// Dispatches `cfg.command`, writing to cfg.out or `stdout_stream`. Input
/// and certification failures are reported on `err` and mapped to exit codes.
int run(const RunConfig& cfg, std::ostream& stdout_stream, std::ostream& err);

/// Full entry point: parse + run.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blochform::cli
