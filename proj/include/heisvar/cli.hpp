#pragma once

// Batch front end: parses command lines into a RunConfig and streams result
// rows as CSV or JSON.
//
// Every command emits rows with the columns
//   D,R,mean,variance,ratio,route,err_estimate,extra
// where `extra` holds route- or command-specific key=value pairs.
//
// Exit codes: 0 success, 2 usage error, 3 numeric guard or resource
// failure, 4 verification failure.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "heisvar/quadrature.hpp"
#include "heisvar/spectral.hpp"

namespace heisvar::cli {

enum class Command { mean, variance, ratio, expand, classify, sample, scan, verify };
enum class RouteChoice { bessel, hyp2f2, quadrature, spectral, montecarlo, all };
enum class OutputFormat { csv, json };

enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_numeric = 3, exit_verify = 4 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RadiusRange {
  double r_min = 1.0;
  double r_max = 10.0;
  int n_points = 10;
  bool log_spacing = true;
};

/// Defaults may be overridden through the environment:
///   HEISVAR_HYP2F2_REL_TOL   hyp2f2.rel_tol
///   HEISVAR_SPECTRUM_ABS_TOL spectrum.abs_tol (truncation of Bernoulli spectra)
///   HEISVAR_QUAD_REL_TOL     quadrature.rel_tol
///   HEISVAR_QUAD_ABS_TOL     quadrature.abs_tol
///   HEISVAR_QUAD_MAX_SUBDIV  quadrature.max_subdivisions
struct Tolerances {
  Accuracy hyp2f2{1e-10, 0.0};
  Accuracy spectrum{1e-15, 1e-16};
  QuadratureSpec quadrature;
};

struct RunConfig {
  Command command = Command::variance;
  int D = 1;
  std::optional<double> R;
  std::optional<RadiusRange> range;
  RouteChoice route = RouteChoice::bessel;
  WindowKind window = WindowKind::ball;
  std::uint64_t seed = 1;
  std::uint64_t n_samples = 0;
  int k_max = 5;
  OutputFormat output = OutputFormat::csv;
  unsigned threads = 0;  // 0: hardware concurrency; results do not depend on it
  Tolerances tol;

  /// Throws UsageError on inconsistent settings.
  void validate() const;
};

using ExtraValue = std::variant<double, std::uint64_t, std::string, std::vector<double>>;

struct ExtraField {
  std::string key;
  ExtraValue value;
};

struct OutputRow {
  int D = 1;
  double R = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double ratio = 0.0;
  std::string route;
  double err_estimate = 0.0;
  std::vector<ExtraField> extra;
};

/// Reads the HEISVAR_* variables into `tol`. Throws UsageError on
/// unparsable values.
void apply_environment(Tolerances& tol);

/// Parses argv (argv[0] is the program name). Throws UsageError, also for
/// --help.
RunConfig parse_command_line(int argc, const char* const* argv);

/// Executes a validated config, writing rows to `out` and diagnostics to
/// `err`. Returns an ExitCode; numeric exceptions propagate.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_command_line + run with every failure mapped to its exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// %.15g.
std::string format_number(double x);

}  // namespace heisvar::cli
