#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fockbridge/bridge.hpp"
#include "fockbridge/dynamics.hpp"

namespace fockbridge {

// Raised for anything wrong with a config before its experiment runs:
// JSON syntax, unknown fields or kinds, grammar errors in embedded
// polynomials, inconsistent dimensions. Maps to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// One verify-algebra case: op is "rewrite" or "normal-product"; input and
// expected are operator-grammar strings; expected is the exact canonical
// text the reduction must produce.
struct AlgebraCase {
  std::string op;
  std::string input;
  std::string expected;
};

// A parsed experiment description. Polynomials stay as grammar text so a
// config survives a round trip; they are parsed again at run time.
struct ExperimentConfig {
  std::string name;
  std::string kind;
  int modes = 1;
  int cutoff = 0; // 0 means auto via cutoff_estimate
  double cutoff_tolerance = 1e-12;
  double max_amplitude = 0.0; // 0 means derive from the distribution
  std::string hamiltonian;
  std::string observable;
  int mode_index = 1;
  FieldKind field = FieldKind::phi;
  bool has_distribution = false;
  DistributionSpec distribution;
  int sample_count = 1;
  std::uint64_t seed = 0;
  double t = 0.0;
  double dt = 1e-3;
  double fd_step = 1e-4;
  IntegrationMethod method = IntegrationMethod::rk4;
  std::vector<std::pair<double, double>> times; // extended-survey grid
  bool expect_anomaly = false; // eq10-gap: pass iff gap > 10x tolerance
  std::vector<AlgebraCase> algebra;
  std::string output; // optional output directory from the config
};

// Parses and validates a config document. fallback_name fills in when the
// config has no "name" field (the CLI passes the file stem). Throws
// ConfigError with line/column positions for JSON errors and grammar
// offsets for polynomial errors.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& fallback_name);

// One equivalence check inside a run. passed means abs_gap <= tolerance,
// except for anomaly checks where it means abs_gap > 10x the layered
// estimate. Algebra checks carry the produced and expected text instead
// of numeric sides.
struct CheckResult {
  std::string check;
  cplx lhs{};
  cplx rhs{};
  double abs_gap = 0.0;
  double float_estimate = 0.0;
  double truncation_estimate = 0.0;
  double mc_estimate = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string lhs_text;
  std::string rhs_text;
};

struct RunResult {
  std::string name;
  std::string kind;
  int modes = 0;
  int cutoff = 0;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  std::string survey; // extended-survey CSV body, empty otherwise
  bool passed = false;
};

// Executes one experiment. Deterministic given the config (all randomness
// flows through the distribution seed). Throws ConfigError for anything
// parse_config missed and std::runtime_error with experiment context for
// numeric failures.
RunResult run_experiment(const ExperimentConfig& config);

// Report body. The timestamp argument lands in the single "timestamp"
// field and is the only run-to-run varying byte; everything else is a
// pure function of the result.
std::string report_json(const RunResult& r, const std::string& timestamp);

// One CSV row per check; extended-survey emits its commutator table
// instead.
std::string summary_csv(const RunResult& r);

// Runs the config file and writes <name>.report.json plus
// <name>.summary.csv under out_root. Returns 0 when every check passed,
// 1 when one failed, 2 for config errors (message written to *error).
int run_config_file(const std::filesystem::path& config_path,
                    const std::filesystem::path& out_root,
                    std::string* error);

// Runs every *.json in the directory in filename order, writes the
// per-config files plus aggregate.json and aggregate.csv. Exit code is
// the worst per-config code (2 beats 1 beats 0); an empty directory is a
// pass.
int run_suite(const std::filesystem::path& config_dir,
              const std::filesystem::path& out_root, std::string* error);

// Output root precedence: explicit CLI path, then the FOCKBRIDGE_OUTPUT_ROOT
// environment variable, then the config's own output field, then ".".
std::filesystem::path resolve_output_root(const std::string& cli_path,
                                          const std::string& config_output);

} // namespace fockbridge
