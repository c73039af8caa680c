#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ffr/restriction.hpp"
#include "ffr/stein_tomas.hpp"

namespace ffr {

inline constexpr const char* kVersion = "0.1.0";

// Sweep parameters. One result series is produced per (q, seed) pair; the
// per-prime random draws use mix_seed(seed, p) so that runs are reproducible
// and independent of execution order.
struct ExperimentConfig {
  std::string mode = "sharpness";  // sharpness | boundedness | salem
  int n = 1;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> q_list;  // +infinity allowed
  std::int64_t prime_min = 3;
  std::int64_t prime_max = 3;
  int prime_count = 1;
  std::vector<std::uint64_t> seeds = {1};
  int restarts = 8;
  double epsilon = 0.05;  // lift for the alpha == beta case
  std::string output_path = "-";
  std::string format = "csv";
};

// Per-prime record. alpha/beta are the construction parameters actually used
// (after the epsilon lift, when it applies).
struct ScalingRow {
  std::int64_t p = 0;
  int n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double q = 0.0;
  std::int64_t a_size = 0;
  std::int64_t e_size = 0;
  std::int64_t ae_overlap = 0;
  std::int64_t bohr_size = 0;
  double alpha_eff = 0.0;
  double beta_eff = 0.0;
  double rstar_lb = 0.0;
  std::string witness_kind;
  std::uint64_t seed = 0;          // base seed of the series
  std::uint64_t derived_seed = 0;  // mix_seed(seed, p), the draw actually used
  double crit_q_eff = 0.0;         // critical exponent at the measured (alpha_eff, beta_eff)
};

struct ScalingResult {
  std::vector<ScalingRow> rows;  // ordered by p
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double tau_predicted = 0.0;
  double q = 0.0;
  std::uint64_t seed = 0;
};

struct SweepOutput {
  ExperimentConfig config;
  std::vector<ScalingResult> results;  // q-major, then seed order
  double wall_clock_sec = 0.0;         // elapsed run time; JSON-only, not in the CSV
};

struct SalemRow {
  std::int64_t p = 0;
  int n = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::int64_t e_size = 0;
  double max_offzero = 0.0;
  double bound = 0.0;
  bool ok = false;
};

struct SalemOutput {
  ExperimentConfig config;
  std::vector<SalemRow> rows;
};

// `count` primes approximately geometrically spaced in [lo, hi]: the nearest
// prime at or above each geometric grid point, pulled down to the largest
// prime <= hi when the grid point rounds past the top, deduplicated, sorted.
std::vector<std::int64_t> primes_in_range(std::int64_t lo, std::int64_t hi, int count);

std::int64_t next_prime_at_or_above(std::int64_t x);
std::int64_t prev_prime_at_or_below(std::int64_t x);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares on (ln p, ln value); values must be positive.
FitResult fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

// Throw std::invalid_argument on any violated config rule. Sharpness rejects
// weak-signal runs (tau < 0.05 or prime span < 10x): at desk scale the fitted
// slope of such a run is indistinguishable from the log-factor noise.
void validate_config(const ExperimentConfig& config);

// Effective (alpha, beta) after the lift: alpha' = alpha + epsilon, beta' = alpha
// when alpha == beta, unchanged otherwise.
std::pair<double, double> lifted_parameters(const ExperimentConfig& config);

SweepOutput run_sharpness(const ExperimentConfig& config);
SweepOutput run_boundedness(const ExperimentConfig& config);
SalemOutput run_salem(const ExperimentConfig& config);

// value -> string with 12 significant digits (the CSV number format)
std::string format_number(double v);

std::string results_to_csv(const SweepOutput& out);
nlohmann::json results_to_json(const SweepOutput& out);
SweepOutput results_from_json(const nlohmann::json& j);

std::string salem_to_csv(const SalemOutput& out);
nlohmann::json salem_to_json(const SalemOutput& out);

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

// Write CSV or JSON ("csv" | "json") to the path, "-" meaning stdout.
void emit_results(const SweepOutput& out, const std::string& path, const std::string& format);
void emit_salem(const SalemOutput& out, const std::string& path, const std::string& format);

}  // namespace ffr
