#include "ffr/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <stdexcept>

#include "ffr/rng.hpp"

namespace ffr {

using nlohmann::json;

std::int64_t next_prime_at_or_above(std::int64_t x) {
  if (x <= 2) return 2;
  if (x % 2 == 0) ++x;
  while (!is_prime(static_cast<std::uint64_t>(x))) x += 2;
  return x;
}

std::int64_t prev_prime_at_or_below(std::int64_t x) {
  if (x < 2) throw std::invalid_argument("prev_prime_at_or_below: no prime below 2");
  if (x == 2) return 2;
  if (x % 2 == 0) --x;
  while (x >= 3 && !is_prime(static_cast<std::uint64_t>(x))) x -= 2;
  return x >= 3 ? x : 2;
}

std::vector<std::int64_t> primes_in_range(std::int64_t lo, std::int64_t hi, int count) {
  if (!(3 <= lo && lo <= hi)) throw std::invalid_argument("primes_in_range: need 3 <= lo <= hi");
  if (count < 1) throw std::invalid_argument("primes_in_range: count must be >= 1");
  std::vector<std::int64_t> primes;
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(hi));
  for (int i = 0; i < count; ++i) {
    const double t = (count == 1) ? 0.0 : static_cast<double>(i) / (count - 1);
    const double grid = std::exp(llo + t * (lhi - llo));
    std::int64_t candidate = next_prime_at_or_above(static_cast<std::int64_t>(std::ceil(grid)));
    if (candidate > hi) candidate = prev_prime_at_or_below(hi);
    if (candidate < lo) {
      throw std::invalid_argument("primes_in_range: no prime in [lo, hi]");
    }
    primes.push_back(candidate);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  if (static_cast<int>(primes.size()) < count) {
    throw std::invalid_argument("primes_in_range: not enough distinct primes in range for the requested count");
  }
  return primes;
}

FitResult fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw std::invalid_argument("fit_loglog_slope: need at least 2 points");
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (const auto& [p, v] : points) {
    if (!(v > 0.0)) throw std::invalid_argument("fit_loglog_slope: values must be positive");
    sx += std::log(p);
    sy += std::log(v);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [p, v] : points) {
    const double dx = std::log(p) - mx;
    const double dy = std::log(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog_slope: all abscissae coincide");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (const auto& [p, v] : points) {
    const double r = std::log(v) - (fit.intercept + fit.slope * std::log(p));
    ss_res += r * r;
  }
  fit.r_squared = (syy <= 1e-30) ? 1.0 : std::max(0.0, 1.0 - ss_res / syy);
  return fit;
}

std::pair<double, double> lifted_parameters(const ExperimentConfig& config) {
  if (config.alpha == config.beta) {
    return {config.alpha + config.epsilon, config.alpha};
  }
  return {config.alpha, config.beta};
}

void validate_config(const ExperimentConfig& config) {
  if (config.n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (config.prime_min < 3) throw std::invalid_argument("config: prime_min must be >= 3");
  if (config.prime_min > config.prime_max) throw std::invalid_argument("config: prime_min > prime_max");
  if (config.seeds.empty()) throw std::invalid_argument("config: at least one seed required");
  if (config.format != "csv" && config.format != "json") {
    throw std::invalid_argument("config: format must be csv or json");
  }
  // every selected prime must respect the grid cap
  {
    std::int64_t size = 1;
    for (int i = 0; i < config.n; ++i) {
      if (size > kGridCap / config.prime_max) {
        throw std::invalid_argument("config: prime_max^n exceeds the grid cap of 2^26 entries");
      }
      size *= config.prime_max;
    }
  }
  if (config.mode == "salem") {
    if (!(config.alpha > 0.0 && config.alpha <= static_cast<double>(config.n))) {
      throw std::invalid_argument("config: salem mode needs 0 < alpha <= n");
    }
    if (config.prime_count < 1) throw std::invalid_argument("config: prime_count must be >= 1");
    return;
  }
  if (config.mode != "sharpness" && config.mode != "boundedness") {
    throw std::invalid_argument("config: unknown mode '" + config.mode + "'");
  }
  if (!(0.0 < config.beta && config.beta <= config.alpha && config.alpha < static_cast<double>(config.n))) {
    throw std::invalid_argument("config: need 0 < beta <= alpha < n");
  }
  if (config.q_list.empty()) throw std::invalid_argument("config: q_list must not be empty");
  if (config.prime_count < 4) {
    throw std::invalid_argument("config: scaling fits need at least 4 primes");
  }
  const auto [alpha, beta] = lifted_parameters(config);
  if (!(alpha < static_cast<double>(config.n))) {
    throw std::invalid_argument("config: alpha + epsilon must stay below n for the alpha == beta lift");
  }
  const double crit = critical_q(config.n, alpha, beta);
  for (double q : config.q_list) {
    if (!(q > 0.0)) throw std::invalid_argument("config: q must be positive");
    if (config.mode == "sharpness") {
      if (!(q < crit)) {
        throw std::invalid_argument("config: sharpness mode needs q below the critical exponent " +
                                    format_number(crit));
      }
      const double tau = sharpness_tau(config.n, alpha, beta, q);
      if (tau < 0.05) {
        throw std::invalid_argument(
            "config: predicted exponent tau = " + format_number(tau) +
            " is below 0.05; the signal would drown in log factors. Raise alpha-beta contrast or lower q.");
      }
      if (static_cast<double>(config.prime_max) < 10.0 * static_cast<double>(config.prime_min)) {
        throw std::invalid_argument(
            "config: sharpness fits need a prime span of at least 10x; widen [prime_min, prime_max].");
      }
    } else {
      if (std::isinf(q)) continue;
      // tolerance admits the endpoint q = q_crit despite rounding in crit
      if (q < crit - 1e-9 * std::max(1.0, crit)) {
        throw std::invalid_argument("config: boundedness mode needs q at or above the critical exponent " +
                                    format_number(crit));
      }
    }
  }
}

namespace {

ScalingRow sweep_row(const ExperimentConfig& config, std::int64_t p, double alpha, double beta, double q,
                     std::uint64_t base_seed, bool iterate) {
  Field field(p);
  const PointSet a = cube_set(field, config.n, alpha, beta);
  const std::uint64_t derived = mix_seed(base_seed, static_cast<std::uint64_t>(p));
  const PointSet e = random_set(field, config.n, alpha, derived);
  const Measure mu = combined_measure(a, e);
  const SpectralReport report = spectral_report(mu);
  const PointSet bohr = bohr_set(a);

  ScalingRow row;
  row.p = p;
  row.n = config.n;
  row.alpha = alpha;
  row.beta = beta;
  row.q = q;
  row.a_size = a.size();
  row.e_size = e.size();
  row.ae_overlap = mu.meta().overlap_ae;
  row.bohr_size = bohr.size();
  row.alpha_eff = report.alpha_eff;
  row.beta_eff = report.beta_eff;
  row.seed = base_seed;
  row.derived_seed = derived;
  row.crit_q_eff =
      std::isinf(report.beta_eff) ? 2.0 : critical_q(config.n, report.alpha_eff, report.beta_eff);
  if (iterate) {
    IterateOptions opts;
    opts.restarts = config.restarts;
    opts.seed = derived;
    const RStarEstimate est = rstar_lower_iterate(mu, Exponent(q), opts);
    row.rstar_lb = est.value;
    row.witness_kind = "iterated";
  } else {
    const RStarEstimate est = rstar_witness_cube(mu, Exponent(q));
    row.rstar_lb = est.value;
    row.witness_kind = "cube";
  }
  return row;
}

SweepOutput run_sweep(const ExperimentConfig& config, bool iterate) {
  validate_config(config);
  const auto t0 = std::chrono::steady_clock::now();
  const auto [alpha, beta] = lifted_parameters(config);
  const auto primes = primes_in_range(config.prime_min, config.prime_max, config.prime_count);
  SweepOutput out;
  out.config = config;
  for (double q : config.q_list) {
    for (std::uint64_t seed : config.seeds) {
      ScalingResult result;
      result.q = q;
      result.seed = seed;
      result.tau_predicted = sharpness_tau(config.n, alpha, beta, q);
      std::vector<std::pair<double, double>> points;
      for (std::int64_t p : primes) {
        ScalingRow row = sweep_row(config, p, alpha, beta, q, seed, iterate);
        points.emplace_back(static_cast<double>(p), row.rstar_lb);
        result.rows.push_back(std::move(row));
      }
      const FitResult fit = fit_loglog_slope(points);
      result.slope = fit.slope;
      result.intercept = fit.intercept;
      result.r_squared = fit.r_squared;
      out.results.push_back(std::move(result));
    }
  }
  out.wall_clock_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

SweepOutput run_sharpness(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.mode = "sharpness";
  return run_sweep(c, /*iterate=*/false);
}

SweepOutput run_boundedness(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.mode = "boundedness";
  return run_sweep(c, /*iterate=*/true);
}

SalemOutput run_salem(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.mode = "salem";
  validate_config(c);
  const auto primes = primes_in_range(c.prime_min, c.prime_max, c.prime_count);
  SalemOutput out;
  out.config = c;
  for (std::int64_t p : primes) {
    Field field(p);
    for (std::uint64_t seed : c.seeds) {
      const PointSet e = random_set(field, c.n, c.alpha, seed);
      const SalemCheck check = salem_check(e);
      SalemRow row;
      row.p = p;
      row.n = c.n;
      row.alpha = c.alpha;
      row.seed = seed;
      row.e_size = e.size();
      row.max_offzero = check.max_offzero;
      row.bound = check.bound;
      row.ok = check.ok;
      out.rows.push_back(row);
    }
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string results_to_csv(const SweepOutput& out) {
  std::string csv =
      "p,n,alpha,beta,q,A_size,E_size,AE_overlap,bohr_size,alpha_eff,beta_eff,rstar_lb,witness_kind,seed\n";
  for (const ScalingResult& result : out.results) {
    for (const ScalingRow& r : result.rows) {
      csv += std::to_string(r.p) + ',' + std::to_string(r.n) + ',' + format_number(r.alpha) + ',' +
             format_number(r.beta) + ',' + format_number(r.q) + ',' + std::to_string(r.a_size) + ',' +
             std::to_string(r.e_size) + ',' + std::to_string(r.ae_overlap) + ',' + std::to_string(r.bohr_size) +
             ',' + format_number(r.alpha_eff) + ',' + format_number(r.beta_eff) + ',' +
             format_number(r.rstar_lb) + ',' + r.witness_kind + ',' + std::to_string(r.seed) + '\n';
    }
  }
  return csv;
}

json config_to_json(const ExperimentConfig& config) {
  return json{{"mode", config.mode},
              {"n", config.n},
              {"alpha", config.alpha},
              {"beta", config.beta},
              {"q_list", config.q_list},
              {"prime_min", config.prime_min},
              {"prime_max", config.prime_max},
              {"prime_count", config.prime_count},
              {"seeds", config.seeds},
              {"restarts", config.restarts},
              {"epsilon", config.epsilon},
              {"output_path", config.output_path},
              {"format", config.format}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig config;
  config.mode = j.value("mode", config.mode);
  config.n = j.value("n", config.n);
  config.alpha = j.value("alpha", config.alpha);
  config.beta = j.value("beta", config.beta);
  if (j.contains("q_list")) config.q_list = j.at("q_list").get<std::vector<double>>();
  if (j.contains("q")) config.q_list = {j.at("q").get<double>()};
  config.prime_min = j.value("prime_min", config.prime_min);
  config.prime_max = j.value("prime_max", config.prime_max);
  config.prime_count = j.value("prime_count", config.prime_count);
  if (j.contains("seeds")) config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  config.restarts = j.value("restarts", config.restarts);
  config.epsilon = j.value("epsilon", config.epsilon);
  config.output_path = j.value("output_path", config.output_path);
  config.format = j.value("format", config.format);
  return config;
}

namespace {

json row_to_json(const ScalingRow& r) {
  return json{{"p", r.p},
              {"n", r.n},
              {"alpha", r.alpha},
              {"beta", r.beta},
              {"q", r.q},
              {"A_size", r.a_size},
              {"E_size", r.e_size},
              {"AE_overlap", r.ae_overlap},
              {"bohr_size", r.bohr_size},
              {"alpha_eff", r.alpha_eff},
              {"beta_eff", r.beta_eff},
              {"rstar_lb", r.rstar_lb},
              {"witness_kind", r.witness_kind},
              {"seed", r.seed},
              {"derived_seed", r.derived_seed},
              {"crit_q_eff", r.crit_q_eff}};
}

ScalingRow row_from_json(const json& j) {
  ScalingRow r;
  r.p = j.at("p").get<std::int64_t>();
  r.n = j.at("n").get<int>();
  r.alpha = j.at("alpha").get<double>();
  r.beta = j.at("beta").get<double>();
  r.q = j.at("q").get<double>();
  r.a_size = j.at("A_size").get<std::int64_t>();
  r.e_size = j.at("E_size").get<std::int64_t>();
  r.ae_overlap = j.at("AE_overlap").get<std::int64_t>();
  r.bohr_size = j.at("bohr_size").get<std::int64_t>();
  r.alpha_eff = j.at("alpha_eff").get<double>();
  r.beta_eff = j.at("beta_eff").get<double>();
  r.rstar_lb = j.at("rstar_lb").get<double>();
  r.witness_kind = j.at("witness_kind").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.derived_seed = j.at("derived_seed").get<std::uint64_t>();
  r.crit_q_eff = j.at("crit_q_eff").get<double>();
  return r;
}

}  // namespace

json results_to_json(const SweepOutput& out) {
  json results = json::array();
  for (const ScalingResult& result : out.results) {
    json rows = json::array();
    for (const ScalingRow& r : result.rows) rows.push_back(row_to_json(r));
    results.push_back(json{{"q", result.q},
                           {"seed", result.seed},
                           {"slope", result.slope},
                           {"intercept", result.intercept},
                           {"r_squared", result.r_squared},
                           {"tau_predicted", result.tau_predicted},
                           {"rows", rows}});
  }
  return json{{"config", config_to_json(out.config)},
              {"generator", Rng::generator_name()},
              {"version", kVersion},
              {"wall_clock_sec", out.wall_clock_sec},
              {"results", results}};
}

SweepOutput results_from_json(const json& j) {
  SweepOutput out;
  out.config = config_from_json(j.at("config"));
  out.wall_clock_sec = j.value("wall_clock_sec", 0.0);
  for (const json& rj : j.at("results")) {
    ScalingResult result;
    result.q = rj.at("q").get<double>();
    result.seed = rj.at("seed").get<std::uint64_t>();
    result.slope = rj.at("slope").get<double>();
    result.intercept = rj.at("intercept").get<double>();
    result.r_squared = rj.at("r_squared").get<double>();
    result.tau_predicted = rj.at("tau_predicted").get<double>();
    for (const json& rowj : rj.at("rows")) result.rows.push_back(row_from_json(rowj));
    out.results.push_back(std::move(result));
  }
  return out;
}

std::string salem_to_csv(const SalemOutput& out) {
  std::string csv = "p,n,alpha,seed,E_size,max_offzero,bound,pass\n";
  for (const SalemRow& r : out.rows) {
    csv += std::to_string(r.p) + ',' + std::to_string(r.n) + ',' + format_number(r.alpha) + ',' +
           std::to_string(r.seed) + ',' + std::to_string(r.e_size) + ',' + format_number(r.max_offzero) +
           ',' + format_number(r.bound) + ',' + (r.ok ? "1" : "0") + '\n';
  }
  return csv;
}

json salem_to_json(const SalemOutput& out) {
  json rows = json::array();
  for (const SalemRow& r : out.rows) {
    rows.push_back(json{{"p", r.p},
                        {"n", r.n},
                        {"alpha", r.alpha},
                        {"seed", r.seed},
                        {"E_size", r.e_size},
                        {"max_offzero", r.max_offzero},
                        {"bound", r.bound},
                        {"pass", r.ok}});
  }
  return json{{"config", config_to_json(out.config)},
              {"generator", Rng::generator_name()},
              {"version", kVersion},
              {"rows", rows}};
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit: cannot open " + path);
  out << text;
  if (!out) throw std::runtime_error("emit: write failure on " + path);
}

}  // namespace

void emit_results(const SweepOutput& out, const std::string& path, const std::string& format) {
  if (format == "csv") {
    write_text(path, results_to_csv(out));
  } else if (format == "json") {
    write_text(path, results_to_json(out).dump(2) + "\n");
  } else {
    throw std::invalid_argument("emit_results: format must be csv or json");
  }
}

void emit_salem(const SalemOutput& out, const std::string& path, const std::string& format) {
  if (format == "csv") {
    write_text(path, salem_to_csv(out));
  } else if (format == "json") {
    write_text(path, salem_to_json(out).dump(2) + "\n");
  } else {
    throw std::invalid_argument("emit_salem: format must be csv or json");
  }
}

}  // namespace ffr
