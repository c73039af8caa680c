#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ffr/experiments.hpp"

using namespace ffr;

TEST_CASE("primes_in_range") {
  SUBCASE("single point") {
    const auto primes = primes_in_range(101, 101, 1);
    CHECK(primes == std::vector<std::int64_t>{101});
  }
  SUBCASE("documented rule on [100, 1000] with count 3") {
    // grid points 100, 316.2, 1000 -> 101, 317, next(1000)=1009 pulled down to 997
    const auto primes = primes_in_range(100, 1000, 3);
    CHECK(primes == std::vector<std::int64_t>{101, 317, 997});
  }
  SUBCASE("outputs always prime and inside the range") {
    const auto primes = primes_in_range(200, 5000, 8);
    CHECK(primes.size() == 8);
    for (std::int64_t p : primes) {
      CHECK(is_prime(static_cast<std::uint64_t>(p)));
      CHECK(p >= 200);
      CHECK(p <= 5000);
    }
    CHECK(std::is_sorted(primes.begin(), primes.end()));
  }
  SUBCASE("not enough primes") {
    CHECK_THROWS_AS(primes_in_range(114, 126, 3), std::invalid_argument);  // empty prime range
    CHECK_THROWS_AS(primes_in_range(101, 102, 3), std::invalid_argument);  // dedups to one
    CHECK_THROWS_AS(primes_in_range(2, 10, 1), std::invalid_argument);     // lo below 3
  }
}

TEST_CASE("fit_loglog_slope") {
  SUBCASE("exact power law") {
    std::vector<std::pair<double, double>> pts;
    for (double p : {101.0, 211.0, 401.0}) pts.emplace_back(p, std::pow(p, 0.5));
    const FitResult fit = fit_loglog_slope(pts);
    CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("constant values give slope 0") {
    std::vector<std::pair<double, double>> pts = {{101.0, 2.5}, {211.0, 2.5}, {401.0, 2.5}};
    const FitResult fit = fit_loglog_slope(pts);
    CHECK(fit.slope == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fit.r_squared == doctest::Approx(1.0));
  }
  SUBCASE("scaled power law recovers slope and intercept") {
    std::vector<std::pair<double, double>> pts;
    for (double p : {101.0, 199.0, 401.0, 809.0}) pts.emplace_back(p, 3.0 * std::pow(p, 1.0 / 16.0));
    const FitResult fit = fit_loglog_slope(pts);
    CHECK(fit.slope == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  }
  SUBCASE("rejects nonpositive values and short inputs") {
    CHECK_THROWS_AS(fit_loglog_slope({{101.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog_slope({{101.0, 1.0}, {211.0, 0.0}}), std::invalid_argument);
  }
}

namespace {

ExperimentConfig small_sharpness_config() {
  ExperimentConfig config;
  config.mode = "sharpness";
  config.n = 1;
  config.alpha = 0.6;
  config.beta = 0.4;
  config.q_list = {3.0};
  config.prime_min = 23;
  config.prime_max = 311;
  config.prime_count = 4;
  config.seeds = {1};
  return config;
}

}  // namespace

TEST_CASE("config validation") {
  SUBCASE("weak tau rejected") {
    ExperimentConfig config = small_sharpness_config();
    config.q_list = {5.8};  // tau = (4 - 2.4 + 0.8 - 2.32)/23.2 = 0.0034
    CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  }
  SUBCASE("narrow prime span rejected for sharpness") {
    ExperimentConfig config = small_sharpness_config();
    config.prime_max = 101;
    CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  }
  SUBCASE("beta above alpha rejected") {
    ExperimentConfig config = small_sharpness_config();
    config.beta = 0.7;
    CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  }
  SUBCASE("sharpness q must be below critical") {
    ExperimentConfig config = small_sharpness_config();
    config.q_list = {6.0};  // critical_q(1, 0.6, 0.4) = 6
    CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  }
  SUBCASE("boundedness q must be at or above critical") {
    ExperimentConfig config = small_sharpness_config();
    config.mode = "boundedness";
    config.q_list = {3.0};
    CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
    config.q_list = {6.0};
    CHECK_NOTHROW(validate_config(config));
  }
  SUBCASE("too few primes for a fit") {
    ExperimentConfig config = small_sharpness_config();
    config.prime_count = 3;
    CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  }
  SUBCASE("grid cap applies to prime_max^n") {
    ExperimentConfig config = small_sharpness_config();
    config.n = 2;
    config.alpha = 1.2;
    config.beta = 0.8;
    config.prime_max = 1 << 14;
    CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  }
  SUBCASE("alpha == beta lift") {
    ExperimentConfig config = small_sharpness_config();
    config.alpha = config.beta = 0.5;
    config.epsilon = 0.05;
    const auto [alpha, beta] = lifted_parameters(config);
    CHECK(alpha == doctest::Approx(0.55));
    CHECK(beta == doctest::Approx(0.5));
  }
}

TEST_CASE("run_sharpness on a small fixture") {
  const ExperimentConfig config = small_sharpness_config();
  const SweepOutput out = run_sharpness(config);
  REQUIRE(out.results.size() == 1);
  const ScalingResult& result = out.results[0];
  CHECK(result.tau_predicted == doctest::Approx(0.1));
  REQUIRE(result.rows.size() == 4);
  std::int64_t prev_p = 0;
  for (const ScalingRow& row : result.rows) {
    CHECK(row.p > prev_p);
    prev_p = row.p;
    CHECK(row.rstar_lb > 0.0);
    CHECK(row.witness_kind == "cube");
    CHECK(row.a_size > 0);
    CHECK(row.e_size > 0);
    // Bohr set dominates the balanced box count from the lemma
    const std::int64_t radius = static_cast<std::int64_t>(
        static_cast<double>(row.p) / (10.0 * row.n * std::llround(std::pow(
                                                       static_cast<double>(row.p),
                                                       (row.alpha - row.beta / 2.0) / row.n))));
    CHECK(row.bohr_size >= 2 * radius + 1);
  }
  CHECK(std::isfinite(result.slope));
  CHECK(result.r_squared >= 0.0);
  CHECK(result.r_squared <= 1.0);
}

TEST_CASE("run_sharpness lifts alpha == beta before construction") {
  ExperimentConfig config = small_sharpness_config();
  config.alpha = config.beta = 0.5;
  config.epsilon = 0.05;
  config.q_list = {3.0};  // critical_q(1, 0.55, 0.5) = 5.6
  const SweepOutput out = run_sharpness(config);
  REQUIRE(out.results.size() == 1);
  CHECK(out.results[0].tau_predicted == doctest::Approx(sharpness_tau(1, 0.55, 0.5, 3.0)));
  for (const ScalingRow& row : out.results[0].rows) {
    CHECK(row.alpha == doctest::Approx(0.55));  // construction used the lifted value
    CHECK(row.beta == doctest::Approx(0.5));
    CHECK(row.rstar_lb > 0.0);
  }
  // config echo keeps the requested parameters
  CHECK(out.config.alpha == doctest::Approx(0.5));
  CHECK(out.config.beta == doctest::Approx(0.5));
}

TEST_CASE("run_boundedness on a small fixture") {
  ExperimentConfig config = small_sharpness_config();
  config.mode = "boundedness";
  config.q_list = {8.0};
  config.restarts = 2;
  const SweepOutput out = run_boundedness(config);
  REQUIRE(out.results.size() == 1);
  for (const ScalingRow& row : out.results[0].rows) {
    CHECK(row.witness_kind == "iterated");
    CHECK(row.rstar_lb > 0.0);
    CHECK(row.q == 8.0);
  }
}

TEST_CASE("csv emission") {
  SUBCASE("empty output is header-only") {
    SweepOutput out;
    const std::string csv = results_to_csv(out);
    CHECK(csv ==
          "p,n,alpha,beta,q,A_size,E_size,AE_overlap,bohr_size,alpha_eff,beta_eff,rstar_lb,witness_kind,seed\n");
  }
  SUBCASE("every row has exactly 14 fields") {
    const SweepOutput out = run_sharpness(small_sharpness_config());
    std::istringstream csv(results_to_csv(out));
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) {
      ++lines;
      CHECK(std::count(line.begin(), line.end(), ',') == 13);
    }
    CHECK(lines == 5);  // header + 4 rows
  }
  SUBCASE("identical configs produce byte-identical csv") {
    const std::string a = results_to_csv(run_sharpness(small_sharpness_config()));
    const std::string b = results_to_csv(run_sharpness(small_sharpness_config()));
    CHECK(a == b);
  }
}

TEST_CASE("json round trip") {
  const SweepOutput out = run_sharpness(small_sharpness_config());
  const nlohmann::json j = results_to_json(out);
  CHECK(j.at("generator") == "mt19937_64/u53-boxmuller");
  CHECK(j.at("version") == std::string(kVersion));
  CHECK(j.contains("wall_clock_sec"));
  const SweepOutput back = results_from_json(j);
  REQUIRE(back.results.size() == out.results.size());
  CHECK(back.config.mode == out.config.mode);
  CHECK(back.config.alpha == out.config.alpha);
  CHECK(back.config.seeds == out.config.seeds);
  CHECK(back.wall_clock_sec == out.wall_clock_sec);
  for (std::size_t i = 0; i < out.results.size(); ++i) {
    const ScalingResult& x = out.results[i];
    const ScalingResult& y = back.results[i];
    CHECK(x.slope == y.slope);
    CHECK(x.intercept == y.intercept);
    CHECK(x.r_squared == y.r_squared);
    CHECK(x.tau_predicted == y.tau_predicted);
    CHECK(x.q == y.q);
    CHECK(x.seed == y.seed);
    REQUIRE(x.rows.size() == y.rows.size());
    for (std::size_t r = 0; r < x.rows.size(); ++r) {
      CHECK(x.rows[r].p == y.rows[r].p);
      CHECK(x.rows[r].rstar_lb == y.rows[r].rstar_lb);
      CHECK(x.rows[r].alpha_eff == y.rows[r].alpha_eff);
      CHECK(x.rows[r].beta_eff == y.rows[r].beta_eff);
      CHECK(x.rows[r].bohr_size == y.rows[r].bohr_size);
      CHECK(x.rows[r].witness_kind == y.rows[r].witness_kind);
      CHECK(x.rows[r].derived_seed == y.rows[r].derived_seed);
    }
  }
}

TEST_CASE("effective exponents track the requested ones at large p") {
  // alpha_eff >= alpha - 0.1 and beta_eff >= beta - 0.25 for p >= 500; the
  // beta slack absorbs the sqrt(log) factor of the random part at desk scale
  ExperimentConfig config = small_sharpness_config();
  config.prime_min = 200;
  config.prime_max = 5000;
  config.prime_count = 8;
  config.seeds = {2, 6, 7};
  const SweepOutput out = run_sharpness(config);
  for (const ScalingResult& result : out.results) {
    for (const ScalingRow& row : result.rows) {
      if (row.p < 500) continue;
      INFO("seed=" << row.seed << " p=" << row.p);
      CHECK(row.alpha_eff >= config.alpha - 0.1);
      CHECK(row.beta_eff >= config.beta - 0.25);
    }
  }
}

TEST_CASE("salem sweep") {
  ExperimentConfig config;
  config.mode = "salem";
  config.n = 1;
  config.alpha = 0.6;
  config.prime_min = 101;
  config.prime_max = 101;
  config.prime_count = 1;
  config.seeds = {1, 2, 3};
  const SalemOutput out = run_salem(config);
  REQUIRE(out.rows.size() == 3);
  for (const SalemRow& row : out.rows) {
    CHECK(row.p == 101);
    CHECK(row.e_size > 0);
    CHECK(row.bound > 0.0);
  }
  const std::string csv = salem_to_csv(out);
  CHECK(csv.rfind("p,n,alpha,seed,E_size,max_offzero,bound,pass\n", 0) == 0);
}

TEST_CASE("number formatting uses 12 significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
}
