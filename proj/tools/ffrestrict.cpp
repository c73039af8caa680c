// ffrestrict: build measures on F_p^n, diagnose their Fourier behavior, and
// run extension-norm scaling experiments.
//
// Exit codes: 0 success, 1 configuration error, 2 violated invariant or
// failed self-check.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffr/experiments.hpp"
#include "ffr/rng.hpp"

using nlohmann::json;

namespace {

struct MeasureSpec {
  std::string kind = "combined";  // uniform | cube | random | combined | paraboloid | delta
  std::int64_t p = 101;
  int n = 1;
  double alpha = 0.6;
  double beta = 0.4;
  std::uint64_t seed = 1;
  std::int64_t delta_index = 0;
  std::string grid_file;  // when set, weights are loaded instead of constructed
};

void add_measure_flags(CLI::App* cmd, MeasureSpec& spec) {
  cmd->add_option("--kind", spec.kind, "uniform|cube|random|combined|paraboloid|delta")
      ->check(CLI::IsMember({"uniform", "cube", "random", "combined", "paraboloid", "delta"}));
  cmd->add_option("-p,--prime", spec.p, "prime modulus");
  cmd->add_option("-n,--dim", spec.n, "ambient dimension");
  cmd->add_option("--alpha", spec.alpha, "regularity exponent");
  cmd->add_option("--beta", spec.beta, "decay exponent");
  cmd->add_option("--seed", spec.seed, "seed for random constructions");
  cmd->add_option("--delta-index", spec.delta_index, "atom location for kind=delta");
  cmd->add_option("--grid", spec.grid_file, "load weights from a grid file instead of constructing");
}

ffr::Measure build_measure(const MeasureSpec& spec) {
  if (!spec.grid_file.empty()) {
    ffr::GridFn weights = ffr::read_gridfn_file(spec.grid_file);
    ffr::ConstructionMeta meta;
    meta.kind = "custom";
    meta.n = weights.dim();
    return ffr::Measure(std::move(weights), std::move(meta));
  }
  ffr::Field field(spec.p);
  if (spec.kind == "uniform") return ffr::uniform_measure(field, spec.n);
  if (spec.kind == "delta") return ffr::delta_measure(field, spec.n, spec.delta_index);
  if (spec.kind == "cube") return ffr::set_measure(ffr::cube_set(field, spec.n, spec.alpha, spec.beta), "cube");
  if (spec.kind == "random") {
    return ffr::set_measure(ffr::random_set(field, spec.n, spec.alpha, spec.seed), "random");
  }
  if (spec.kind == "paraboloid") return ffr::set_measure(ffr::paraboloid_set(field, spec.n), "paraboloid");
  // combined
  const ffr::PointSet a = ffr::cube_set(field, spec.n, spec.alpha, spec.beta);
  const ffr::PointSet e = ffr::random_set(field, spec.n, spec.alpha, spec.seed);
  return ffr::combined_measure(a, e);
}

json meta_to_json(const ffr::ConstructionMeta& meta) {
  return json{{"kind", meta.kind},
              {"n", meta.n},
              {"alpha", meta.alpha},
              {"beta", meta.beta},
              {"cube_side", meta.cube_side},
              {"delta", meta.delta},
              {"seed_requested", meta.seed_requested},
              {"seed_used", meta.seed_used},
              {"retries", meta.retries},
              {"generator", meta.generator},
              {"A_size", meta.size_a},
              {"E_size", meta.size_e},
              {"AE_overlap", meta.overlap_ae},
              {"eta_warning", meta.eta_warning}};
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output path " + path);
  out << text;
}

json rstar_to_json(const ffr::RStarEstimate& est) {
  json j{{"p_exp", est.p_exp.is_inf() ? json("inf") : json(est.p_exp.value())},
         {"q", est.q.is_inf() ? json("inf") : json(est.q.value())},
         {"value", est.value},
         {"kind", ffr::to_string(est.kind)},
         {"iterations", est.iterations},
         {"converged", est.converged},
         {"seed", est.seed},
         {"numerator", est.numerator},
         {"denominator", est.denominator}};
  if (est.cross_check) j["cross_check"] = *est.cross_check;
  return j;
}

ffr::Exponent parse_exponent(const std::string& text) {
  if (text == "inf" || text == "INF" || text == "Inf") return ffr::Exponent::inf();
  return ffr::Exponent(std::stod(text));
}

// Fourier identity sweep used by `selftest`; returns the number of failures.
int run_selftest(bool quick) {
  struct GridCase {
    std::int64_t p;
    int n;
  };
  std::vector<GridCase> cases = {{3, 1}, {5, 1}, {7, 1}, {101, 1}, {3, 2}, {5, 2}, {7, 2}, {13, 3}};
  if (!quick) cases.push_back({101, 2});
  const int trials = quick ? 10 : 100;
  int failures = 0;
  for (const auto& gc : cases) {
    ffr::Field field(gc.p);
    const std::int64_t total = ffr::grid_size(field, gc.n);
    const double pn = static_cast<double>(total);
    double worst = 0.0;
    ffr::Rng rng(ffr::mix_seed(7, static_cast<std::uint64_t>(gc.p * 100 + gc.n)));
    for (int t = 0; t < trials; ++t) {
      ffr::GridFn f(field, gc.n);
      ffr::GridFn g(field, gc.n);
      for (std::int64_t i = 0; i < total; ++i) {
        f.values()[i] = rng.gauss_complex();
        g.values()[i] = rng.gauss_complex();
      }
      const ffr::GridFn fh = ffr::dft(f);
      const ffr::GridFn gh = ffr::dft(g);
      // Plancherel
      const double lhs = ffr::kahan_sum(fh.values().abs2());
      const double rhs = pn * ffr::kahan_sum(f.values().abs2());
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
      // inversion
      ffr::GridFn inv = ffr::idft(fh);
      inv.values() -= pn * f.values();
      worst = std::max(worst, std::sqrt(ffr::kahan_sum(inv.values().abs2())) /
                                  (pn * std::sqrt(ffr::kahan_sum(f.values().abs2()))));
      // convolution theorem via the fast path
      const ffr::GridFn conv = ffr::convolve(f, g);
      ffr::GridFn lhs_c = ffr::dft(conv);
      lhs_c.values() -= fh.values() * gh.values();
      worst = std::max(worst, std::sqrt(ffr::kahan_sum(lhs_c.values().abs2())) /
                                  std::sqrt(ffr::kahan_sum((fh.values() * gh.values()).abs2())));
      // symmetry
      const ffr::cplx s1 = (fh.values() * g.values()).sum();
      const ffr::cplx s2 = (f.values() * gh.values()).sum();
      worst = std::max(worst, std::abs(s1 - s2) / std::abs(s1));
    }
    // sweep against the defining double sum on small grids
    if (total <= 2500) {
      ffr::GridFn f(field, gc.n);
      for (std::int64_t i = 0; i < total; ++i) f.values()[i] = rng.gauss_complex();
      ffr::GridFn a = ffr::dft(f);
      const ffr::GridFn b = ffr::dft_reference(f);
      a.values() -= b.values();
      worst = std::max(worst, std::sqrt(ffr::kahan_sum(a.values().abs2())) /
                                  std::sqrt(ffr::kahan_sum(b.values().abs2())));
    }
    const bool ok = worst < 1e-9;
    if (!ok) ++failures;
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " p=" << gc.p << " n=" << gc.n
              << " max relative error " << ffr::format_number(worst) << "\n";
  }
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-field extension/restriction estimate toolkit"};
  app.require_subcommand(1);

  // ---- selftest ----------------------------------------------------------
  auto* selftest = app.add_subcommand("selftest", "run the Fourier identity suite");
  bool quick = false;
  selftest->add_flag("--quick", quick, "fewer trials, small grids only");

  // ---- construct ---------------------------------------------------------
  auto* construct = app.add_subcommand("construct", "build a measure and write grid/meta files");
  MeasureSpec construct_spec;
  add_measure_flags(construct, construct_spec);
  std::string out_prefix = "measure";
  construct->add_option("-o,--output", out_prefix, "output prefix (<prefix>.grid, <prefix>.meta.json)");

  // ---- diagnose ----------------------------------------------------------
  auto* diagnose = app.add_subcommand("diagnose", "spectral report, support/decay and kernel bounds");
  MeasureSpec diagnose_spec;
  add_measure_flags(diagnose, diagnose_spec);
  std::string diagnose_out = "-";
  diagnose->add_option("-o,--output", diagnose_out, "output path, - for stdout");

  // ---- rstar -------------------------------------------------------------
  auto* rstar = app.add_subcommand("rstar", "extension-norm estimates for one measure");
  MeasureSpec rstar_spec;
  add_measure_flags(rstar, rstar_spec);
  std::string rstar_q = "2";
  int rstar_restarts = 8;
  std::string rstar_out = "-";
  std::string witness_out;
  rstar->add_option("-q,--q", rstar_q, "target exponent q >= 2, or 'inf'");
  rstar->add_option("--restarts", rstar_restarts, "random restarts for the iterative bound");
  rstar->add_option("-o,--output", rstar_out, "output path, - for stdout");
  rstar->add_option("--witness-out", witness_out, "dump the maximizing function as a grid file");

  // ---- sweeps ------------------------------------------------------------
  ffr::ExperimentConfig config;
  config.q_list = {};
  std::string config_file;
  std::vector<double> q_flags;
  std::uint64_t single_seed = 0;
  auto add_sweep_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_file, "JSON config file (flags override it)");
    cmd->add_option("-n,--dim", config.n, "ambient dimension");
    cmd->add_option("--alpha", config.alpha, "regularity exponent");
    cmd->add_option("--beta", config.beta, "decay exponent");
    cmd->add_option("-q,--q", q_flags, "target exponent(s)");
    cmd->add_option("--prime-min", config.prime_min, "smallest prime");
    cmd->add_option("--prime-max", config.prime_max, "largest prime");
    cmd->add_option("--prime-count", config.prime_count, "number of primes (geometric spacing)");
    cmd->add_option("--seeds", config.seeds, "base seeds, one series per seed");
    cmd->add_option("--seed", single_seed, "shorthand for a single-entry --seeds");
    cmd->add_option("--restarts", config.restarts, "restarts for iterative bounds");
    cmd->add_option("--epsilon", config.epsilon, "lift for the alpha == beta case");
    cmd->add_option("-o,--output", config.output_path, "output path, - for stdout");
    cmd->add_option("--format", config.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto* sharpness = app.add_subcommand("sharpness", "cube-witness scaling below the critical exponent");
  add_sweep_flags(sharpness);
  auto* boundedness = app.add_subcommand("boundedness", "iterated-bound scaling at or above the critical exponent");
  add_sweep_flags(boundedness);
  auto* salem = app.add_subcommand("salem", "random-set spectral flatness sweep");
  add_sweep_flags(salem);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (selftest->parsed()) {
      const int failures = run_selftest(quick);
      if (failures > 0) {
        std::cerr << failures << " selftest case(s) failed\n";
        return 2;
      }
      return 0;
    }

    if (construct->parsed()) {
      const ffr::Measure mu = build_measure(construct_spec);
      ffr::write_gridfn_file(out_prefix + ".grid", mu.weights());
      json meta = meta_to_json(mu.meta());
      meta["p"] = mu.field().p();
      meta["support_size"] = mu.support_size();
      meta["total_mass"] = mu.total_mass();
      write_output(out_prefix + ".meta.json", meta.dump(2) + "\n");
      std::cout << "wrote " << out_prefix << ".grid and " << out_prefix << ".meta.json\n";
      return 0;
    }

    if (diagnose->parsed()) {
      const ffr::Measure mu = build_measure(diagnose_spec);
      const ffr::SpectralReport report = ffr::spectral_report(mu);
      const ffr::SupportDecayCheck check = ffr::support_decay_check(report, mu);
      const ffr::KernelReport kernel = ffr::kernel_bounds(mu, report);
      json j{{"p", mu.field().p()},
             {"n", mu.dim()},
             {"meta", meta_to_json(mu.meta())},
             {"support_size", mu.support_size()},
             {"total_mass", mu.total_mass()},
             {"spectral",
              {{"alpha_eff", report.alpha_eff},
               {"beta_eff", std::isinf(report.beta_eff) ? json("inf") : json(report.beta_eff)},
               {"max_offzero_coeff", report.max_offzero_coeff},
               {"mass_check", report.mass_check}}},
             {"support_decay",
              {{"support_ratio", check.support_ratio},
               {"decay_ratio", check.decay_ratio},
               {"support_ok", check.support_ok},
               {"decay_ok", check.decay_ok}}},
             {"kernel",
              {{"sup_K", kernel.sup_k},
               {"sup_K_hat", kernel.sup_k_hat},
               {"c_infty", kernel.c_infty},
               {"c_two", kernel.c_two}}}};
      write_output(diagnose_out, j.dump(2) + "\n");
      return 0;
    }

    if (rstar->parsed()) {
      const ffr::Measure mu = build_measure(rstar_spec);
      const ffr::Exponent q = parse_exponent(rstar_q);
      ffr::RStarEstimate est;
      if (!q.is_inf() && q.value() == 2.0) {
        est = ffr::rstar_2_2_exact(mu);
      } else {
        ffr::IterateOptions opts;
        opts.restarts = rstar_restarts;
        opts.seed = rstar_spec.seed;
        est = ffr::rstar_lower_iterate(mu, q, opts);
      }
      if (!witness_out.empty() && est.witness) ffr::write_gridfn_file(witness_out, *est.witness);
      write_output(rstar_out, rstar_to_json(est).dump(2) + "\n");
      return 0;
    }

    // sweep modes share config handling
    const bool is_sharpness = sharpness->parsed();
    const bool is_boundedness = boundedness->parsed();
    const bool is_salem = salem->parsed();
    if (is_sharpness || is_boundedness || is_salem) {
      if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) throw std::invalid_argument("cannot open config file " + config_file);
        json j = json::parse(in);
        ffr::ExperimentConfig from_file = ffr::config_from_json(j);
        // explicit flags override file values
        CLI::App* cmd = is_sharpness ? sharpness : (is_boundedness ? boundedness : salem);
        if (cmd->count("--dim") == 0) config.n = from_file.n;
        if (cmd->count("--alpha") == 0) config.alpha = from_file.alpha;
        if (cmd->count("--beta") == 0) config.beta = from_file.beta;
        if (cmd->count("--q") == 0) q_flags = from_file.q_list;
        if (cmd->count("--prime-min") == 0) config.prime_min = from_file.prime_min;
        if (cmd->count("--prime-max") == 0) config.prime_max = from_file.prime_max;
        if (cmd->count("--prime-count") == 0) config.prime_count = from_file.prime_count;
        if (cmd->count("--seeds") == 0) config.seeds = from_file.seeds;
        if (cmd->count("--restarts") == 0) config.restarts = from_file.restarts;
        if (cmd->count("--epsilon") == 0) config.epsilon = from_file.epsilon;
        if (cmd->count("--output") == 0) config.output_path = from_file.output_path;
        if (cmd->count("--format") == 0) config.format = from_file.format;
      }
      config.q_list = q_flags;
      {
        CLI::App* cmd = is_sharpness ? sharpness : (is_boundedness ? boundedness : salem);
        if (cmd->count("--seed") > 0 && cmd->count("--seeds") == 0) config.seeds = {single_seed};
      }
      if (is_salem) {
        config.mode = "salem";
        const ffr::SalemOutput out = ffr::run_salem(config);
        ffr::emit_salem(out, config.output_path, config.format);
        int failures = 0;
        for (const auto& row : out.rows) {
          if (!row.ok) ++failures;
        }
        if (failures > 0) {
          std::cerr << failures << " draw(s) exceeded the Salem bound\n";
        }
        return 0;
      }
      const ffr::SweepOutput out = is_sharpness ? ffr::run_sharpness(config) : ffr::run_boundedness(config);
      ffr::emit_results(out, config.output_path, config.format);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
