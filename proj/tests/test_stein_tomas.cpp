#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ffr/stein_tomas.hpp"
#include "ffr/restriction.hpp"
#include "ffr/rng.hpp"

using namespace ffr;

namespace {

Measure combined_fixture(std::int64_t p = 101, std::uint64_t seed = 42) {
  Field field(p);
  const PointSet a = cube_set(field, 1, 0.6, 0.4);
  const PointSet e = random_set(field, 1, 0.6, seed);
  return combined_measure(a, e);
}

}  // namespace

TEST_CASE("kernel_K basics") {
  SUBCASE("uniform measure has K = 0") {
    Field field(7);
    const GridFn k = kernel_K(uniform_measure(field, 1));
    CHECK(k.values().abs().maxCoeff() < 1e-14);
  }
  SUBCASE("atom at zero gives K = 1 - delta_0") {
    Field field(7);
    const GridFn k = kernel_K(delta_measure(field, 1, 0));
    CHECK(std::abs(k[0]) < 1e-12);
    for (int i = 1; i < 7; ++i) CHECK(std::abs(k[i] - cplx(1, 0)) < 1e-12);
  }
  SUBCASE("K(0) = 0 and the mu^(-x) symmetry for probability measures") {
    const Measure mu = combined_fixture();
    const GridFn k = kernel_K(mu);
    CHECK(std::abs(k[0]) < 1e-12);
    const GridFn muhat = dft(mu.weights());
    const std::int64_t p = mu.field().p();
    double sup_k = 0.0, max_off = 0.0;
    for (std::int64_t x = 1; x < p; ++x) {
      // mu^(x) (inverse transform) equals mu^hat(-x)
      CHECK(std::abs(std::abs(k[x]) - std::abs(muhat[p - x])) < 1e-12);
      sup_k = std::max(sup_k, std::abs(k[x]));
      max_off = std::max(max_off, std::abs(muhat[x]));
    }
    CHECK(sup_k == doctest::Approx(max_off).epsilon(1e-12));
  }
}

TEST_CASE("kernel_bounds") {
  SUBCASE("uniform: all endpoint data vanish") {
    Field field(7);
    const Measure mu = uniform_measure(field, 1);
    const KernelReport report = kernel_bounds(mu, spectral_report(mu));
    CHECK(report.sup_k < 1e-14);
    CHECK(report.c_infty == 0.0);
    CHECK(report.sup_k_hat < 1e-10);
  }
  SUBCASE("atom at zero: K^ = p^n mu - 1 has sup p^n - 1") {
    Field field(7);
    const Measure mu = delta_measure(field, 1, 0);
    const KernelReport report = kernel_bounds(mu, spectral_report(mu));
    CHECK(report.sup_k_hat == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(report.sup_k == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("combined fixture: normalized endpoint constants stay below 1.01") {
    const Measure mu = combined_fixture();
    const KernelReport report = kernel_bounds(mu, spectral_report(mu));
    CHECK(report.c_infty <= 1.01);
    CHECK(report.c_two <= 1.01);
    CHECK(report.c_infty == doctest::Approx(1.0).epsilon(1e-9));  // definition of beta_eff
  }
  SUBCASE("K^ matches p^n mu - 1 pointwise") {
    const Measure mu = combined_fixture();
    const GridFn k_hat = dft(kernel_K(mu));
    const double pn = static_cast<double>(mu.weights().size());
    for (std::int64_t i = 0; i < k_hat.size(); ++i) {
      CHECK(std::abs(k_hat[i] - (pn * mu.weights()[i] - cplx(1, 0))) < 1e-9);
    }
  }
}

TEST_CASE("convolution inequality probe") {
  SUBCASE("uniform kernel: all ratios vanish") {
    Field field(7);
    const Measure mu = uniform_measure(field, 1);
    const auto stats = convolution_inequality_probe(mu, 4.0, 10, 1);
    CHECK(stats.max_ratio < 1e-12);
    CHECK(stats.ceiling < 1e-10);
  }
  SUBCASE("combined fixture at the rounded-up critical exponent") {
    const Measure mu = combined_fixture();
    const SpectralReport report = spectral_report(mu);
    const double crit = critical_q(1, report.alpha_eff, report.beta_eff);
    const Exponent q(std::ceil(crit));
    const auto stats = convolution_inequality_probe(mu, q, 100, 7);
    CHECK(stats.max_plancherel_rel_err < 1e-9);
    CHECK(stats.max_ratio <= stats.ceiling * 1.05);
    CHECK(stats.mean_ratio <= stats.max_ratio);
    CHECK(stats.c_two_endpoint > 0.0);
  }
  SUBCASE("q below the effective critical exponent is rejected") {
    const Measure mu = combined_fixture();
    CHECK_THROWS_AS(convolution_inequality_probe(mu, 2.5, 5, 1), std::invalid_argument);
  }
}

TEST_CASE("L1 -> Linf endpoint: inequality and equality witness") {
  const Measure mu = combined_fixture();
  const GridFn k = kernel_K(mu);
  const double sup_k = k.values().abs().maxCoeff();
  Rng rng(13);
  const Field& field = mu.field();
  for (int t = 0; t < 20; ++t) {
    GridFn f(field, 1);
    for (std::int64_t i = 0; i < f.size(); ++i) f.values()[i] = rng.gauss_complex();
    const GridFn conv = convolve(f, k);
    CHECK(lq_norm(conv, Exponent::inf()) <= sup_k * lq_norm(f, 1.0) * (1 + 1e-12));
  }
  // equality at a delta placed anywhere: ||delta * K||_inf = sup|K|
  GridFn d(field, 1);
  d.values()[3] = 1.0;
  const GridFn conv = convolve(d, k);
  CHECK(lq_norm(conv, Exponent::inf()) == doctest::Approx(sup_k).epsilon(1e-12));
}
