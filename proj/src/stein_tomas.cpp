#include "ffr/stein_tomas.hpp"

#include <cmath>
#include <stdexcept>

#include "ffr/restriction.hpp"
#include "ffr/rng.hpp"

namespace ffr {

GridFn kernel_K(const Measure& mu) {
  if (mu.total_mass() <= 0.0) throw std::invalid_argument("kernel_K: zero measure");
  GridFn k = idft(mu.weights());
  k.values()[0] -= 1.0;
  return k;
}

KernelReport kernel_bounds(const Measure& mu, const SpectralReport& report) {
  const double p = static_cast<double>(mu.field().p());
  const double n = static_cast<double>(mu.dim());
  KernelReport out;
  const GridFn k = kernel_K(mu);
  out.sup_k = k.values().abs().maxCoeff();
  out.sup_k_hat = dft(k).values().abs().maxCoeff();
  // sup|K| equals max_{xi != 0}|mu^| by symmetry; a flat spectrum gives 0 and
  // a +inf beta_eff sentinel, so the normalized constant is 0 by convention.
  out.c_infty = (out.sup_k == 0.0 || std::isinf(report.beta_eff))
                    ? 0.0
                    : out.sup_k * std::pow(p, report.beta_eff / 2.0);
  out.c_two = out.sup_k_hat * std::pow(p, report.alpha_eff - n);
  return out;
}

ConvolutionProbeStats convolution_inequality_probe(const Measure& mu, Exponent q, int trials,
                                                   std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("convolution_inequality_probe: trials must be >= 1");
  const SpectralReport report = spectral_report(mu);
  if (!q.is_inf() && !std::isinf(report.beta_eff)) {
    const double crit = critical_q(mu.dim(), report.alpha_eff, report.beta_eff);
    if (q.value() < crit) {
      throw std::invalid_argument("convolution_inequality_probe: q below the critical exponent");
    }
  }

  const GridFn k = kernel_K(mu);
  const GridFn k_hat = dft(k);
  const Eigen::ArrayXd k_hat_sq = k_hat.values().abs2();
  const double pn = static_cast<double>(k.size());
  const Exponent q_dual = q.dual();

  ConvolutionProbeStats stats;
  stats.trials = trials;
  stats.c_infty_endpoint = k.values().abs().maxCoeff();
  stats.theta = q.is_inf() ? 1.0 : 1.0 - 2.0 / q.value();

  double ratio_sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed + static_cast<std::uint64_t>(t));
    GridFn f(mu.field(), mu.dim());
    for (Eigen::Index i = 0; i < f.values().size(); ++i) f.values()[i] = rng.gauss_complex();

    const GridFn conv = convolve(f, k);
    const double ratio = lq_norm(conv, q) / lq_norm(f, q_dual);
    stats.max_ratio = std::max(stats.max_ratio, ratio);
    ratio_sum += ratio;

    const double l2 = lq_norm(conv, Exponent(2.0));
    stats.c_two_endpoint = std::max(stats.c_two_endpoint, l2 / lq_norm(f, Exponent(2.0)));

    // per-trial identity ||f*K||_2^2 = p^{-n} sum |f^|^2 |K^|^2
    const double lhs = l2 * l2;
    const double rhs = kahan_sum(dft(f).values().abs2() * k_hat_sq) / pn;
    const double rel = std::abs(lhs - rhs) / std::max(1e-300, std::abs(rhs));
    stats.max_plancherel_rel_err = std::max(stats.max_plancherel_rel_err, rel);
  }
  stats.mean_ratio = ratio_sum / trials;
  stats.ceiling = (stats.c_infty_endpoint == 0.0 && stats.theta > 0.0)
                      ? 0.0
                      : std::pow(stats.c_infty_endpoint, stats.theta) *
                            std::pow(stats.c_two_endpoint, 1.0 - stats.theta);
  return stats;
}

}  // namespace ffr
