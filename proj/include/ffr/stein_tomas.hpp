#pragma once

#include <cstdint>

#include "ffr/measure.hpp"

namespace ffr {

// Endpoint data for the convolution kernel K = mu^ - delta_0 (inverse
// transform of mu minus the unit impulse). For a probability measure K(0) = 0
// and |K(x)| = |mu^(-x)| off the origin, so sup|K| carries the Fourier decay
// while sup|K^| = max |p^n mu - 1| carries the regularity.
struct KernelReport {
  double sup_k = 0.0;       // max_x |K(x)|
  double sup_k_hat = 0.0;   // max_xi |K^(xi)|
  double c_infty = 0.0;     // sup_k * p^{beta_eff/2}, 0 when the spectrum is flat
  double c_two = 0.0;       // sup_k_hat * p^{alpha_eff - n}
};

GridFn kernel_K(const Measure& mu);

KernelReport kernel_bounds(const Measure& mu, const SpectralReport& report);

// Random-trial probe of ||f * K||_q <= C ||f||_{q'}. The ceiling interpolates
// the measured endpoints: C_infty = sup|K| (exact L^1 -> L^inf norm) and
// C_2 = the empirical max of ||f*K||_2 / ||f||_2 over the same trial set,
// combined as C_infty^theta * C_2^{1-theta} with 1/q = (1-theta)/2. Each trial
// also checks the Plancherel identity ||f*K||_2^2 = p^{-n} sum |f^|^2 |K^|^2.
struct ConvolutionProbeStats {
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  double ceiling = 0.0;
  double c_infty_endpoint = 0.0;
  double c_two_endpoint = 0.0;
  double theta = 0.0;
  double max_plancherel_rel_err = 0.0;
  int trials = 0;
};

ConvolutionProbeStats convolution_inequality_probe(const Measure& mu, Exponent q, int trials,
                                                   std::uint64_t seed);

}  // namespace ffr
