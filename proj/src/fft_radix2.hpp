#pragma once

#include <vector>

#include "ffr/field.hpp"

namespace ffr::detail {

// In-place radix-2 FFT over the plan's power-of-two length, using its
// precomputed twiddle and bit-reversal tables. Inverse includes the 1/m scale.
inline void fft_radix2(std::vector<cplx>& a, const Field::BluesteinPlan& plan, bool inverse) {
  const std::size_t m = static_cast<std::size_t>(plan.m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = static_cast<std::size_t>(plan.bitrev[i]);
    if (i < r) std::swap(a[i], a[r]);
  }
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const std::size_t step = m / len;
    for (std::size_t i = 0; i < m; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx w = plan.twiddle[k * step];
        if (inverse) w = std::conj(w);
        const cplx u = a[i + k];
        const cplx t = w * a[i + k + len / 2];
        a[i + k] = u + t;
        a[i + k + len / 2] = u - t;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(m);
    for (auto& v : a) v *= inv;
  }
}

}  // namespace ffr::detail
