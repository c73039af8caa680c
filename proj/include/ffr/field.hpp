#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

namespace ffr {

using cplx = std::complex<double>;

// Dense grids on F_p^n are capped at 2^26 entries.
inline constexpr std::int64_t kGridCap = std::int64_t{1} << 26;

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t m);

// A point of F_p^n in canonical coordinates 0..p-1, little-endian order.
using Point = std::vector<std::int64_t>;

// Prime field F_p together with the table of p-th roots of unity
// omega[k] = e(k) = exp(2*pi*i*k/p). Cheap to copy (shared immutable state).
// For large p a Bluestein convolution plan is attached so that length-p
// transforms run in O(M log M) instead of O(p^2).
class Field {
 public:
  explicit Field(std::int64_t p);

  std::int64_t p() const { return impl_->p; }

  // e(k) with k reduced mod p; accepts any integer, including negatives.
  cplx omega(std::int64_t k) const {
    std::int64_t r = k % impl_->p;
    if (r < 0) r += impl_->p;
    return impl_->omega[static_cast<std::size_t>(r)];
  }

  const std::vector<cplx>& omega_table() const { return impl_->omega; }

  friend bool operator==(const Field& a, const Field& b) { return a.p() == b.p(); }
  friend bool operator!=(const Field& a, const Field& b) { return !(a == b); }

  // Precomputed state for the Bluestein length-p transform; empty for small p
  // where the direct O(p^2) line kernel wins anyway.
  struct BluesteinPlan {
    std::int64_t m = 0;                 // power-of-two FFT length, m >= 2p-1
    std::vector<cplx> twiddle;          // m/2 entries exp(-2*pi*i*k/m)
    std::vector<std::int32_t> bitrev;   // m entries
    std::vector<cplx> chirp;            // p entries b[j] = exp(-pi*i*(j^2 mod 2p)/p)
    std::vector<cplx> kernel_fft;       // FFT of the wrapped conjugate chirp
  };
  const BluesteinPlan* bluestein() const {
    return impl_->plan ? impl_->plan.get() : nullptr;
  }

 private:
  struct Impl {
    std::int64_t p;
    std::vector<cplx> omega;
    std::unique_ptr<const BluesteinPlan> plan;
  };
  std::shared_ptr<const Impl> impl_;
};

// p^n with the grid cap enforced.
std::int64_t grid_size(const Field& field, int dim);

// idx = sum_i x_i * p^i, bijective onto 0..p^n-1.
std::int64_t point_to_index(const Point& x, const Field& field);
Point index_to_point(std::int64_t idx, const Field& field, int dim);

// x.xi mod p, in 0..p-1.
std::int64_t dot_mod(const Point& x, const Point& xi, const Field& field);

// Distance to 0 in the balanced representation: min(v, p-v).
std::int64_t balanced_abs(std::int64_t v, const Field& field);

}  // namespace ffr
