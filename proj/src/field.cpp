#include "ffr/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fft_radix2.hpp"

namespace ffr {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;  // a witnesses compositeness
}

constexpr int kBluesteinMinP = 64;

std::size_t next_pow2_at_least(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

void fill_bitrev(std::vector<std::int32_t>& rev, std::size_t m) {
  rev.assign(m, 0);
  for (std::size_t i = 1; i < m; ++i) {
    rev[i] = (rev[i >> 1] >> 1) | static_cast<std::int32_t>((i & 1) * (m >> 1));
  }
}

}  // namespace

bool is_prime(u64 m) {
  if (m < 2) return false;
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (m == q) return true;
    if (m % q == 0) return false;
  }
  u64 d = m - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is exact for every n < 3.3e24, which covers 64 bits.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (miller_rabin_witness(m, a, d, s)) return false;
  }
  return true;
}

Field::Field(std::int64_t p) {
  if (p < 2 || !is_prime(static_cast<u64>(p))) {
    throw std::invalid_argument("Field: modulus " + std::to_string(p) + " is not prime");
  }
  if (p > kGridCap) {
    throw std::invalid_argument("Field: modulus " + std::to_string(p) +
                                " exceeds the grid cap of 2^26 entries");
  }
  auto impl = std::make_shared<Impl>();
  impl->p = p;
  impl->omega.resize(static_cast<std::size_t>(p));
  // Each entry from its own reduced angle; never by repeated multiplication,
  // which would accumulate O(p) rounding error.
  for (std::int64_t k = 0; k < p; ++k) {
    const std::int64_t kb = (2 * k <= p) ? k : k - p;  // balanced rep, |kb| <= p/2
    const double angle = 2.0 * M_PI * static_cast<double>(kb) / static_cast<double>(p);
    impl->omega[static_cast<std::size_t>(k)] = std::polar(1.0, angle);
  }
  impl->omega[0] = cplx(1.0, 0.0);

  if (p >= kBluesteinMinP) {
    auto plan = std::make_unique<BluesteinPlan>();
    const std::size_t m = next_pow2_at_least(static_cast<std::size_t>(2 * p - 1));
    plan->m = static_cast<std::int64_t>(m);
    plan->twiddle.resize(m / 2);
    for (std::size_t k = 0; k < m / 2; ++k) {
      plan->twiddle[k] = std::polar(1.0, -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(m));
    }
    fill_bitrev(plan->bitrev, m);
    plan->chirp.resize(static_cast<std::size_t>(p));
    for (std::int64_t j = 0; j < p; ++j) {
      // j^2 mod 2p keeps the chirp angle small; exp(-pi*i*j^2/p) has period 2p in j^2
      const std::int64_t j2 = static_cast<std::int64_t>(u128(j) * u128(j) % u128(2 * p));
      plan->chirp[static_cast<std::size_t>(j)] =
          std::polar(1.0, -M_PI * static_cast<double>(j2) / static_cast<double>(p));
    }
    // kernel h[k] = conj(chirp[|k|]) wrapped to length m, transformed once
    std::vector<cplx> h(m, cplx(0, 0));
    for (std::int64_t j = 0; j < p; ++j) {
      const cplx v = std::conj(plan->chirp[static_cast<std::size_t>(j)]);
      h[static_cast<std::size_t>(j)] = v;
      if (j > 0) h[m - static_cast<std::size_t>(j)] = v;
    }
    detail::fft_radix2(h, *plan, /*inverse=*/false);
    plan->kernel_fft = std::move(h);
    impl->plan = std::move(plan);
  }
  impl_ = std::move(impl);
}

std::int64_t grid_size(const Field& field, int dim) {
  if (dim < 1) throw std::invalid_argument("grid_size: dimension must be >= 1");
  std::int64_t size = 1;
  for (int i = 0; i < dim; ++i) {
    if (size > kGridCap / field.p()) {
      throw std::invalid_argument("grid_size: p^n exceeds the grid cap of 2^26 entries");
    }
    size *= field.p();
  }
  return size;
}

std::int64_t point_to_index(const Point& x, const Field& field) {
  const std::int64_t p = field.p();
  std::int64_t idx = 0;
  std::int64_t stride = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0 || x[i] >= p) {
      throw std::invalid_argument("point_to_index: coordinate out of range 0..p-1");
    }
    idx += x[i] * stride;
    stride *= p;
  }
  return idx;
}

Point index_to_point(std::int64_t idx, const Field& field, int dim) {
  const std::int64_t p = field.p();
  Point x(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    x[static_cast<std::size_t>(i)] = idx % p;
    idx /= p;
  }
  return x;
}

std::int64_t dot_mod(const Point& x, const Point& xi, const Field& field) {
  if (x.size() != xi.size()) throw std::invalid_argument("dot_mod: dimension mismatch");
  const std::int64_t p = field.p();
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc = (acc + (x[i] % p) * (xi[i] % p)) % p;
  }
  if (acc < 0) acc += p;
  return acc;
}

std::int64_t balanced_abs(std::int64_t v, const Field& field) {
  const std::int64_t p = field.p();
  return std::min(v, p - v);
}

}  // namespace ffr
