#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffr/fourier.hpp"

namespace ffr {

// Construction record carried by sets and measures so that experiment output
// can echo exactly how each object was built.
struct ConstructionMeta {
  std::string kind;  // uniform | cube | random | combined | paraboloid | delta | custom
  int n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::int64_t cube_side = 0;  // N for cube-backed objects
  double delta = 0.0;          // Bernoulli inclusion probability for random sets
  std::uint64_t seed_requested = 0;
  std::uint64_t seed_used = 0;
  int retries = 0;
  std::string generator;
  std::int64_t size_a = 0;
  std::int64_t size_e = 0;
  std::int64_t overlap_ae = 0;
  bool eta_warning = false;  // |A cap E| > |A|/100 for this draw
};

// Subset of F_p^n as sorted canonical indices.
class PointSet {
 public:
  PointSet(Field field, int dim, std::vector<std::int64_t> members);

  const Field& field() const { return field_; }
  int dim() const { return dim_; }
  std::int64_t size() const { return static_cast<std::int64_t>(members_.size()); }
  const std::vector<std::int64_t>& members() const { return members_; }
  bool contains(std::int64_t idx) const;

  // 0/1 grid, materialized on demand
  GridFn indicator() const;

  ConstructionMeta meta;

 private:
  Field field_;
  int dim_;
  std::vector<std::int64_t> members_;  // sorted, unique, all < p^n
};

// Text format: header "p n |S|", then one canonical index per line.
void write_pointset(std::ostream& out, const PointSet& s);
PointSet read_pointset(std::istream& in);
void write_pointset_file(const std::string& path, const PointSet& s);
PointSet read_pointset_file(const std::string& path);

// Nonnegative weight function with recorded mass and support.
class Measure {
 public:
  Measure(GridFn weights, ConstructionMeta meta);

  const GridFn& weights() const { return weights_; }
  const Field& field() const { return weights_.field(); }
  int dim() const { return weights_.dim(); }
  std::int64_t support_size() const { return support_size_; }
  double total_mass() const { return total_mass_; }
  bool is_probability() const;
  double max_weight() const;
  std::int64_t argmax_weight() const;

  const ConstructionMeta& meta() const { return meta_; }

 private:
  GridFn weights_;
  std::int64_t support_size_;
  double total_mass_;
  ConstructionMeta meta_;
};

// Measured regularity/decay exponents of a probability measure:
//   alpha_eff = -log_p max mu,   beta_eff = -2 log_p max_{xi != 0} |mu^(xi)|.
// A measure with identically zero off-zero spectrum reports beta_eff = +inf.
struct SpectralReport {
  double alpha_eff = 0.0;
  double beta_eff = 0.0;
  double max_offzero_coeff = 0.0;
  std::int64_t support_size = 0;
  double mass_check = 0.0;  // mu^(0), should be 1 for probability measures
};

struct SupportDecayCheck {
  double support_ratio = 0.0;  // |Supp mu| / p^beta
  double decay_ratio = 0.0;    // max mu * p^{beta/2}
  bool support_ok = false;     // support_ratio >= 1/2
  bool decay_ok = false;       // decay_ratio <= 2
};

// mu(x) = p^{-n} everywhere.
Measure uniform_measure(const Field& field, int n);

// Unit atom at the given point (index form).
Measure delta_measure(const Field& field, int n, std::int64_t at_index);

// A = {1..N}^n with N = max(1, round(p^{(alpha - beta/2)/n})). Requires
// 0 < beta <= alpha < n and N < p.
PointSet cube_set(const Field& field, int n, double alpha, double beta);

// A* = { xi : |1_A^(xi)| >= threshold_ratio * |A| }. Always contains 0.
PointSet bohr_set(const PointSet& a, double threshold_ratio = 0.1);

// Bernoulli(p^{alpha-n}) inclusion per point in canonical index order from a
// seeded generator; retries with seed+1 if the draw comes out empty.
// alpha = n is allowed and selects every point.
PointSet random_set(const Field& field, int n, double alpha, std::uint64_t seed);

// mu = (1_E + 1_A) / (|E| + |A|).
Measure combined_measure(const PointSet& a, const PointSet& e);

// P = {(x, x.x) : x in F_p^{n-1}}, |P| = p^{n-1}. Needs n >= 2 and odd p.
PointSet paraboloid_set(const Field& field, int n);

// Normalized indicator measure 1_S / |S|.
Measure set_measure(const PointSet& s, std::string kind);

// Full-spectrum scan, no sampling.
SpectralReport spectral_report(const Measure& mu);

// Checks |Supp mu| >= p^beta / 2 and max mu <= 2 p^{-beta/2} with
// beta = min(beta_eff, n); the proposition behind it only speaks for
// exponents up to n, and a flat spectrum reports beta_eff = +inf.
SupportDecayCheck support_decay_check(const SpectralReport& report, const Measure& mu);

// max_{xi != 0} |1_E^(xi)| together with the random-set ceiling
// c * sqrt(max(|E|,1)) * sqrt(n ln p).
struct SalemCheck {
  double max_offzero = 0.0;
  double bound = 0.0;
  bool ok = false;
};
SalemCheck salem_check(const PointSet& e, double c = 4.0);

// Weighted norm against a measure (thin wrapper over weighted_lp_norm).
double lp_mu_norm(const GridFn& f, const Measure& mu, Exponent p_exp);

}  // namespace ffr
