#include "ffr/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ffr/rng.hpp"

namespace ffr {

PointSet::PointSet(Field field, int dim, std::vector<std::int64_t> members)
    : field_(std::move(field)), dim_(dim), members_(std::move(members)) {
  const std::int64_t total = grid_size(field_, dim_);
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (std::int64_t idx : members_) {
    if (idx < 0 || idx >= total) throw std::invalid_argument("PointSet: index out of range");
  }
  meta.n = dim_;
}

bool PointSet::contains(std::int64_t idx) const {
  return std::binary_search(members_.begin(), members_.end(), idx);
}

GridFn PointSet::indicator() const {
  GridFn f(field_, dim_);
  for (std::int64_t idx : members_) f.values()[idx] = cplx(1.0, 0.0);
  return f;
}

void write_pointset(std::ostream& out, const PointSet& s) {
  out << s.field().p() << ' ' << s.dim() << ' ' << s.size() << '\n';
  for (std::int64_t idx : s.members()) out << idx << '\n';
}

PointSet read_pointset(std::istream& in) {
  std::int64_t p = 0, count = 0;
  int n = 0;
  if (!(in >> p >> n >> count)) throw std::runtime_error("read_pointset: bad header, expected 'p n |S|'");
  Field field(p);
  std::vector<std::int64_t> members(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    if (!(in >> members[static_cast<std::size_t>(i)])) throw std::runtime_error("read_pointset: truncated index list");
  }
  return PointSet(std::move(field), n, std::move(members));
}

void write_pointset_file(const std::string& path, const PointSet& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_pointset_file: cannot open " + path);
  write_pointset(out, s);
}

PointSet read_pointset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_pointset_file: cannot open " + path);
  return read_pointset(in);
}

Measure::Measure(GridFn weights, ConstructionMeta meta) : weights_(std::move(weights)), meta_(std::move(meta)) {
  if (meta_.n == 0) meta_.n = weights_.dim();
  const auto& v = weights_.values();
  std::int64_t support = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const cplx w = v[i];
    if (w.imag() != 0.0 || w.real() < 0.0 || !std::isfinite(w.real())) {
      throw std::invalid_argument("Measure: weights must be finite nonnegative reals");
    }
    if (w.real() > 0.0) ++support;
  }
  support_size_ = support;
  total_mass_ = kahan_sum(v.real());
}

bool Measure::is_probability() const { return std::abs(total_mass_ - 1.0) < 1e-12; }

double Measure::max_weight() const { return weights_.values().real().maxCoeff(); }

std::int64_t Measure::argmax_weight() const {
  Eigen::Index idx = 0;
  weights_.values().real().maxCoeff(&idx);
  return static_cast<std::int64_t>(idx);
}

Measure uniform_measure(const Field& field, int n) {
  const std::int64_t total = grid_size(field, n);
  GridFn w(field, n, Eigen::ArrayXcd::Constant(total, cplx(1.0 / static_cast<double>(total), 0.0)));
  ConstructionMeta meta;
  meta.kind = "uniform";
  meta.n = n;
  return Measure(std::move(w), std::move(meta));
}

Measure delta_measure(const Field& field, int n, std::int64_t at_index) {
  GridFn w(field, n);
  w.values()[at_index] = cplx(1.0, 0.0);
  ConstructionMeta meta;
  meta.kind = "delta";
  meta.n = n;
  return Measure(std::move(w), std::move(meta));
}

PointSet cube_set(const Field& field, int n, double alpha, double beta) {
  if (!(0.0 < beta && beta <= alpha && alpha < static_cast<double>(n))) {
    throw std::invalid_argument("cube_set: need 0 < beta <= alpha < n");
  }
  const double p = static_cast<double>(field.p());
  const std::int64_t side =
      std::max<std::int64_t>(1, std::llround(std::pow(p, (alpha - beta / 2.0) / static_cast<double>(n))));
  if (side >= field.p()) {
    throw std::invalid_argument("cube_set: N^n exceeds the grid, parameters inconsistent with field size");
  }
  std::vector<std::int64_t> members;
  std::int64_t count = 1;
  for (int i = 0; i < n; ++i) count *= side;
  members.reserve(static_cast<std::size_t>(count));
  Point x(static_cast<std::size_t>(n), 1);
  for (std::int64_t k = 0; k < count; ++k) {
    std::int64_t r = k;
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = 1 + r % side;
      r /= side;
    }
    members.push_back(point_to_index(x, field));
  }
  PointSet a(field, n, std::move(members));
  a.meta.kind = "cube";
  a.meta.alpha = alpha;
  a.meta.beta = beta;
  a.meta.cube_side = side;
  a.meta.size_a = a.size();
  return a;
}

PointSet bohr_set(const PointSet& a, double threshold_ratio) {
  if (a.size() == 0) throw std::invalid_argument("bohr_set: set must be nonempty");
  if (!(threshold_ratio > 0.0 && threshold_ratio <= 1.0)) {
    throw std::invalid_argument("bohr_set: threshold ratio must lie in (0, 1]");
  }
  const GridFn spectrum = dft(a.indicator());
  const double cut = threshold_ratio * static_cast<double>(a.size());
  std::vector<std::int64_t> members;
  for (std::int64_t i = 0; i < spectrum.size(); ++i) {
    if (std::abs(spectrum[i]) >= cut) members.push_back(i);
  }
  PointSet out(a.field(), a.dim(), std::move(members));
  out.meta.kind = "bohr";
  out.meta.cube_side = a.meta.cube_side;
  return out;
}

PointSet random_set(const Field& field, int n, double alpha, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha <= static_cast<double>(n))) {
    throw std::invalid_argument("random_set: need 0 < alpha <= n");
  }
  const std::int64_t total = grid_size(field, n);
  const double delta = std::pow(static_cast<double>(field.p()), alpha - static_cast<double>(n));
  std::uint64_t use_seed = seed;
  int retries = 0;
  std::vector<std::int64_t> members;
  for (;;) {
    members.clear();
    Rng rng(use_seed);
    for (std::int64_t i = 0; i < total; ++i) {
      if (rng.uniform() < delta) members.push_back(i);
    }
    if (!members.empty()) break;
    ++use_seed;
    ++retries;
  }
  PointSet e(field, n, std::move(members));
  e.meta.kind = "random";
  e.meta.alpha = alpha;
  e.meta.delta = delta;
  e.meta.seed_requested = seed;
  e.meta.seed_used = use_seed;
  e.meta.retries = retries;
  e.meta.generator = Rng::generator_name();
  e.meta.size_e = e.size();
  return e;
}

Measure combined_measure(const PointSet& a, const PointSet& e) {
  if (a.field() != e.field() || a.dim() != e.dim()) {
    throw std::invalid_argument("combined_measure: sets live on different grids");
  }
  const std::int64_t denom = a.size() + e.size();
  if (denom == 0) throw std::invalid_argument("combined_measure: both sets empty");
  GridFn w(a.field(), a.dim());
  const double unit = 1.0 / static_cast<double>(denom);
  for (std::int64_t idx : a.members()) w.values()[idx] += unit;
  std::int64_t overlap = 0;
  for (std::int64_t idx : e.members()) {
    if (a.contains(idx)) ++overlap;
    w.values()[idx] += unit;
  }
  ConstructionMeta meta = e.meta;  // keeps delta/seed/generator of the draw
  meta.kind = "combined";
  meta.n = a.dim();
  meta.alpha = a.meta.alpha != 0.0 ? a.meta.alpha : e.meta.alpha;
  meta.beta = a.meta.beta;
  meta.cube_side = a.meta.cube_side;
  meta.size_a = a.size();
  meta.size_e = e.size();
  meta.overlap_ae = overlap;
  meta.eta_warning = overlap * 100 > a.size();  // the eta = 1/100 regime failed
  return Measure(std::move(w), std::move(meta));
}

PointSet paraboloid_set(const Field& field, int n) {
  if (n < 2) throw std::invalid_argument("paraboloid_set: dimension must be >= 2");
  if (field.p() == 2) throw std::invalid_argument("paraboloid_set: p must be odd");
  const std::int64_t p = field.p();
  const std::int64_t base_total = grid_size(field, n) / p;  // p^{n-1}
  std::vector<std::int64_t> members;
  members.reserve(static_cast<std::size_t>(base_total));
  for (std::int64_t b = 0; b < base_total; ++b) {
    std::int64_t r = b;
    std::int64_t sq = 0;
    for (int i = 0; i + 1 < n; ++i) {
      const std::int64_t c = r % p;
      r /= p;
      sq = (sq + c * c) % p;
    }
    members.push_back(b + sq * base_total);  // (x, x.x) little-endian
  }
  PointSet out(field, n, std::move(members));
  out.meta.kind = "paraboloid";
  return out;
}

Measure set_measure(const PointSet& s, std::string kind) {
  if (s.size() == 0) throw std::invalid_argument("set_measure: set must be nonempty");
  GridFn w(s.field(), s.dim());
  const double unit = 1.0 / static_cast<double>(s.size());
  for (std::int64_t idx : s.members()) w.values()[idx] = cplx(unit, 0.0);
  ConstructionMeta meta = s.meta;
  meta.kind = std::move(kind);
  return Measure(std::move(w), std::move(meta));
}

SpectralReport spectral_report(const Measure& mu) {
  if (mu.total_mass() <= 0.0) throw std::invalid_argument("spectral_report: zero measure");
  const double p = static_cast<double>(mu.field().p());
  const GridFn hat = dft(mu.weights());
  SpectralReport report;
  report.support_size = mu.support_size();
  report.mass_check = hat[0].real();
  double max_off = 0.0;
  for (std::int64_t i = 1; i < hat.size(); ++i) max_off = std::max(max_off, std::abs(hat[i]));
  report.max_offzero_coeff = max_off;
  report.alpha_eff = -std::log(mu.max_weight()) / std::log(p);
  // flat spectra fall below accumulated roundoff; report the sentinel
  if (max_off <= 1e-13 * std::max(1.0, mu.total_mass())) {
    report.beta_eff = std::numeric_limits<double>::infinity();
    report.max_offzero_coeff = max_off;
  } else {
    report.beta_eff = -2.0 * std::log(max_off) / std::log(p);
  }
  return report;
}

SupportDecayCheck support_decay_check(const SpectralReport& report, const Measure& mu) {
  const double p = static_cast<double>(mu.field().p());
  const double beta = std::min(report.beta_eff, static_cast<double>(mu.dim()));
  SupportDecayCheck check;
  check.support_ratio = static_cast<double>(report.support_size) / std::pow(p, beta);
  check.decay_ratio = mu.max_weight() * std::pow(p, beta / 2.0);
  check.support_ok = check.support_ratio >= 0.5;
  check.decay_ok = check.decay_ratio <= 2.0;
  return check;
}

SalemCheck salem_check(const PointSet& e, double c) {
  const GridFn hat = dft(e.indicator());
  SalemCheck out;
  for (std::int64_t i = 1; i < hat.size(); ++i) out.max_offzero = std::max(out.max_offzero, std::abs(hat[i]));
  const double logsize = static_cast<double>(e.dim()) * std::log(static_cast<double>(e.field().p()));
  out.bound = c * std::sqrt(static_cast<double>(std::max<std::int64_t>(e.size(), 1))) * std::sqrt(logsize);
  out.ok = out.max_offzero <= out.bound;
  return out;
}

double lp_mu_norm(const GridFn& f, const Measure& mu, Exponent p_exp) {
  return weighted_lp_norm(f, mu.weights(), p_exp);
}

}  // namespace ffr
