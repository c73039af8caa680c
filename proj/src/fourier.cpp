#include "ffr/fourier.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "fft_radix2.hpp"

namespace ffr {

GridFn::GridFn(Field field, int dim, Eigen::ArrayXcd values)
    : field_(std::move(field)), dim_(dim), values_(std::move(values)) {
  if (values_.size() != grid_size(field_, dim_)) {
    throw std::invalid_argument("GridFn: value array length must be p^n");
  }
}

bool GridFn::all_finite() const {
  return values_.real().isFinite().all() && values_.imag().isFinite().all();
}

bool same_grid(const GridFn& a, const GridFn& b) {
  return a.field() == b.field() && a.dim() == b.dim();
}

Exponent::Exponent(double q) : q_(q), inf_(false) {
  if (std::isinf(q) && q > 0) {
    inf_ = true;
    q_ = 0;
    return;
  }
  if (!(q >= 1.0) || std::isnan(q)) {
    throw std::invalid_argument("Exponent: q must lie in [1, inf]");
  }
}

double Exponent::value() const {
  if (inf_) throw std::logic_error("Exponent::value() called on inf");
  return q_;
}

Exponent Exponent::dual() const {
  if (inf_) return Exponent(1.0);
  if (q_ == 1.0) return Exponent::inf();
  return Exponent(q_ / (q_ - 1.0));
}

namespace {

// Forward length-p line transform, direct O(p^2) via the omega table:
// out[k] = sum_j in[j] * e(-jk).
void line_dft_direct(const Field& field, const cplx* in, cplx* out) {
  const std::int64_t p = field.p();
  const auto& omega = field.omega_table();
  for (std::int64_t k = 0; k < p; ++k) {
    cplx acc(0, 0);
    std::int64_t jk = 0;  // j*k mod p, advanced by k each step
    for (std::int64_t j = 0; j < p; ++j) {
      acc += in[j] * std::conj(omega[static_cast<std::size_t>(jk)]);
      jk += k;
      if (jk >= p) jk -= p;
    }
    out[k] = acc;
  }
}

// Bluestein: X[k] = b[k] * (a (*) h)[k] with a[j] = x[j] b[j], h[j] = conj(b[|j|]).
void line_dft_bluestein(const Field& field, const cplx* in, cplx* out) {
  const auto* plan = field.bluestein();
  const std::int64_t p = field.p();
  const std::size_t m = static_cast<std::size_t>(plan->m);
  std::vector<cplx> a(m, cplx(0, 0));
  for (std::int64_t j = 0; j < p; ++j) {
    a[static_cast<std::size_t>(j)] = in[j] * plan->chirp[static_cast<std::size_t>(j)];
  }
  detail::fft_radix2(a, *plan, /*inverse=*/false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= plan->kernel_fft[i];
  detail::fft_radix2(a, *plan, /*inverse=*/true);
  for (std::int64_t k = 0; k < p; ++k) {
    out[k] = plan->chirp[static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(k)];
  }
}

void line_dft(const Field& field, const cplx* in, cplx* out) {
  if (field.bluestein() != nullptr) {
    line_dft_bluestein(field, in, out);
  } else {
    line_dft_direct(field, in, out);
  }
}

// One length-p pass along each of the n axes. Little-endian indexing: axis a
// has stride p^a, so lines are (outer, inner) index pairs around that stride.
GridFn dft_sweep(const GridFn& f) {
  const Field& field = f.field();
  const std::int64_t p = field.p();
  const std::int64_t total = f.size();
  Eigen::ArrayXcd work = f.values();
  std::vector<cplx> line_in(static_cast<std::size_t>(p));
  std::vector<cplx> line_out(static_cast<std::size_t>(p));
  std::int64_t stride = 1;
  for (int axis = 0; axis < f.dim(); ++axis) {
    const std::int64_t block = stride * p;
    for (std::int64_t outer = 0; outer < total; outer += block) {
      for (std::int64_t inner = 0; inner < stride; ++inner) {
        const std::int64_t base = outer + inner;
        for (std::int64_t j = 0; j < p; ++j) line_in[static_cast<std::size_t>(j)] = work[base + j * stride];
        line_dft(field, line_in.data(), line_out.data());
        for (std::int64_t j = 0; j < p; ++j) work[base + j * stride] = line_out[static_cast<std::size_t>(j)];
      }
    }
    stride = block;
  }
  return GridFn(field, f.dim(), std::move(work));
}

}  // namespace

GridFn dft(const GridFn& f) { return dft_sweep(f); }

GridFn idft(const GridFn& f) {
  // sum_x f(x) e(+x.xi) = conj(dft(conj f))
  GridFn g(f.field(), f.dim(), f.values().conjugate());
  GridFn h = dft_sweep(g);
  h.values() = h.values().conjugate();
  return h;
}

GridFn dft_reference(const GridFn& f) {
  const Field& field = f.field();
  const std::int64_t total = f.size();
  const int n = f.dim();
  std::vector<Point> pts(static_cast<std::size_t>(total));
  for (std::int64_t i = 0; i < total; ++i) pts[static_cast<std::size_t>(i)] = index_to_point(i, field, n);
  Eigen::ArrayXcd out(total);
  for (std::int64_t xi = 0; xi < total; ++xi) {
    cplx acc(0, 0);
    for (std::int64_t x = 0; x < total; ++x) {
      const std::int64_t d = dot_mod(pts[static_cast<std::size_t>(x)], pts[static_cast<std::size_t>(xi)], field);
      acc += f[x] * std::conj(field.omega(d));
    }
    out[xi] = acc;
  }
  return GridFn(field, n, std::move(out));
}

GridFn idft_reference(const GridFn& f) {
  GridFn g(f.field(), f.dim(), f.values().conjugate());
  GridFn h = dft_reference(g);
  h.values() = h.values().conjugate();
  return h;
}

GridFn convolve(const GridFn& f, const GridFn& g) {
  if (!same_grid(f, g)) throw std::invalid_argument("convolve: grid mismatch");
  GridFn fh = dft(f);
  GridFn gh = dft(g);
  fh.values() *= gh.values();
  GridFn out = idft(fh);
  out.values() /= static_cast<double>(f.size());
  return out;
}

GridFn convolve_reference(const GridFn& f, const GridFn& g) {
  if (!same_grid(f, g)) throw std::invalid_argument("convolve: grid mismatch");
  const Field& field = f.field();
  const std::int64_t p = field.p();
  const std::int64_t total = f.size();
  const int n = f.dim();
  // decode every index once; the double loop below only does arithmetic
  std::vector<std::int64_t> coord(static_cast<std::size_t>(total) * static_cast<std::size_t>(n));
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t r = idx;
    for (int i = 0; i < n; ++i) {
      coord[static_cast<std::size_t>(idx * n + i)] = r % p;
      r /= p;
    }
  }
  std::vector<std::int64_t> stride(static_cast<std::size_t>(n));
  stride[0] = 1;
  for (int i = 1; i < n; ++i) stride[static_cast<std::size_t>(i)] = stride[static_cast<std::size_t>(i - 1)] * p;
  Eigen::ArrayXcd out = Eigen::ArrayXcd::Zero(total);
  for (std::int64_t x = 0; x < total; ++x) {
    const std::int64_t* px = &coord[static_cast<std::size_t>(x * n)];
    cplx acc(0, 0);
    for (std::int64_t y = 0; y < total; ++y) {
      const std::int64_t* py = &coord[static_cast<std::size_t>(y * n)];
      std::int64_t idx = 0;
      for (int i = 0; i < n; ++i) {
        std::int64_t d = px[i] - py[i];
        if (d < 0) d += p;
        idx += d * stride[static_cast<std::size_t>(i)];
      }
      acc += f[idx] * g[y];
    }
    out[x] = acc;
  }
  return GridFn(field, n, std::move(out));
}

double kahan_sum(const Eigen::ArrayXd& v) {
  double sum = 0.0, comp = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double y = v[i] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double lq_norm(const GridFn& f, Exponent q) {
  if (q.is_inf()) return f.values().abs().maxCoeff();
  const double qv = q.value();
  if (qv == 1.0) return kahan_sum(f.values().abs());
  if (qv == 2.0) return std::sqrt(kahan_sum(f.values().abs2()));
  return std::pow(kahan_sum(f.values().abs().pow(qv)), 1.0 / qv);
}

double weighted_lp_norm(const GridFn& f, const GridFn& weights, Exponent p_exp) {
  if (!same_grid(f, weights)) throw std::invalid_argument("weighted_lp_norm: grid mismatch");
  const Eigen::ArrayXd w = weights.values().real();
  if (p_exp.is_inf()) {
    double sup = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (w[i] > 0.0) sup = std::max(sup, std::abs(f[i]));
    }
    return sup;
  }
  const double pv = p_exp.value();
  if (pv == 2.0) return std::sqrt(kahan_sum(f.values().abs2() * w));
  if (pv == 1.0) return kahan_sum(f.values().abs() * w);
  return std::pow(kahan_sum(f.values().abs().pow(pv) * w), 1.0 / pv);
}

void write_gridfn(std::ostream& out, const GridFn& f) {
  if (!f.all_finite()) throw std::invalid_argument("write_gridfn: grid has non-finite entries");
  out << f.field().p() << ' ' << f.dim() << '\n';
  out.precision(17);
  for (std::int64_t i = 0; i < f.size(); ++i) {
    const cplx v = f[i];
    out << v.real() << ' ' << v.imag() << '\n';
  }
}

GridFn read_gridfn(std::istream& in) {
  std::int64_t p = 0;
  int n = 0;
  if (!(in >> p >> n)) throw std::runtime_error("read_gridfn: bad header, expected 'p n'");
  Field field(p);
  const std::int64_t total = grid_size(field, n);
  Eigen::ArrayXcd values(total);
  for (std::int64_t i = 0; i < total; ++i) {
    double re = 0, im = 0;
    if (!(in >> re >> im)) throw std::runtime_error("read_gridfn: truncated value list");
    if (!std::isfinite(re) || !std::isfinite(im)) throw std::runtime_error("read_gridfn: non-finite entry");
    values[i] = cplx(re, im);
  }
  return GridFn(std::move(field), n, std::move(values));
}

void write_gridfn_file(const std::string& path, const GridFn& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_gridfn_file: cannot open " + path);
  write_gridfn(out, f);
  if (!out) throw std::runtime_error("write_gridfn_file: write failure on " + path);
}

GridFn read_gridfn_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_gridfn_file: cannot open " + path);
  return read_gridfn(in);
}

}  // namespace ffr
