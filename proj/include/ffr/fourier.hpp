#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "ffr/field.hpp"

namespace ffr {

// Sign conventions follow the discrete transform pair
//   dft(f)(xi)  = sum_x f(x) e(-x.xi)        (the "hat")
//   idft(f)(xi) = sum_x f(x) e(+x.xi)        (the "check")
// so dft(idft(f)) = idft(dft(f)) = p^n f.

// Dense complex function on F_p^n, indexed by point_to_index.
class GridFn {
 public:
  GridFn(Field field, int dim)
      : field_(std::move(field)), dim_(dim), values_(Eigen::ArrayXcd::Zero(grid_size(field_, dim))) {}

  GridFn(Field field, int dim, Eigen::ArrayXcd values);

  const Field& field() const { return field_; }
  int dim() const { return dim_; }
  std::int64_t size() const { return values_.size(); }

  const Eigen::ArrayXcd& values() const { return values_; }
  Eigen::ArrayXcd& values() { return values_; }

  cplx operator[](std::int64_t idx) const { return values_[idx]; }
  cplx at(const Point& x) const { return values_[point_to_index(x, field_)]; }

  bool all_finite() const;

 private:
  Field field_;
  int dim_;
  Eigen::ArrayXcd values_;
};

bool same_grid(const GridFn& a, const GridFn& b);

// Norm exponent in [1, inf]; infinity is a tagged case, never a large float.
class Exponent {
 public:
  Exponent(double q);  // implicit on purpose: lq_norm(f, 2.0); accepts INFINITY
  static Exponent inf() { return Exponent(kInfTag{}); }

  bool is_inf() const { return inf_; }
  double value() const;  // finite case only

  // 1/q + 1/q' = 1 with the 1 <-> inf convention
  Exponent dual() const;
  double reciprocal() const { return inf_ ? 0.0 : 1.0 / q_; }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.q_ == b.q_);
  }

 private:
  struct kInfTag {};
  explicit Exponent(kInfTag) : q_(0), inf_(true) {}
  double q_;
  bool inf_;
};

// Axis-sweep transform: n passes of length-p line transforms (direct O(p^2)
// lines for small p, Bluestein otherwise). This is the fast path.
GridFn dft(const GridFn& f);
GridFn idft(const GridFn& f);

// The defining double sum, O(p^{2n}). Correctness oracle for the sweep.
GridFn dft_reference(const GridFn& f);
GridFn idft_reference(const GridFn& f);

// (f*g)(x) = sum_y f(x-y) g(y); fast path via transform-multiply-invert.
GridFn convolve(const GridFn& f, const GridFn& g);
GridFn convolve_reference(const GridFn& f, const GridFn& g);

// Counting-measure norm (sum_x |f(x)|^q)^(1/q); q = inf gives max |f|.
double lq_norm(const GridFn& f, Exponent q);

// Weighted norm (sum_x |f(x)|^p w(x))^(1/p); p = inf gives the sup of |f|
// over the support of w. Weights must be a nonnegative real grid.
double weighted_lp_norm(const GridFn& f, const GridFn& weights, Exponent p_exp);

// Compensated sum of a real array (used for masses and norm accumulations
// where plain summation would not hold 1e-12 at large grids).
double kahan_sum(const Eigen::ArrayXd& v);

// Text fixture format: header line "p n", then p^n lines "re im" in canonical
// index order.
void write_gridfn(std::ostream& out, const GridFn& f);
GridFn read_gridfn(std::istream& in);
void write_gridfn_file(const std::string& path, const GridFn& f);
GridFn read_gridfn_file(const std::string& path);

}  // namespace ffr
