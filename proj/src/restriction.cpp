#include "ffr/restriction.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ffr/rng.hpp"

namespace ffr {

std::string to_string(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::Exact: return "exact";
    case EstimateKind::Witness: return "witness";
    case EstimateKind::Iterated: return "iterated";
  }
  return "unknown";
}

GridFn extension(const GridFn& f, const Measure& mu) {
  if (!same_grid(f, mu.weights())) throw std::invalid_argument("extension: grid mismatch");
  GridFn prod(f.field(), f.dim(), f.values() * mu.weights().values());
  return dft(prod);
}

double restriction_ratio(const GridFn& g, const Measure& mu, Exponent p_exp, Exponent q) {
  const double denom = lq_norm(g, q.dual());
  if (denom == 0.0) throw std::invalid_argument("restriction_ratio: zero input");
  return lp_mu_norm(dft(g), mu, p_exp.dual()) / denom;
}

namespace {

std::vector<std::int64_t> support_indices(const Measure& mu) {
  std::vector<std::int64_t> idx;
  const auto& w = mu.weights().values();
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i].real() > 0.0) idx.push_back(static_cast<std::int64_t>(i));
  }
  return idx;
}

// scale f to ||f||_{L^2(mu)} = 1
void normalize_l2mu(GridFn& f, const Measure& mu) {
  const double norm = lp_mu_norm(f, mu, Exponent(2.0));
  if (norm == 0.0) throw std::runtime_error("rstar iteration: zero function on the support");
  f.values() /= norm;
}

// adjoint step: (T* u)(x) = u^(x) on Supp(mu), zero elsewhere
GridFn adjoint_to_support(const GridFn& u, const std::vector<std::int64_t>& supp) {
  GridFn h = idft(u);
  GridFn f(h.field(), h.dim());
  for (std::int64_t i : supp) f.values()[i] = h.values()[i];
  return f;
}

PointSet cube_from_meta(const Measure& mu) {
  const auto& meta = mu.meta();
  if (meta.cube_side < 1) {
    throw std::invalid_argument("measure carries no cube metadata");
  }
  const std::int64_t side = meta.cube_side;
  const int n = mu.dim();
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
    members.push_back(point_to_index(x, mu.field()));
  }
  return PointSet(mu.field(), n, std::move(members));
}

}  // namespace

RStarEstimate rstar_2_2_exact(const Measure& mu) {
  if (mu.total_mass() <= 0.0) throw std::invalid_argument("rstar_2_2_exact: zero measure");
  const double pn = static_cast<double>(grid_size(mu.field(), mu.dim()));
  const double closed_form = std::sqrt(pn * mu.max_weight());

  // Power-iteration cross-check on T*T (multiplication by p^n mu on the
  // support), run through the generic transform path rather than the formula.
  const auto supp = support_indices(mu);
  GridFn f(mu.field(), mu.dim());
  for (std::int64_t i : supp) f.values()[i] = cplx(1.0, 0.0);
  normalize_l2mu(f, mu);
  double lambda = 0.0;
  int iterations = 0;
  for (; iterations < 500; ++iterations) {
    GridFn g = extension(f, mu);
    GridFn tf = adjoint_to_support(g, supp);
    // Rayleigh quotient <T*T f, f>_mu with ||f||_mu = 1
    const double next = kahan_sum((tf.values() * f.values().conjugate()).real() * mu.weights().values().real());
    f = std::move(tf);
    normalize_l2mu(f, mu);
    if (iterations > 0 && std::abs(next - lambda) <= 1e-12 * std::max(1.0, std::abs(next))) {
      lambda = next;
      ++iterations;
      break;
    }
    lambda = next;
  }

  RStarEstimate est;
  est.p_exp = Exponent(2.0);
  est.q = Exponent(2.0);
  est.value = closed_form;
  est.kind = EstimateKind::Exact;
  est.iterations = iterations;
  est.converged = true;
  est.cross_check = std::sqrt(lambda);
  // deterministic witness: the atom at the heaviest point
  GridFn witness(mu.field(), mu.dim());
  witness.values()[mu.argmax_weight()] = cplx(1.0, 0.0);
  est.numerator = lq_norm(extension(witness, mu), est.q);
  est.denominator = lp_mu_norm(witness, mu, est.p_exp);
  est.witness = std::move(witness);
  return est;
}

RStarEstimate rstar_lower_iterate(const Measure& mu, Exponent q, const IterateOptions& opts) {
  if (!q.is_inf() && q.value() < 2.0) {
    throw std::invalid_argument("rstar_lower_iterate: q must lie in [2, inf] (use rstar_2_2_exact below 2)");
  }
  const auto supp = support_indices(mu);
  if (supp.empty()) throw std::invalid_argument("rstar_lower_iterate: empty support");

  const int total_starts = opts.restarts + 1 + (mu.meta().cube_side >= 1 ? 1 : 0);
  double best_value = -1.0;
  GridFn best_witness(mu.field(), mu.dim());
  int best_iterations = 0;
  bool best_converged = false;

  for (int start = 0; start < total_starts; ++start) {
    GridFn f(mu.field(), mu.dim());
    if (start < opts.restarts) {
      Rng rng(mix_seed(opts.seed, static_cast<std::uint64_t>(start)));
      for (std::int64_t i : supp) f.values()[i] = rng.gauss_complex();
    } else if (start == opts.restarts) {
      for (std::int64_t i : supp) f.values()[i] = cplx(1.0, 0.0);
    } else {
      const PointSet cube = cube_from_meta(mu);
      for (std::int64_t i : cube.members()) f.values()[i] = cplx(1.0, 0.0);
    }
    normalize_l2mu(f, mu);

    double ratio = 0.0;
    bool converged = false;
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
      GridFn g = extension(f, mu);
      const double next = lq_norm(g, q);
      if (next + 1e-9 * std::max(1.0, ratio) < ratio) {
        throw std::runtime_error("rstar_lower_iterate: ratio decreased, internal invariant broken");
      }
      if (iter > 0 && std::abs(next - ratio) <= opts.rel_tol * std::max(next, 1e-300)) {
        ratio = std::max(ratio, next);
        converged = true;
        ++iter;
        break;
      }
      ratio = std::max(ratio, next);

      // duality map of g in L^q
      GridFn u(mu.field(), mu.dim());
      if (q.is_inf()) {
        Eigen::Index arg = 0;
        g.values().abs().maxCoeff(&arg);
        const cplx gv = g.values()[arg];
        u.values()[arg] = gv / std::abs(gv);
      } else {
        const double qv = q.value();
        const double gmax = g.values().abs().maxCoeff();
        // scale-free: u is renormalized through f anyway
        u.values() = (g.values().abs() / gmax).pow(qv - 2.0) * g.values();
      }
      f = adjoint_to_support(u, supp);
      normalize_l2mu(f, mu);
    }
    // the final f dominates every earlier iterate (monotone ascent); its
    // recomputed ratio is the value certified by the stored witness
    const double candidate = lq_norm(extension(f, mu), q);
    if (candidate > best_value) {
      best_value = candidate;
      best_witness = f;
      best_iterations = iter;
      best_converged = converged;
    }
  }

  RStarEstimate est;
  est.p_exp = Exponent(2.0);
  est.q = q;
  est.kind = EstimateKind::Iterated;
  est.iterations = best_iterations;
  est.converged = best_converged;
  est.seed = opts.seed;
  est.numerator = lq_norm(extension(best_witness, mu), q);
  est.denominator = lp_mu_norm(best_witness, mu, Exponent(2.0));
  est.value = est.numerator / est.denominator;
  est.witness = std::move(best_witness);
  return est;
}

RStarEstimate rstar_witness_cube(const Measure& mu, Exponent q) {
  const PointSet cube = cube_from_meta(mu);
  GridFn f = cube.indicator();
  RStarEstimate est;
  est.p_exp = Exponent(2.0);
  est.q = q;
  est.kind = EstimateKind::Witness;
  est.numerator = lq_norm(extension(f, mu), q);
  est.denominator = lp_mu_norm(f, mu, Exponent(2.0));
  est.value = est.numerator / est.denominator;
  est.iterations = 0;
  est.converged = true;
  est.witness = std::move(f);
  return est;
}

double critical_q(int n, double alpha, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("critical_q: beta must be positive");
  if (!(alpha > 0.0 && alpha < static_cast<double>(n))) {
    throw std::invalid_argument("critical_q: need 0 < alpha < n");
  }
  return (4.0 * n - 4.0 * alpha + 2.0 * beta) / beta;
}

double sharpness_tau(int n, double alpha, double beta, double q) {
  if (q <= 0.0) throw std::invalid_argument("sharpness_tau: q must be positive");
  return (4.0 * n - 4.0 * alpha + 2.0 * beta - q * beta) / (4.0 * q);
}

Exponent necessary_q(Exponent p_exp, int n, double alpha, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("necessary_q: beta must be positive");
  const double numer = 2.0 * n - 2.0 * alpha + beta;
  if (p_exp.is_inf()) return Exponent(numer / beta);
  const double p = p_exp.value();
  if (p == 1.0) return Exponent::inf();
  return Exponent(p * numer / ((p - 1.0) * beta));
}

double corollary_q_bound(double beta, int n) {
  if (beta <= 0.0) throw std::invalid_argument("corollary_q_bound: beta must be positive");
  return 4.0 * static_cast<double>(n) / beta;
}

}  // namespace ffr
