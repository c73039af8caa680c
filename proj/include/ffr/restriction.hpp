#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ffr/measure.hpp"

namespace ffr {

enum class EstimateKind { Exact, Witness, Iterated };

std::string to_string(EstimateKind kind);

// A certified lower bound (or exact value) for R*(p -> q), together with the
// function that realizes it. `value` is always reproducible from `witness`
// as lq_norm(extension(witness, mu), q) / lp_mu_norm(witness, mu, p_exp).
struct RStarEstimate {
  Exponent p_exp = Exponent(2.0);
  Exponent q = Exponent(2.0);
  double value = 0.0;
  EstimateKind kind = EstimateKind::Witness;
  std::optional<GridFn> witness;
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  double numerator = 0.0;    // lq_norm of the extension of the witness
  double denominator = 0.0;  // lp_mu_norm of the witness
  std::optional<double> cross_check;  // power-iteration value for kind == Exact
};

// (f mu)^ = dft of the pointwise product f * mu.
GridFn extension(const GridFn& f, const Measure& mu);

// Dual-form ratio ||g^||_{L^{p'}(mu)} / ||g||_{L^{q'}(F^n)}.
double restriction_ratio(const GridFn& g, const Measure& mu, Exponent p_exp, Exponent q);

// Closed form R*(2->2) = sqrt(p^n * max mu), cross-checked by power iteration
// on the diagonal operator T*T.
RStarEstimate rstar_2_2_exact(const Measure& mu);

struct IterateOptions {
  int restarts = 8;
  int max_iterations = 500;
  double rel_tol = 1e-10;
  std::uint64_t seed = 1;
};

// Lower bound for R*(2->q), q in [2, inf], by alternating maximization of
// Re<(f mu)^, u> over ||f||_{L^2(mu)} = 1, ||u||_{q'} = 1:
//   g = (f mu)^;  u = |g|^{q-1} phase(g) (or the argmax atom for q = inf);
//   f <- u^ restricted to Supp(mu), renormalized.
// Each half step is a global partial maximizer, so the achieved ratio is
// nondecreasing; the best (value, restart index) pair wins. Starts: `restarts`
// random complex functions on Supp(mu), plus 1_{Supp mu}, plus 1_A when the
// measure carries cube metadata. q = 2 runs the same loop and must agree with
// the closed form.
RStarEstimate rstar_lower_iterate(const Measure& mu, Exponent q, const IterateOptions& opts = {});

// The sharpness witness f = 1_A reconstructed from cube metadata.
RStarEstimate rstar_witness_cube(const Measure& mu, Exponent q);

// q_{n,alpha,beta} = (4n - 4 alpha + 2 beta) / beta.
double critical_q(int n, double alpha, double beta);

// tau = (4n - 4 alpha + 2 beta - q beta) / (4q); positive iff q < q_{n,alpha,beta}.
double sharpness_tau(int n, double alpha, double beta, double q);

// Threshold below which R*(p -> q) <~ 1 must fail:
//   p = 1 -> inf;  p = inf -> (2n - 2 alpha + beta)/beta;
//   else p(2n - 2 alpha + beta) / ((p-1) beta).
Exponent necessary_q(Exponent p_exp, int n, double alpha, double beta);

// 4n / beta, the threshold available from Fourier decay alone; equals
// critical_q(n, beta/2, beta).
double corollary_q_bound(double beta, int n);

}  // namespace ffr
