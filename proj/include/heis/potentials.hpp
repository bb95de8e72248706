#pragma once

// Fundamental solutions of the horizontal p-Laplacian, their normalization
// constants, ring barriers, a finite-difference residual for the operator,
// and the boundary Green-function bound shapes.

#include "heis/core.hpp"

#include <cstdint>

namespace heis {

// Exponent bundle for the operator sum_i X_i(|Xu|^{p-2} X_i u) on H^n.
// Q = 2n + 2 is the homogeneous dimension; a = (p - Q)/(p - 1) is the decay
// exponent of the fundamental solution (negative for p < Q). The range is
// restricted to 1 < p <= Q; p = Q selects the logarithmic branch.
struct PExponent {
  double p = 2.0;
  int n = 1;
  int Q = 4;
  double a = 0.0;
  bool log_case = false;

  static PExponent make(double p, int n);
};

// Normalization: omega_p = integral of |X d(., e)|^p over the unit gauge
// ball, sigma_p = Q omega_p. Estimated by Monte Carlo; std_error is the
// standard error of the omega_p estimate.
struct SigmaP {
  double omega_p = 0.0;
  double sigma_p = 0.0;
  double std_error = 0.0;
};

// Monte Carlo estimate of omega_p over B(e, 1); the integrand |X d(., e)|
// is evaluated by the numeric horizontal gradient of the gauge norm.
// Requires samples >= 1e5; seeded and reproducible.
SigmaP estimate_omega_p(const PExponent& pe, std::int64_t samples,
                        std::uint64_t seed);

// Fundamental solution with singularity at gprime:
//   (p-1)/(Q-p) sigma_p^{-1/(p-1)} d(g, g')^{(p-Q)/(p-1)}   for p < Q,
//   -sigma_p^{-1/(p-1)} log d(g, g')                        for p = Q.
// Symmetric in its arguments; throws on coincident points.
double gamma_p(const Point& g, const Point& gprime, const PExponent& pe,
               const SigmaP& sp);

// p-harmonic ring barrier: 0 on {d(., center) = r_in}, 1 on
// {d(., center) = r_out}, monotone in d. Power profile for p < Q,
// logarithmic profile for p = Q.
double ring_barrier(const Point& gq, const Point& center, double r_in,
                    double r_out, const PExponent& pe);

// Nested central-difference approximation of sum_i X_i(|Xf|^{p-2} X_i f)(g);
// O(step^2)-consistent for smooth f with nonvanishing horizontal gradient.
// The weight magnitude is clamped below at 1e-14; if the clamp fires and
// p < 2 the degeneracy is reported through *degenerate when supplied.
double p_laplacian_residual(const ScalarField& f, const Point& g, double step,
                            const PExponent& pe, bool* degenerate = nullptr);

// Structural right-hand side of the boundary Green-function estimates,
// without the unknown multiplicative constant. With d = d(g, g') and
// |B(g, d)| = alpha_n d^Q:
//   p < Q:  (d/|B(g,d)|)^{1/(p-1)} * d_gp                (one-sided)
//           (d/|B(g,d)|)^{1/(p-1)} * d_g d_gp / d        (symmetric form)
//   p = Q:  log(diam/d) * d_gp / d                       (one-sided)
//           log(diam/d) * d_g d_gp / d^2                 (symmetric form)
// d_g, d_gp are the boundary distances of g and g', supplied by the caller.
double green_bound(const Point& g, const Point& gprime, const PExponent& pe,
                   double d_g, double d_gp, double diam, double alpha_n,
                   bool symmetric = false);

}  // namespace heis
