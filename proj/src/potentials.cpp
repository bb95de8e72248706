#include "heis/potentials.hpp"

#include <cmath>
#include <random>

namespace heis {

namespace {

constexpr double kWeightClamp = 1e-14;

}  // namespace

PExponent PExponent::make(double p, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  PExponent pe;
  pe.p = p;
  pe.n = n;
  pe.Q = 2 * n + 2;
  if (!(p > 1.0) || p > pe.Q + 1e-12)
    throw std::invalid_argument("exponent must satisfy 1 < p <= Q");
  pe.log_case = std::abs(p - pe.Q) <= 1e-12;
  pe.a = pe.log_case ? 0.0 : (p - pe.Q) / (p - 1.0);
  return pe;
}

SigmaP estimate_omega_p(const PExponent& pe, std::int64_t samples,
                        std::uint64_t seed) {
  if (samples < 100000)
    throw std::invalid_argument("need at least 1e5 samples");
  const int n = pe.n;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uz(-1.0, 1.0);
  std::uniform_real_distribution<double> ut(-0.25, 0.25);
  const ScalarField gauge = [](const Point& q) { return gauge_norm(q); };
  double sum = 0.0, sum2 = 0.0;
  Eigen::VectorXd z(2 * n);
  for (std::int64_t s = 0; s < samples; ++s) {
    for (int k = 0; k < 2 * n; ++k) z[k] = uz(gen);
    const double t = ut(gen);
    const double zn2 = z.squaredNorm();
    double value = 0.0;
    if (zn2 * zn2 + 16.0 * t * t < 1.0) {
      const Point g(z, t);
      const double slope = horizontal_gradient(gauge, g).norm();
      value = std::pow(slope, pe.p);
    }
    sum += value;
    sum2 += value * value;
  }
  const double box = std::pow(2.0, 2 * n) * 0.5;
  const double mean = sum / static_cast<double>(samples);
  const double var =
      (sum2 / static_cast<double>(samples) - mean * mean) /
      static_cast<double>(samples - 1);
  SigmaP out;
  out.omega_p = box * mean;
  out.sigma_p = pe.Q * out.omega_p;
  out.std_error = box * std::sqrt(std::max(var, 0.0));
  return out;
}

double gamma_p(const Point& g, const Point& gprime, const PExponent& pe,
               const SigmaP& sp) {
  const double d = gauge_distance(g, gprime);
  if (!(d > 0.0))
    throw std::domain_error("fundamental solution is singular at g = g'");
  const double scale = std::pow(sp.sigma_p, -1.0 / (pe.p - 1.0));
  if (pe.log_case) return -scale * std::log(d);
  return (pe.p - 1.0) / (pe.Q - pe.p) * scale * std::pow(d, pe.a);
}

double ring_barrier(const Point& gq, const Point& center, double r_in,
                    double r_out, const PExponent& pe) {
  if (!(0.0 < r_in && r_in < r_out))
    throw std::domain_error("ring requires 0 < r_in < r_out");
  const double d = gauge_distance(gq, center);
  if (!(d > 0.0))
    throw std::domain_error("barrier is singular at the ring center");
  if (pe.log_case) return std::log(d / r_in) / std::log(r_out / r_in);
  const double num = std::pow(r_in, pe.a) - std::pow(d, pe.a);
  const double den = std::pow(r_in, pe.a) - std::pow(r_out, pe.a);
  return num / den;
}

double p_laplacian_residual(const ScalarField& f, const Point& g, double step,
                            const PExponent& pe, bool* degenerate) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  bool clamped = false;
  // Flux components F_i = |Xf|^{p-2} X_i f as sampled fields; the outer
  // divergence reuses the same step.
  const auto flux = [&](const Point& q, int i) {
    const HorizontalVector grad = horizontal_gradient(f, q, step);
    double mag = grad.norm();
    if (mag < kWeightClamp) {
      mag = kWeightClamp;
      clamped = true;
    }
    return std::pow(mag, pe.p - 2.0) * grad[i];
  };
  double div = 0.0;
  for (int i = 0; i < g.horizontal_dim(); ++i) {
    const ScalarField fi = [&flux, i](const Point& q) { return flux(q, i); };
    div += horizontal_derivative(fi, g, i, step);
  }
  if (degenerate) *degenerate = clamped && pe.p < 2.0;
  return div;
}

double green_bound(const Point& g, const Point& gprime, const PExponent& pe,
                   double d_g, double d_gp, double diam, double alpha_n,
                   bool symmetric) {
  if (d_g < 0.0 || d_gp < 0.0)
    throw std::invalid_argument("boundary distances must be nonnegative");
  if (!(diam > 0.0) || !(alpha_n > 0.0))
    throw std::invalid_argument("diam and alpha_n must be positive");
  const double d = gauge_distance(g, gprime);
  if (!(d > 0.0)) throw std::domain_error("bound is singular at g = g'");
  if (pe.log_case) {
    if (d > diam * (1.0 + 1e-12))
      throw std::domain_error("d(g, g') exceeds the supplied diameter");
    const double logf = std::log(std::max(diam / d, 1.0));
    return symmetric ? logf * d_g * d_gp / (d * d) : logf * d_gp / d;
  }
  const double ball = alpha_n * std::pow(d, pe.Q);
  const double base = std::pow(d / ball, 1.0 / (pe.p - 1.0));
  return symmetric ? base * d_g * d_gp / d : base * d_gp;
}

}  // namespace heis
