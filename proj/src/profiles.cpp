#include "heis/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace heis {

namespace {

double checked_positive(const ScalarField& u, const Point& g,
                        const char* what) {
  const double v = u(g);
  if (!(v > 0.0))
    throw std::domain_error(std::string("nonpositive field sample in ") +
                            what);
  return v;
}

void fit_loglog(DecayProfile* prof, double lo, double hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (const ProfileSample& s : prof->samples) {
    if (s.d_over_r < lo || s.d_over_r > hi) continue;
    const double x = std::log(s.d_over_r);
    const double y = std::log(s.ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 5)
    throw std::runtime_error("too few profile samples inside the fit window");
  const double denom = m * sxx - sx * sx;
  prof->exponent = (m * sxy - sx * sy) / denom;
  prof->constant = std::exp((sy - prof->exponent * sx) / m);
}

}  // namespace

Point anchor_point(const DomainSpec& D, const Point& g0, double r) {
  try {
    const Eigen::Vector3d grad = domain_gradient(D, g0, 1e-6 * (1.0 + r));
    const Point A = tangent_ball_center_model(g0, grad, 0.5 * r, true);
    if (D.contains(A) && gauge_distance(A, g0) <= r &&
        boundary_distance(A, D).distance > r / 8.0)
      return A;
  } catch (const std::exception&) {
    // fall through to the corkscrew search
  }
  const auto A = corkscrew_point(g0, r, D, 4.0);
  if (!A)
    throw std::runtime_error("no reference corkscrew point found at scale r");
  return *A;
}

DecayProfile decay_profile(const ScalarField& u, const DomainSpec& D,
                           const Point& g0, double r,
                           const DecayOptions& opts) {
  if (!(r > 0.0)) throw std::invalid_argument("scale r must be positive");
  if (opts.count < 8) throw std::invalid_argument("need at least 8 samples");
  DecayProfile prof;
  prof.g0 = g0;
  prof.r = r;
  prof.anchor = anchor_point(D, g0, r);
  prof.anchor_value = checked_positive(u, prof.anchor, "decay_profile anchor");

  if (opts.ray_mode) {
    Eigen::Vector3d dir(opts.direction[0], opts.direction[1],
                        opts.direction[2]);
    if (dir.norm() == 0.0) {
      dir = domain_gradient(D, g0, 1e-6 * (1.0 + r));
    }
    dir /= dir.norm();
    const auto at = [&](double s) {
      return Point(
          Eigen::Vector2d(g0.z[0] + s * dir[0], g0.z[1] + s * dir[1]),
          g0.t + s * dir[2]);
    };
    const auto depth = [&](double s) {
      const Point g = at(s);
      if (!D.contains(g)) return -1.0;
      return boundary_distance(g, D).distance;
    };
    // Calibrate the ray parameter range against the target depth window by
    // a short monotone scan, then bisect the two ends.
    const double d_lo = 0.6 * opts.fit_lo * r;
    const double d_hi = 1.1 * opts.fit_hi * r;
    double s_hi = r;
    while (s_hi > 1e-12 && depth(s_hi) < 0.0) s_hi *= 0.5;
    if (s_hi <= 1e-12)
      throw std::runtime_error("ray leaves the domain immediately");
    while (depth(s_hi) < d_hi) {
      const double trial = 2.0 * s_hi;
      const double dt = depth(trial);
      if (dt < 0.0 || dt < depth(s_hi)) break;
      s_hi = trial;
    }
    const auto solve_depth = [&](double target) {
      double lo = 0.0, hi = s_hi;
      for (int it = 0; it < 48; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (depth(mid) < target)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    };
    const double s_min = solve_depth(d_lo);
    const double s_max = std::min(solve_depth(std::min(d_hi, depth(s_hi))),
                                  s_hi);
    if (!(s_max > s_min))
      throw std::runtime_error("degenerate ray sample range");
    for (int k = 0; k < opts.count; ++k) {
      const double f = static_cast<double>(k) / (opts.count - 1);
      const double s = s_min * std::pow(s_max / s_min, f);
      const Point g = at(s);
      if (!D.contains(g)) continue;
      const double d = boundary_distance(g, D).distance;
      const double val = checked_positive(u, g, "decay_profile");
      prof.samples.push_back({d / r, val / prof.anchor_value});
    }
  } else {
    std::mt19937_64 gen(opts.seed);
    int tries = 0;
    const int max_tries = 400 * opts.count;
    while (static_cast<int>(prof.samples.size()) < opts.count &&
           tries++ < max_tries) {
      const Point g = sample_gauge_ball(gen, g0, r);
      if (!D.contains(g)) continue;
      const double d = boundary_distance(g, D).distance;
      if (gauge_distance(g, g0) > opts.kappa * d) continue;  // tangential
      if (d / r < opts.fit_lo || d / r > opts.fit_hi) continue;
      const double val = checked_positive(u, g, "decay_profile");
      prof.samples.push_back({d / r, val / prof.anchor_value});
    }
  }
  fit_loglog(&prof, opts.fit_lo, opts.fit_hi);
  return prof;
}

RatioSpread comparison_ratio(const ScalarField& u, const ScalarField& v,
                             const DomainSpec& D, const Point& g0, double r,
                             int count, std::uint64_t seed, double kappa) {
  if (!(r > 0.0)) throw std::invalid_argument("scale r must be positive");
  if (count < 1) throw std::invalid_argument("need at least one sample");
  const Point A = anchor_point(D, g0, r);
  const double base = checked_positive(u, A, "comparison_ratio") /
                      checked_positive(v, A, "comparison_ratio");
  RatioSpread out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = 0.0;
  std::mt19937_64 gen(seed);
  int tries = 0;
  const int max_tries = 400 * count;
  while (out.count < count && tries++ < max_tries) {
    const Point g = sample_gauge_ball(gen, g0, r);
    if (!D.contains(g)) continue;
    const double d = boundary_distance(g, D).distance;
    if (gauge_distance(g, g0) > kappa * d) continue;
    const double w = (checked_positive(u, g, "comparison_ratio") /
                      checked_positive(v, g, "comparison_ratio")) /
                     base;
    out.min_ratio = std::min(out.min_ratio, w);
    out.max_ratio = std::max(out.max_ratio, w);
    ++out.count;
  }
  if (out.count == 0)
    throw std::runtime_error("no admissible non-tangential samples found");
  out.spread = out.max_ratio / out.min_ratio;
  return out;
}

void profile_to_csv(const DecayProfile& prof, std::ostream& os) {
  os << "d_over_r,ratio\n";
  char line[80];
  for (const ProfileSample& s : prof.samples) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g\n", s.d_over_r, s.ratio);
    os << line;
  }
}

}  // namespace heis
