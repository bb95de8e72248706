#pragma once

// Boundary decay profiles and comparison ratios for positive fields
// vanishing on a boundary portion: samples of (d(g, boundary)/r,
// u(g)/u(A_r(g0))) with a log-log exponent fit, and the normalized spread of
// u/v over a non-tangential region.

#include "heis/domains.hpp"

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace heis {

struct ProfileSample {
  double d_over_r = 0.0;
  double ratio = 0.0;
};

struct DecayProfile {
  Point g0;
  double r = 0.0;
  Point anchor;  // reference interior point A_r(g0)
  double anchor_value = 0.0;
  std::vector<ProfileSample> samples;
  double exponent = 0.0;  // least-squares log-log slope over d/r in [0.01, 0.5]
  double constant = 0.0;  // exp(intercept) of the same fit
};

struct DecayOptions {
  int count = 32;
  double M = 10.0;          // corkscrew scale bound for the anchor search
  double kappa = 4.0;       // non-tangential cone opening for cone sampling
  std::uint64_t seed = 2024;
  bool ray_mode = true;     // sample along a ray from g0; else cone sampling
  // Ray direction in (x, y, t); zero selects the Euclidean inward normal.
  std::array<double, 3> direction{0.0, 0.0, 0.0};
  double fit_lo = 0.01;     // fit window in d/r
  double fit_hi = 0.5;
};

// Reference point at scale r: the tangent-model metric normal at depth r/2
// when available, otherwise a corkscrew search with M = 4.
Point anchor_point(const DomainSpec& D, const Point& g0, double r);

// Samples u against the boundary distance near g0 and fits the decay
// exponent. u must be positive at the sampled points (throws otherwise).
DecayProfile decay_profile(const ScalarField& u, const DomainSpec& D,
                           const Point& g0, double r,
                           const DecayOptions& opts = {});

struct RatioSpread {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double spread = 0.0;  // max/min
  int count = 0;
};

// Normalized quotients (u(g)/v(g)) / (u(A_r)/v(A_r)) over non-tangential
// samples of Omega intersected with B(g0, r).
RatioSpread comparison_ratio(const ScalarField& u, const ScalarField& v,
                             const DomainSpec& D, const Point& g0, double r,
                             int count, std::uint64_t seed,
                             double kappa = 4.0);

void profile_to_csv(const DecayProfile& prof, std::ostream& os);

}  // namespace heis
