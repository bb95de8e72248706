#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "heis/domains.hpp"
#include "heis/potentials.hpp"
#include "heis/profiles.hpp"

#include <cmath>
#include <sstream>

using namespace heis;

TEST_CASE("catalog validation") {
  CHECK_THROWS_AS(make_domain("nope", {}), std::invalid_argument);
  CHECK_THROWS_AS(make_domain("gauge-ball", {}), std::invalid_argument);
  CHECK_THROWS_AS(make_domain("gauge-ring", {2.0, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_domain("slab", {-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_domain("touching-ball", {1.0}), std::invalid_argument);
  const DomainSpec tb = make_domain("touching-ball", {});
  CHECK(tb.contains(Point::h1(0, 0, 1)));
  CHECK(!tb.contains(Point::h1(0, 0, -0.01)));
  CHECK(!tb.contains(Point::h1(0, 0, 2.01)));
}

TEST_CASE("boundary distance on the slab is the vertical offset") {
  const DomainSpec slab = make_domain("slab", {1.0});
  for (const double x : {0.1, 0.3, 0.5, 0.8}) {
    const Point g = Point::h1(x, 0.4, -0.2);
    const BoundaryPoint bp = boundary_distance(g, slab);
    CHECK(bp.distance == doctest::Approx(std::min(x, 1.0 - x)).epsilon(1e-5));
  }
  CHECK_THROWS_AS(boundary_distance(Point::h1(2, 0, 0), slab),
                  std::domain_error);
}

TEST_CASE("boundary distance on the touching ball near the contact point") {
  const DomainSpec tb = make_domain("touching-ball", {});
  for (const double t : {0.01, 0.04, 0.09}) {
    const BoundaryPoint bp = boundary_distance(Point::h1(0, 0, t), tb);
    CHECK(std::abs(bp.distance - 2.0 * std::sqrt(t)) < 1e-3);
    // The nearest point is the contact point at the group identity.
    CHECK(bp.foot.z.norm() < 0.05);
    CHECK(std::abs(bp.foot.t) < 0.01);
  }
}

TEST_CASE("boundary distance on the gauge ball obeys the radial sandwich") {
  const DomainSpec ball = make_domain("gauge-ball", {1.0});
  for (const double seed_t : {0.0, 0.05, -0.1}) {
    const Point g = Point::h1(0.4, -0.3, seed_t);
    const double N = gauge_norm(g);
    const BoundaryPoint bp = boundary_distance(g, ball);
    // Reverse triangle inequality from below, admissible radial point above.
    CHECK(bp.distance >= (1.0 - N) - 1e-6);
    const Point radial = dilate(1.0 / N, g);
    CHECK(bp.distance <= gauge_distance(g, radial) + 1e-6);
    CHECK(gauge_norm(bp.foot) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("characteristic points of the catalog domains") {
  const DomainSpec slab = make_domain("slab", {1.0});
  CHECK(characteristic_points(slab, 40, 0.02).empty());

  const DomainSpec par = make_domain("paraboloid", {1.0});
  const auto cp = characteristic_points(par, 48, 0.02);
  REQUIRE(cp.size() == 1);
  CHECK(cp[0].z.norm() < 0.05);
  CHECK(std::abs(cp[0].t) < 0.05);

  const DomainSpec tb = make_domain("touching-ball", {});
  const auto tp = characteristic_points(tb, 48, 0.02);
  CHECK(tp.size() == 2);
  bool low = false, high = false;
  for (const Point& p : tp) {
    if (p.z.norm() < 0.05 && std::abs(p.t) < 0.05) low = true;
    if (p.z.norm() < 0.05 && std::abs(p.t - 2.0) < 0.05) high = true;
  }
  CHECK(low);
  CHECK(high);

  // Poles of a gauge ball; the set is invariant under plane rotations.
  const DomainSpec ball = make_domain("gauge-ball", {1.0});
  const auto bp = characteristic_points(ball, 48, 0.02);
  CHECK(bp.size() == 2);
  for (const Point& p : bp) {
    CHECK(p.z.norm() < 0.05);
    CHECK(std::abs(std::abs(p.t) - 0.25) < 0.05);
  }
  // The set commutes with plane rotations (the ball is rotation invariant).
  Eigen::VectorXd angle(1);
  angle << 1.1;
  const UnitarySymmetry S = UnitarySymmetry::plane_rotation(angle);
  for (const Point& p : bp) {
    const Point rp = unitary_apply(S, p);
    bool matched = false;
    for (const Point& q : bp)
      if ((rp.z - q.z).norm() + std::abs(rp.t - q.t) < 0.15) matched = true;
    CHECK(matched);
  }
}

TEST_CASE("model tangent centers agree with the hyperplane constructions") {
  // Vertical case: boundary of the slab at the identity.
  const Point g0 = Point::h1(0, 0.7, 0.3);
  const Eigen::Vector3d grad_v(1.0, 0.0, 0.0);
  const Point cv = tangent_ball_center_model(g0, grad_v, 0.5, true);
  Eigen::VectorXd w(2);
  w << 1, 0;
  const TangentBall ref =
      vertical_tangent_center(g0, VerticalHyperplane(w), 0.5);
  CHECK((cv.z - ref.center.z).norm() < 1e-12);
  CHECK(cv.t == doctest::Approx(ref.center.t));

  // Characteristic case: the plane {t = 0} at a non-characteristic point.
  const Point gb = Point::h1(1, 0, 0);
  const Eigen::Vector3d grad_c(0.0, 0.0, 1.0);
  const Point cc = tangent_ball_center_model(gb, grad_c, 0.7, true);
  CHECK(gauge_distance(cc, gb) == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(cc.t > 0.0);
  const Point co = tangent_ball_center_model(gb, grad_c, 0.7, false);
  CHECK(gauge_distance(co, gb) == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(co.t < 0.0);

  // Degenerate at a characteristic touch point.
  CHECK_THROWS_AS(
      tangent_ball_center_model(Point::identity(1), grad_c, 0.5, true),
      std::domain_error);
}

TEST_CASE("corkscrew points") {
  const DomainSpec slab = make_domain("slab", {1.0});
  const Point g0 = Point::h1(0, 0.2, -0.1);
  const auto A = corkscrew_point(g0, 0.4, slab, 2.0);
  REQUIRE(A.has_value());
  const double dg = gauge_distance(*A, g0);
  CHECK(dg > 0.4 / 2.0 * (1.0 - 1e-6));
  CHECK(dg <= 0.4 * (1.0 + 1e-9));
  CHECK(boundary_distance(*A, slab).distance > 0.4 / 2.0 * (1.0 - 1e-6));

  const DomainSpec ball = make_domain("gauge-ball", {1.0});
  const Point gb = Point::h1(1, 0, 0);  // non-characteristic boundary point
  CHECK(corkscrew_point(gb, 0.3, ball, 10.0).has_value());

  // An over-tight window reports failure rather than throwing.
  CHECK(!corkscrew_point(g0, 0.4, slab, 1.01).has_value());
}

TEST_CASE("outer ball checks") {
  const DomainSpec slab = make_domain("slab", {1.0});
  CHECK(outer_ball_check(Point::h1(0, 0.3, 0.2), 0.4, slab, 20000, 5));
  CHECK(outer_ball_check(Point::h1(1.0, -0.2, 0.0), 0.25, slab, 20000, 6));

  const DomainSpec ball = make_domain("gauge-ball", {1.0});
  CHECK(outer_ball_check(Point::h1(1, 0, 0), 0.2, ball, 20000, 7));

  // The paraboloid has no outer tangent ball at its characteristic point.
  const DomainSpec par = make_domain("paraboloid", {1.0});
  CHECK(!outer_ball_check(Point::identity(1), 0.2, par, 20000, 8));
  CHECK(!outer_ball_check(Point::identity(1), 0.05, par, 20000, 9));
}

TEST_CASE("decay profile on the slab with the exact linear field") {
  const DomainSpec slab = make_domain("slab", {1.0});
  Eigen::VectorXd w(2);
  w << 1, 0;
  const ScalarField u = [w](const Point& q) { return w.dot(q.z); };
  DecayOptions opts;
  opts.count = 24;
  const DecayProfile prof =
      decay_profile(u, slab, Point::h1(0, 0, 0), 0.3, opts);
  CHECK(prof.exponent == doctest::Approx(1.0).epsilon(5e-3));
  // Exact linearity: ratio / (d/r) constant across samples.
  double lo = 1e300, hi = -1e300;
  for (const ProfileSample& s : prof.samples) {
    const double c = s.ratio / s.d_over_r;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  CHECK((hi - lo) / hi < 1e-6);
  // Ratios grow monotonically with depth along the normal.
  for (size_t k = 1; k < prof.samples.size(); ++k)
    CHECK(prof.samples[k].ratio >= prof.samples[k - 1].ratio - 1e-12);
}

TEST_CASE("quadratic decay along the axis of the touching ball") {
  const DomainSpec tb = make_domain("touching-ball", {});
  const ScalarField u = [](const Point& q) { return q.t; };
  DecayOptions opts;
  opts.count = 20;
  opts.direction = {0.0, 0.0, 1.0};
  const DecayProfile prof =
      decay_profile(u, tb, Point::identity(1), 0.3, opts);
  CHECK(prof.exponent == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("linear decay of the ring barrier at a non-characteristic point") {
  const PExponent pe = PExponent::make(2.0, 1);
  const DomainSpec ring = make_domain("gauge-ring", {1.0, 3.0});
  const ScalarField u = [&](const Point& q) {
    return ring_barrier(q, Point::identity(1), 1.0, 3.0, pe);
  };
  DecayOptions opts;
  opts.count = 24;
  opts.direction = {1.0, 0.0, 0.0};
  const DecayProfile prof =
      decay_profile(u, ring, Point::h1(1, 0, 0), 0.2, opts);
  CHECK(std::abs(prof.exponent - 1.0) < 0.1);
}

TEST_CASE("comparison ratios") {
  const DomainSpec slab = make_domain("slab", {1.0});
  Eigen::VectorXd w(2);
  w << 1, 0;
  const ScalarField u = [w](const Point& q) { return w.dot(q.z); };
  const ScalarField v = [w](const Point& q) { return 2.0 * w.dot(q.z); };
  const RatioSpread rs =
      comparison_ratio(u, v, slab, Point::h1(0, 0, 0), 0.3, 40, 99);
  CHECK(rs.count == 40);
  CHECK(rs.spread == doctest::Approx(1.0));
  CHECK(rs.min_ratio == doctest::Approx(1.0));

  const ScalarField bad = [w](const Point& q) { return w.dot(q.z) - 10.0; };
  CHECK_THROWS_AS(
      comparison_ratio(bad, v, slab, Point::h1(0, 0, 0), 0.3, 10, 99),
      std::domain_error);
}

TEST_CASE("profile serialization") {
  const DomainSpec slab = make_domain("slab", {1.0});
  Eigen::VectorXd w(2);
  w << 1, 0;
  const ScalarField u = [w](const Point& q) { return w.dot(q.z); };
  DecayOptions opts;
  opts.count = 10;
  const DecayProfile prof =
      decay_profile(u, slab, Point::h1(0, 0, 0), 0.2, opts);
  std::ostringstream os;
  profile_to_csv(prof, os);
  const std::string text = os.str();
  CHECK(text.rfind("d_over_r,ratio\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        static_cast<long>(prof.samples.size()) + 1);
}
