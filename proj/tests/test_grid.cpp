#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "heis/grid.hpp"
#include "heis/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace heis;

namespace {

ScalarField linear_x() {
  return [](const Point& q) { return q.z[0]; };
}

double max_interior_error(const GridDomain& G, const DiscreteField& u,
                          const ScalarField& ref) {
  double worst = 0.0;
  for (int idx : G.interior)
    worst = std::max(worst, std::abs(u[idx] - ref(G.point(idx))));
  return worst;
}

}  // namespace

TEST_CASE("domain classification") {
  const GridDomain ball = build_domain("gauge-ball", {1.0}, 0.1);
  CHECK(!ball.interior.empty());
  for (int idx : ball.interior) CHECK(gauge_norm(ball.point(idx)) < 1.0);

  const GridDomain slab = build_domain("slab", {1.0}, 0.125);
  int plane_carriers = 0, wall_carriers = 0;
  for (int idx = 0; idx < slab.node_count(); ++idx) {
    if (slab.kind[idx] != NodeKind::boundary) continue;
    const Point p = slab.point(idx);
    // Every carrier sits within one spacing of the two vertical planes or
    // strictly between them (box-wall carriers).
    CHECK(p.z[0] > -0.125 - 1e-12);
    CHECK(p.z[0] < 1.125 + 1e-12);
    if (std::abs(p.z[0]) <= 0.125 + 1e-12 ||
        std::abs(p.z[0] - 1.0) <= 0.125 + 1e-12)
      ++plane_carriers;
    else
      ++wall_carriers;
  }
  CHECK(plane_carriers > 0);
  CHECK(wall_carriers > 0);

  const GridDomain tb = build_domain("touching-ball", {}, 0.05);
  // The origin is a boundary-adjacent carrier of the touching ball.
  bool origin_boundary = false;
  for (int idx = 0; idx < tb.node_count(); ++idx) {
    if (tb.kind[idx] != NodeKind::boundary) continue;
    const Point p = tb.point(idx);
    if (p.z.norm() < 1e-9 && std::abs(p.t) < 0.051) origin_boundary = true;
  }
  CHECK(origin_boundary);

  CHECK_THROWS_AS(build_domain("no-such-domain", {}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_domain("gauge-ball", {0.01}, 0.1),
                  std::invalid_argument);  // empty interior
}

TEST_CASE("p-energy basics") {
  const PExponent p2 = PExponent::make(2.0, 1);
  const PExponent p3 = PExponent::make(3.0, 1);
  const GridDomain slab = build_domain("slab", {1.0}, 0.1);

  const DiscreteField c = sample_field(slab, [](const Point&) { return 2.5; });
  CHECK(p_energy(c, slab, p2) == 0.0);

  const DiscreteField lin = sample_field(slab, linear_x());
  // Unit horizontal gradient: the energy approximates the covered volume.
  double covered = slab.cells.size() * slab.h * slab.h * slab.h;
  CHECK(p_energy(lin, slab, p3) == doctest::Approx(covered).epsilon(1e-9));

  DiscreteField doubled = lin;
  for (double& v : doubled) v *= 2.0;
  CHECK(p_energy(doubled, slab, p3) ==
        doctest::Approx(std::pow(2.0, 3.0) * p_energy(lin, slab, p3)));
}

TEST_CASE("constant boundary data solves to the constant") {
  const GridDomain ball = build_domain("gauge-ball", {1.0}, 0.15);
  const DiscreteField bc =
      boundary_values(ball, [](const Point&) { return 4.2; });
  const SolveResult res = solve_dirichlet(ball, bc, PExponent::make(2.5, 1),
                                          {1e-10, 2000, 1.5, true});
  CHECK(res.converged);
  for (int idx : ball.interior) CHECK(res.u[idx] == doctest::Approx(4.2));
}

TEST_CASE("slab with linear data reproduces the linear field") {
  for (const double p : {2.0, 3.0}) {
    const PExponent pe = PExponent::make(p, 1);
    const GridDomain slab = build_domain("slab", {1.0}, 0.125);
    const DiscreteField bc = boundary_values(slab, linear_x());
    const SolveResult res = solve_dirichlet(slab, bc, pe, {1e-9, 4000});
    CHECK(res.converged);
    CHECK(max_interior_error(slab, res.u, linear_x()) <= 2.0 * slab.h);
    // Energy descent along the sweeps.
    for (size_t k = 1; k < res.energies.size(); ++k)
      CHECK(res.energies[k] <= res.energies[k - 1] * (1.0 + 1e-12));
    // Discrete maximum principle.
    double bmin = 1e300, bmax = -1e300;
    for (int idx = 0; idx < slab.node_count(); ++idx)
      if (slab.kind[idx] == NodeKind::boundary) {
        bmin = std::min(bmin, bc[idx]);
        bmax = std::max(bmax, bc[idx]);
      }
    for (int idx : slab.interior) {
      CHECK(res.u[idx] >= bmin - 1e-9);
      CHECK(res.u[idx] <= bmax + 1e-9);
    }
  }
}

TEST_CASE("ring barrier data is reproduced by the solve") {
  const PExponent pe = PExponent::make(2.5, 1);
  const ScalarField barrier = [&](const Point& q) {
    return ring_barrier(q, Point::identity(1), 0.5, 2.0, pe);
  };
  const GridDomain ring = build_domain("gauge-ring", {0.5, 2.0}, 0.2);
  const DiscreteField bc = boundary_values(ring, barrier);
  const SolveResult res = solve_dirichlet(ring, bc, pe, {1e-8, 4000});
  CHECK(res.converged);
  CHECK(max_interior_error(ring, res.u, barrier) < 0.30);
  // Refinement shrinks the defect (full order study in the acceptance run).
  const GridDomain fine = build_domain("gauge-ring", {0.5, 2.0}, 0.1);
  const SolveResult res2 =
      solve_dirichlet(fine, boundary_values(fine, barrier), pe, {1e-8, 8000});
  CHECK(res2.converged);
  CHECK(max_interior_error(fine, res2.u, barrier) <
        0.7 * max_interior_error(ring, res.u, barrier));
}

TEST_CASE("scaling equivariance of the solve") {
  const PExponent pe = PExponent::make(3.0, 1);
  const GridDomain ball = build_domain("gauge-ball", {1.0}, 0.2);
  const ScalarField data = [](const Point& q) { return q.z[0] + 0.3 * q.t; };
  const DiscreteField bc = boundary_values(ball, data);
  DiscreteField bc2 = bc;
  for (double& v : bc2) v *= 2.0;
  const SolveResult a = solve_dirichlet(ball, bc, pe, {1e-11, 6000});
  const SolveResult b = solve_dirichlet(ball, bc2, pe, {1e-11, 6000});
  double worst = 0.0;
  for (int idx : ball.interior)
    worst = std::max(worst, std::abs(b.u[idx] - 2.0 * a.u[idx]));
  CHECK(worst < 1e-6);
}

TEST_CASE("comparison principle on discrete solutions") {
  const PExponent pe = PExponent::make(2.5, 1);
  const ScalarField barrier = [&](const Point& q) {
    return ring_barrier(q, Point::identity(1), 0.5, 2.0, pe);
  };
  const GridDomain ring = build_domain("gauge-ring", {0.5, 2.0}, 0.25);
  const DiscreteField bu = boundary_values(ring, barrier);
  DiscreteField bv = bu;
  for (double& v : bv) v *= 0.5;
  const SolveResult u = solve_dirichlet(ring, bu, pe, {1e-8, 4000});
  const SolveResult v = solve_dirichlet(ring, bv, pe, {1e-8, 4000});
  CHECK(comparison_check(u.u, v.u, ring));
  CHECK(comparison_check(u.u, u.u, ring));
  // Adding a constant to the data shifts the solution by the constant.
  DiscreteField bshift = bu;
  for (int idx = 0; idx < ring.node_count(); ++idx)
    if (ring.kind[idx] == NodeKind::boundary) bshift[idx] += 1.0;
  for (int c = ring.node_count(); c < ring.value_count(); ++c)
    bshift[c] += 1.0;  // cut-edge data carries the same shift
  const SolveResult w = solve_dirichlet(ring, bshift, pe, {1e-8, 4000});
  CHECK(comparison_check(w.u, u.u, ring));
  double worst = 0.0;
  for (int idx : ring.interior)
    worst = std::max(worst, std::abs(w.u[idx] - u.u[idx] - 1.0));
  CHECK(worst < 1e-5);
}

TEST_CASE("solver reports non-convergence") {
  const GridDomain ball = build_domain("gauge-ball", {1.0}, 0.2);
  const DiscreteField bc = boundary_values(ball, linear_x());
  SolveOptions opts;
  opts.tol = 1e-14;
  opts.max_sweeps = 1;
  const SolveResult res = solve_dirichlet(ball, bc, PExponent::make(2.0, 1),
                                          opts);
  CHECK(!res.converged);
  CHECK(res.residual > 0.0);
  opts.throw_on_fail = true;
  CHECK_THROWS_AS(
      solve_dirichlet(ball, bc, PExponent::make(2.0, 1), opts),
      std::runtime_error);
}

TEST_CASE("interpolation and export") {
  const GridDomain ball = build_domain("gauge-ball", {1.0}, 0.1);
  const ScalarField f = [](const Point& q) {
    return 1.0 + q.z[0] - 2.0 * q.z[1] + 0.5 * q.t;
  };
  const DiscreteField u = sample_field(ball, f);
  const Point probe = Point::h1(0.13, -0.21, 0.04);
  CHECK(interpolate(ball, u, probe) ==
        doctest::Approx(f(probe)).epsilon(1e-12));
  CHECK_THROWS_AS(interpolate(ball, u, Point::h1(5, 5, 5)),
                  std::domain_error);

  std::ostringstream os;
  export_csv(ball, u, os);
  const std::string text = os.str();
  CHECK(text.rfind("x,y,t,value,kind\n", 0) == 0);
  int lines = std::count(text.begin(), text.end(), '\n');
  int carriers = 0;
  for (int idx = 0; idx < ball.node_count(); ++idx)
    if (ball.kind[idx] != NodeKind::exterior) ++carriers;
  CHECK(lines == carriers + 1);
}
