#include "heis/grid.hpp"

#include <cmath>
#include <ostream>

namespace heis {

namespace {

double regularization(const PExponent& pe) { return pe.p < 2.0 ? 1e-8 : 0.0; }

}  // namespace

GridDomain build_domain(const DomainSpec& D, double h,
                        const std::array<double, 3>& lo,
                        const std::array<double, 3>& hi) {
  if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  GridDomain G;
  G.domain_id = D.id;
  G.h = h;
  for (int k = 0; k < 3; ++k) {
    if (!(hi[k] > lo[k])) throw std::invalid_argument("degenerate box");
    G.dims[k] = static_cast<int>(std::floor((hi[k] - lo[k]) / h + 1e-9)) + 1;
    if (G.dims[k] < 3) throw std::invalid_argument("box too small for spacing");
    G.origin[k] = lo[k];
  }
  const int total = G.node_count();
  G.kind.assign(total, NodeKind::exterior);

  std::vector<char> inside(total, 0);
  for (int idx = 0; idx < total; ++idx)
    inside[idx] = D.phi(G.point(idx)) > 0.0 ? 1 : 0;

  const auto on_shell = [&](int i, int j, int k) {
    return i == 0 || j == 0 || k == 0 || i == G.dims[0] - 1 ||
           j == G.dims[1] - 1 || k == G.dims[2] - 1;
  };
  for (int k = 0; k < G.dims[2]; ++k)
    for (int j = 0; j < G.dims[1]; ++j)
      for (int i = 0; i < G.dims[0]; ++i) {
        const int idx = G.index(i, j, k);
        if (inside[idx])
          G.kind[idx] =
              on_shell(i, j, k) ? NodeKind::boundary : NodeKind::interior;
      }
  // Inside nodes closer than kSnap * h to the level set (first-order signed
  // distance |phi| / |grad phi|, checked only next to outside neighbors) are
  // snapped to Dirichlet carriers; this keeps the distance from every
  // unknown to its boundary anchors uniformly comparable to h.
  constexpr double kSnap = 0.35;
  for (int k = 0; k < G.dims[2]; ++k)
    for (int j = 0; j < G.dims[1]; ++j)
      for (int i = 0; i < G.dims[0]; ++i) {
        const int idx = G.index(i, j, k);
        if (G.kind[idx] != NodeKind::interior) continue;
        const int di[6] = {1, -1, 0, 0, 0, 0};
        const int dj[6] = {0, 0, 1, -1, 0, 0};
        const int dk[6] = {0, 0, 0, 0, 1, -1};
        bool exposed = false;
        for (int m = 0; m < 6 && !exposed; ++m)
          exposed = !inside[G.index(i + di[m], j + dj[m], k + dk[m])];
        if (!exposed) continue;
        const Point own = G.point(idx);
        const double step = h / 100.0;
        Eigen::Vector3d grad;
        for (int c = 0; c < 3; ++c) {
          Point fwd = own, bwd = own;
          if (c < 2) {
            fwd.z[c] += step;
            bwd.z[c] -= step;
          } else {
            fwd.t += step;
            bwd.t -= step;
          }
          grad[c] = (D.phi(fwd) - D.phi(bwd)) / (2.0 * step);
        }
        const double gn = grad.norm();
        if (gn > 0.0 && D.phi(own) / gn < kSnap * h)
          G.kind[idx] = NodeKind::boundary;
      }
  // Outside nodes adjacent (6-neighborhood) to an inside node become
  // Dirichlet carriers; adjacency to inside (rather than interior) keeps the
  // energy cells complete where the domain meets the box shell.
  for (int k = 0; k < G.dims[2]; ++k)
    for (int j = 0; j < G.dims[1]; ++j)
      for (int i = 0; i < G.dims[0]; ++i) {
        const int idx = G.index(i, j, k);
        if (inside[idx]) continue;
        const int di[6] = {1, -1, 0, 0, 0, 0};
        const int dj[6] = {0, 0, 1, -1, 0, 0};
        const int dk[6] = {0, 0, 0, 0, 1, -1};
        for (int m = 0; m < 6; ++m) {
          const int ni = i + di[m], nj = j + dj[m], nk = k + dk[m];
          if (ni < 0 || nj < 0 || nk < 0 || ni >= G.dims[0] ||
              nj >= G.dims[1] || nk >= G.dims[2])
            continue;
          if (inside[G.index(ni, nj, nk)]) {
            G.kind[idx] = NodeKind::boundary;
            break;
          }
        }
      }

  // Energy cells: all four stencil nodes must carry values. Edges between an
  // interior node and an outside carrier are cut at the level-set crossing.
  const auto carries = [&](int idx) {
    return G.kind[idx] != NodeKind::exterior;
  };
  const auto edge_cut = [&](int in_idx, int out_idx) {
    // Bisect phi along the edge from the inside endpoint to the carrier.
    const Point a = G.point(in_idx);
    const Point b = G.point(out_idx);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      const Point q(a.z + mid * (b.z - a.z), a.t + mid * (b.t - a.t));
      (D.phi(q) > 0.0 ? lo : hi) = mid;
    }
    const double s = std::max(0.5 * (lo + hi), 0.05);
    const Point q(a.z + s * (b.z - a.z), a.t + s * (b.t - a.t));
    G.cuts.push_back({q.z[0], q.z[1], q.t});
    const int cut_value = total + static_cast<int>(G.cuts.size()) - 1;
    return std::pair<int, double>{cut_value, s};
  };
  for (int k = 0; k + 1 < G.dims[2]; ++k)
    for (int j = 0; j + 1 < G.dims[1]; ++j)
      for (int i = 0; i + 1 < G.dims[0]; ++i) {
        const int n0 = G.index(i, j, k);
        const int arm[3] = {G.index(i + 1, j, k), G.index(i, j + 1, k),
                            G.index(i, j, k + 1)};
        if (!(carries(n0) && carries(arm[0]) && carries(arm[1]) &&
              carries(arm[2])))
          continue;
        // Skip cells not touching any unknown; they contribute a constant.
        if (G.kind[n0] != NodeKind::interior &&
            G.kind[arm[0]] != NodeKind::interior &&
            G.kind[arm[1]] != NodeKind::interior &&
            G.kind[arm[2]] != NodeKind::interior)
          continue;
        GridDomain::Cell cell{n0,
                              arm[0],
                              arm[1],
                              arm[2],
                              G.origin[0] + i * h,
                              G.origin[1] + j * h,
                              {},
                              {},
                              {}};
        const bool base_interior = G.kind[n0] == NodeKind::interior;
        const bool base_outside = !inside[n0];
        for (int d = 0; d < 3; ++d) {
          cell.src_lo[d] = n0;
          cell.src_hi[d] = arm[d];
          cell.inv[d] = 1.0 / h;
          const bool arm_interior = G.kind[arm[d]] == NodeKind::interior;
          const bool arm_outside = !inside[arm[d]];
          if (base_interior && arm_outside) {
            const auto [cv, s] = edge_cut(n0, arm[d]);
            cell.src_hi[d] = cv;
            cell.inv[d] = 1.0 / (s * h);
          } else if (arm_interior && base_outside) {
            const auto [cv, s] = edge_cut(arm[d], n0);
            cell.src_lo[d] = cv;
            cell.inv[d] = 1.0 / (s * h);
          }
        }
        G.cells.push_back(cell);
      }

  // Boundary sample positions: outside carriers read their Dirichlet value
  // at the level-set crossing of the shortest lattice edge into the domain.
  G.sample_pos.resize(total);
  for (int k = 0; k < G.dims[2]; ++k)
    for (int j = 0; j < G.dims[1]; ++j)
      for (int i = 0; i < G.dims[0]; ++i) {
        const int idx = G.index(i, j, k);
        const Point own = G.point(idx);
        G.sample_pos[idx] = {own.z[0], own.z[1], own.t};
        if (G.kind[idx] != NodeKind::boundary || inside[idx]) continue;
        const int di[6] = {1, -1, 0, 0, 0, 0};
        const int dj[6] = {0, 0, 1, -1, 0, 0};
        const int dk[6] = {0, 0, 0, 0, 1, -1};
        double best_s = 2.0;
        std::array<double, 3> best = G.sample_pos[idx];
        for (int m = 0; m < 6; ++m) {
          const int ni = i + di[m], nj = j + dj[m], nk = k + dk[m];
          if (ni < 0 || nj < 0 || nk < 0 || ni >= G.dims[0] ||
              nj >= G.dims[1] || nk >= G.dims[2])
            continue;
          if (!inside[G.index(ni, nj, nk)]) continue;
          const Point nb = G.point(G.index(ni, nj, nk));
          // Bisect phi along the edge from the carrier to the inside node.
          double lo = 0.0, hi = 1.0;  // phi(own) <= 0 < phi(nb)
          for (int it = 0; it < 50; ++it) {
            const double mid = 0.5 * (lo + hi);
            const Point q(own.z + mid * (nb.z - own.z),
                          own.t + mid * (nb.t - own.t));
            (D.phi(q) > 0.0 ? hi : lo) = mid;
          }
          const double s = 0.5 * (lo + hi);
          if (s < best_s) {
            best_s = s;
            best = {own.z[0] + s * (nb.z[0] - own.z[0]),
                    own.z[1] + s * (nb.z[1] - own.z[1]),
                    own.t + s * (nb.t - own.t)};
          }
        }
        G.sample_pos[idx] = best;
      }

  G.interior_slot.assign(total, -1);
  for (int idx = 0; idx < total; ++idx)
    if (G.kind[idx] == NodeKind::interior) {
      G.interior_slot[idx] = static_cast<int>(G.interior.size());
      G.interior.push_back(idx);
    }
  if (G.interior.empty())
    throw std::invalid_argument("domain has empty interior at this spacing");

  G.node_cells.assign(G.interior.size(), {-1, -1, -1, -1, -1, -1, -1, -1});
  std::vector<int> fill(G.interior.size(), 0);
  for (int c = 0; c < static_cast<int>(G.cells.size()); ++c) {
    const GridDomain::Cell& cell = G.cells[c];
    const int nodes[4] = {cell.n0, cell.nx, cell.ny, cell.nt};
    for (int role = 0; role < 4; ++role) {
      const int slot = G.interior_slot[nodes[role]];
      if (slot < 0) continue;
      if (fill[slot] >= 8)
        throw std::logic_error("node participates in more than 8 cells");
      G.node_cells[slot][fill[slot]++] = c * 4 + role;
    }
  }
  for (size_t s = 0; s < G.interior.size(); ++s)
    if (fill[s] == 0)
      throw std::invalid_argument(
          "grid too coarse: an interior node has no energy cell");
  return G;
}

GridDomain build_domain(const std::string& id,
                        const std::vector<double>& params, double h) {
  const DomainSpec D = make_domain(id, params);
  return build_domain(D, h, D.lo, D.hi);
}

DiscreteField sample_field(const GridDomain& G, const ScalarField& f) {
  DiscreteField u(G.value_count(), 0.0);
  for (int idx = 0; idx < G.node_count(); ++idx)
    if (G.kind[idx] != NodeKind::exterior) u[idx] = f(G.point(idx));
  for (size_t c = 0; c < G.cuts.size(); ++c)
    u[G.node_count() + c] =
        f(Point::h1(G.cuts[c][0], G.cuts[c][1], G.cuts[c][2]));
  return u;
}

DiscreteField boundary_values(const GridDomain& G, const ScalarField& f) {
  DiscreteField u(G.value_count(), 0.0);
  for (int idx = 0; idx < G.node_count(); ++idx)
    if (G.kind[idx] == NodeKind::boundary) {
      const auto& s = G.sample_pos[idx];
      u[idx] = f(Point::h1(s[0], s[1], s[2]));
    }
  for (size_t c = 0; c < G.cuts.size(); ++c)
    u[G.node_count() + c] =
        f(Point::h1(G.cuts[c][0], G.cuts[c][1], G.cuts[c][2]));
  return u;
}

double p_energy(const DiscreteField& u, const GridDomain& G,
                const PExponent& pe) {
  if (u.size() != static_cast<size_t>(G.value_count()))
    throw std::invalid_argument("field size does not match grid");
  const double h = G.h;
  const double d2 = regularization(pe) * regularization(pe);
  double sum = 0.0;
  for (const GridDomain::Cell& c : G.cells) {
    const double du_x = (u[c.src_hi[0]] - u[c.src_lo[0]]) * c.inv[0];
    const double du_y = (u[c.src_hi[1]] - u[c.src_lo[1]]) * c.inv[1];
    const double du_t = (u[c.src_hi[2]] - u[c.src_lo[2]]) * c.inv[2];
    const double g1 = du_x - 0.5 * c.y * du_t;
    const double g2 = du_y + 0.5 * c.x * du_t;
    sum += std::pow(g1 * g1 + g2 * g2 + d2, 0.5 * pe.p);
  }
  return h * h * h * sum;
}

double interpolate(const GridDomain& G, const DiscreteField& u,
                   const Point& g) {
  if (g.n() != 1) throw std::invalid_argument("grids live in H^1");
  if (u.size() < static_cast<size_t>(G.node_count()))
    throw std::invalid_argument("field size does not match grid");
  double fx = (g.z[0] - G.origin[0]) / G.h;
  double fy = (g.z[1] - G.origin[1]) / G.h;
  double ft = (g.t - G.origin[2]) / G.h;
  const int i = static_cast<int>(std::floor(fx));
  const int j = static_cast<int>(std::floor(fy));
  const int k = static_cast<int>(std::floor(ft));
  if (i < 0 || j < 0 || k < 0 || i + 1 >= G.dims[0] || j + 1 >= G.dims[1] ||
      k + 1 >= G.dims[2])
    throw std::domain_error("point outside the grid box");
  fx -= i;
  fy -= j;
  ft -= k;
  double value = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const int idx = G.index(i + a, j + b, k + c);
        if (G.kind[idx] == NodeKind::exterior)
          throw std::domain_error("interpolation cell touches exterior nodes");
        const double w = (a ? fx : 1.0 - fx) * (b ? fy : 1.0 - fy) *
                         (c ? ft : 1.0 - ft);
        value += w * u[idx];
      }
  return value;
}

void export_csv(const GridDomain& G, const DiscreteField& u,
                std::ostream& os) {
  os << "x,y,t,value,kind\n";
  char line[160];
  for (int idx = 0; idx < G.node_count(); ++idx) {
    if (G.kind[idx] == NodeKind::exterior) continue;
    const Point p = G.point(idx);
    std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g,%.17g,%s\n", p.z[0],
                  p.z[1], p.t, u[idx],
                  G.kind[idx] == NodeKind::interior ? "interior" : "boundary");
    os << line;
  }
}

}  // namespace heis
