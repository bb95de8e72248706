#include "heis/solver.hpp"

#include <cmath>
#include <limits>

namespace heis {

namespace {

struct CellGradient {
  double a1, a2;  // horizontal gradient with the active node zeroed
  double b1, b2;  // derivative of the gradient w.r.t. the active node value
};

// Cut-aware difference gradient of cell c with the contribution of the node
// in `role` separated out: grad(v) = (a1 + v b1, a2 + v b2). An unknown node
// is never replaced by a cut source in its own slot, so the derivative
// factors are just the per-direction difference scales.
inline CellGradient split_cell(const GridDomain::Cell& c, int role,
                               const std::vector<double>& u, double /*h*/) {
  CellGradient out{};
  int self = c.n0;
  switch (role) {
    case 0:
      out.b1 = -c.inv[0] + 0.5 * c.y * c.inv[2];
      out.b2 = -c.inv[1] - 0.5 * c.x * c.inv[2];
      self = c.n0;
      break;
    case 1:
      out.b1 = c.inv[0];
      out.b2 = 0.0;
      self = c.nx;
      break;
    case 2:
      out.b1 = 0.0;
      out.b2 = c.inv[1];
      self = c.ny;
      break;
    default:
      out.b1 = -0.5 * c.y * c.inv[2];
      out.b2 = 0.5 * c.x * c.inv[2];
      self = c.nt;
      break;
  }
  const auto val = [&](int src) { return src == self ? 0.0 : u[src]; };
  const double du_x = (val(c.src_hi[0]) - val(c.src_lo[0])) * c.inv[0];
  const double du_y = (val(c.src_hi[1]) - val(c.src_lo[1])) * c.inv[1];
  const double du_t = (val(c.src_hi[2]) - val(c.src_lo[2])) * c.inv[2];
  out.a1 = du_x - 0.5 * c.y * du_t;
  out.a2 = du_y + 0.5 * c.x * du_t;
  return out;
}

// Energy restricted to one node value: phi(v) = sum_c (|grad_c(v)|^2+d2)^{p/2}
// over the cells listed in `slots`. Convex in v for p > 1.
struct NodeObjective {
  const GridDomain* G;
  const std::vector<double>* u;
  double p;
  double d2;
  int count = 0;
  CellGradient cg[8]{};

  void load(const std::array<int, 8>& slots) {
    count = 0;
    for (int s : slots) {
      if (s < 0) break;
      cg[count++] = split_cell(G->cells[s / 4], s % 4, *u, G->h);
    }
  }
  double value(double v) const {
    double sum = 0.0;
    for (int c = 0; c < count; ++c) {
      const double g1 = cg[c].a1 + v * cg[c].b1;
      const double g2 = cg[c].a2 + v * cg[c].b2;
      sum += std::pow(g1 * g1 + g2 * g2 + d2, 0.5 * p);
    }
    return sum;
  }
  void derivatives(double v, double* d1, double* d2out) const {
    double s1 = 0.0, s2 = 0.0;
    for (int c = 0; c < count; ++c) {
      const double g1 = cg[c].a1 + v * cg[c].b1;
      const double g2 = cg[c].a2 + v * cg[c].b2;
      const double q = g1 * g1 + g2 * g2 + d2;
      const double w = std::pow(q, 0.5 * p - 1.0);
      const double gdotb = g1 * cg[c].b1 + g2 * cg[c].b2;
      const double bb = cg[c].b1 * cg[c].b1 + cg[c].b2 * cg[c].b2;
      s1 += p * w * gdotb;
      s2 += p * w * bb + p * (p - 2.0) * (q > 0.0 ? w / q : 0.0) * gdotb * gdotb;
    }
    *d1 = s1;
    *d2out = std::max(s2, 0.0);
  }

  // Minimize phi: guarded Newton on the monotone derivative with a bisection
  // fallback bracket. For p = 2 the objective is quadratic and one Newton
  // step is exact.
  double minimize(double v0) const {
    double d1, d2v;
    derivatives(v0, &d1, &d2v);
    if (d1 == 0.0) return v0;
    if (p == 2.0 && d2v > 0.0) return v0 - d1 / d2v;
    // Bracket the root of phi'.
    double step = d2v > 0.0 ? std::abs(d1) / d2v : 1.0;
    if (!(step > 0.0) || !std::isfinite(step)) step = 1.0;
    double lo, hi;
    if (d1 > 0.0) {
      hi = v0;
      lo = v0 - step;
      double dlo, tmp;
      derivatives(lo, &dlo, &tmp);
      int guard = 0;
      while (dlo > 0.0 && guard++ < 64) {
        step *= 2.0;
        lo = v0 - step;
        derivatives(lo, &dlo, &tmp);
      }
      if (dlo > 0.0) return lo;
    } else {
      lo = v0;
      hi = v0 + step;
      double dhi, tmp;
      derivatives(hi, &dhi, &tmp);
      int guard = 0;
      while (dhi < 0.0 && guard++ < 64) {
        step *= 2.0;
        hi = v0 + step;
        derivatives(hi, &dhi, &tmp);
      }
      if (dhi < 0.0) return hi;
    }
    double v = 0.5 * (lo + hi);
    for (int it = 0; it < 16; ++it) {
      derivatives(v, &d1, &d2v);
      if (d1 > 0.0)
        hi = v;
      else
        lo = v;
      double next = v;
      if (d2v > 0.0) next = v - d1 / d2v;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - v) < 1e-14 * (1.0 + std::abs(v))) return next;
      v = next;
    }
    return v;
  }
};

}  // namespace

double energy_residual(const DiscreteField& u, const GridDomain& G,
                       const PExponent& pe) {
  const double d = pe.p < 2.0 ? 1e-8 : 0.0;
  NodeObjective obj{&G, &u, pe.p, d * d};
  double worst = 0.0;
  for (size_t s = 0; s < G.interior.size(); ++s) {
    obj.load(G.node_cells[s]);
    double d1, d2v;
    obj.derivatives(u[G.interior[s]], &d1, &d2v);
    worst = std::max(worst, std::abs(d1));
  }
  // The cell sum carries no h^3 factor, so this is already the scaled
  // (operator-level) gradient max-norm.
  return worst;
}

SolveResult solve_dirichlet(const GridDomain& G, const DiscreteField& boundary,
                            const PExponent& pe, const SolveOptions& opts) {
  if (boundary.size() != static_cast<size_t>(G.value_count()))
    throw std::invalid_argument("boundary field size does not match grid");
  const double delta = pe.p < 2.0 ? 1e-8 : 0.0;

  SolveResult res;
  res.delta = delta;
  res.u.assign(G.value_count(), 0.0);

  // Fixed boundary and cut-edge values; interior starts from their mean.
  double bsum = 0.0;
  int bcount = 0;
  for (int idx = 0; idx < G.node_count(); ++idx) {
    if (G.kind[idx] == NodeKind::boundary) {
      if (!std::isfinite(boundary[idx]))
        throw std::invalid_argument("non-finite boundary value");
      res.u[idx] = boundary[idx];
      bsum += boundary[idx];
      ++bcount;
    }
  }
  for (int c = G.node_count(); c < G.value_count(); ++c) {
    if (!std::isfinite(boundary[c]))
      throw std::invalid_argument("non-finite cut-edge value");
    res.u[c] = boundary[c];
  }
  if (opts.initial) {
    if (opts.initial->size() != res.u.size())
      throw std::invalid_argument("warm start does not match grid");
    for (int idx : G.interior) res.u[idx] = (*opts.initial)[idx];
  } else {
    const double init = bcount > 0 ? bsum / bcount : 0.0;
    for (int idx : G.interior) res.u[idx] = init;
  }

  NodeObjective obj{&G, &res.u, pe.p, delta * delta};
  double energy = p_energy(res.u, G, pe);
  double relax = opts.relax;
  std::vector<double> backup;

  for (res.sweeps = 0; res.sweeps < opts.max_sweeps; ++res.sweeps) {
    backup = res.u;
    for (size_t s = 0; s < G.interior.size(); ++s) {
      const int idx = G.interior[s];
      obj.load(G.node_cells[s]);
      const double v0 = res.u[idx];
      const double vstar = obj.minimize(v0);
      res.u[idx] = v0 + relax * (vstar - v0);
    }
    double next = p_energy(res.u, G, pe);
    if (next > energy && relax > 1.0) {
      // Over-relaxed sweep increased the energy: redo it plainly. Exact
      // local minimization makes the plain sweep nonincreasing.
      res.u = backup;
      relax = std::max(1.0, 1.0 + 0.8 * (relax - 1.0));
      for (size_t s = 0; s < G.interior.size(); ++s) {
        const int idx = G.interior[s];
        obj.load(G.node_cells[s]);
        res.u[idx] = obj.minimize(res.u[idx]);
      }
      next = p_energy(res.u, G, pe);
    } else if (relax < opts.relax) {
      relax = std::min(opts.relax, relax + 0.002);
    }
    energy = next;
    res.energies.push_back(energy);

    if (res.sweeps % 4 == 3 || res.sweeps == opts.max_sweeps - 1) {
      res.residual = energy_residual(res.u, G, pe);
      if (res.residual <= opts.tol) {
        res.converged = true;
        ++res.sweeps;
        break;
      }
    }
  }
  res.energy = energy;
  if (!res.converged) {
    res.residual = energy_residual(res.u, G, pe);
    res.converged = res.residual <= opts.tol;
    if (!res.converged && opts.throw_on_fail)
      throw std::runtime_error("solver did not reach tolerance; residual " +
                               std::to_string(res.residual));
  }
  return res;
}

bool comparison_check(const DiscreteField& u, const DiscreteField& v,
                      const GridDomain& G, double eps) {
  if (u.size() != v.size() || u.size() < static_cast<size_t>(G.node_count()))
    throw std::invalid_argument("fields do not match the grid");
  if (eps < 0.0) eps = 2.0 * G.h;
  for (int idx : G.interior)
    if (u[idx] < v[idx] - eps) return false;
  return true;
}

}  // namespace heis
