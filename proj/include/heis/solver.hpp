#pragma once

// Variational solver for the Dirichlet problem of the horizontal p-Laplacian
// on grid domains: minimizes the discrete p-energy over interior values with
// fixed boundary values by nonlinear Gauss-Seidel sweeps (exact convex 1-d
// node solves) with safeguarded over-relaxation. The energy sequence is
// nonincreasing by construction.

#include "heis/grid.hpp"

namespace heis {

struct SolveOptions {
  double tol = 1e-8;       // on max_m |dE/du_m| / h^3
  int max_sweeps = 100000;
  double relax = 1.9;      // initial over-relaxation; falls back on ascent
  bool throw_on_fail = false;
  // Optional warm start (e.g. a coarser solve prolonged onto this grid);
  // values at boundary nodes are overwritten by the boundary data.
  const DiscreteField* initial = nullptr;
};

struct SolveResult {
  DiscreteField u;
  bool converged = false;
  int sweeps = 0;
  double residual = 0.0;   // final max-norm of the scaled energy gradient
  double energy = 0.0;
  double delta = 0.0;      // gradient regularization used (p < 2 only)
  std::vector<double> energies;  // per-sweep energy, nonincreasing
};

// boundary must carry finite values at all boundary nodes of G.
SolveResult solve_dirichlet(const GridDomain& G, const DiscreteField& boundary,
                            const PExponent& pe,
                            const SolveOptions& opts = {});

// Max-norm of the energy gradient over interior nodes, scaled by h^3 (a
// discrete operator residual).
double energy_residual(const DiscreteField& u, const GridDomain& G,
                       const PExponent& pe);

// True iff u >= v - eps at every interior node; eps < 0 selects 2h.
bool comparison_check(const DiscreteField& u, const DiscreteField& v,
                      const GridDomain& G, double eps = -1.0);

}  // namespace heis
