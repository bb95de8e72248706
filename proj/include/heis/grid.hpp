#pragma once

// Discretization of bounded domains in H^1 on a uniform lattice, the
// horizontal p-energy with forward-difference gradients, and solution
// export. The energy discretization is cell-based: the cell at node
// (i, j, k) carries the forward-difference horizontal gradient
//   X1 u = (u_{i+1,j,k} - u)/h - (y_j/2)(u_{i,j,k+1} - u)/h,
//   X2 u = (u_{i,j+1,k} - u)/h + (x_i/2)(u_{i,j,k+1} - u)/h,
// and contributes h^3 |Xu|^p to the energy.

#include "heis/core.hpp"
#include "heis/domains.hpp"
#include "heis/potentials.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace heis {

enum class NodeKind : unsigned char { exterior = 0, interior = 1, boundary = 2 };

struct GridDomain {
  std::string domain_id;
  double h = 0.0;
  std::array<int, 3> dims{};    // node counts along x, y, t
  std::array<double, 3> origin{};
  std::vector<NodeKind> kind;
  std::vector<int> interior;    // flattened indices of the unknowns
  // Dirichlet sample position per node: boundary carriers outside the domain
  // use the level-set crossing on a lattice edge toward an inside neighbor,
  // so boundary data is read on the true boundary.
  std::vector<std::array<double, 3>> sample_pos;

  // Energy cells: base node plus its three forward neighbors, with the base
  // coordinates entering the gradient coefficients. Edges between an
  // interior node and an outside carrier are cut at the level-set crossing:
  // the difference quotient reads the Dirichlet datum at the crossing and
  // divides by the true sub-length (src indexes the extended value array,
  // inv premultiplies 1/(len * h)).
  struct Cell {
    int n0, nx, ny, nt;
    double x, y;
    int src_lo[3], src_hi[3];  // value sources per direction (x, y, t)
    double inv[3];             // difference scale per direction
  };
  std::vector<Cell> cells;
  // Boundary crossings on cut edges; values live at extended index
  // node_count() + cut index.
  std::vector<std::array<double, 3>> cuts;
  // For each interior node, the (cell, role) pairs it participates in;
  // role 0 = base, 1 = x-forward, 2 = y-forward, 3 = t-forward.
  std::vector<std::array<int, 8>> node_cells;  // (cell*4 + role), -1 padded
  std::vector<int> interior_slot;              // node index -> slot or -1

  int index(int i, int j, int k) const {
    return (k * dims[1] + j) * dims[0] + i;
  }
  Point point(int idx) const {
    const int i = idx % dims[0];
    const int j = (idx / dims[0]) % dims[1];
    const int k = idx / (dims[0] * dims[1]);
    return Point::h1(origin[0] + i * h, origin[1] + j * h, origin[2] + k * h);
  }
  int node_count() const { return dims[0] * dims[1] * dims[2]; }
  // Extended value-array size: node values followed by cut-edge data.
  int value_count() const {
    return node_count() + static_cast<int>(cuts.size());
  }
};

// Values on a grid: one entry per node followed by one entry per cut edge;
// entries at exterior nodes are ignored.
using DiscreteField = std::vector<double>;

// Classify the lattice over [lo, hi] against the domain level set. Nodes
// with phi > 0 off the outermost layer are interior; inside nodes on the
// outer layer and outside nodes adjacent to an interior node carry Dirichlet
// values. Throws when the interior is empty or a node has no energy cell.
GridDomain build_domain(const DomainSpec& D, double h,
                        const std::array<double, 3>& lo,
                        const std::array<double, 3>& hi);

// Catalog entry with its default box.
GridDomain build_domain(const std::string& id,
                        const std::vector<double>& params, double h);

// Evaluate f at every non-exterior node (at node positions).
DiscreteField sample_field(const GridDomain& G, const ScalarField& f);

// Evaluate f at boundary nodes only (zero elsewhere), reading outside
// carriers at their boundary sample position.
DiscreteField boundary_values(const GridDomain& G, const ScalarField& f);

// h^3-weighted sum of |Xu|^p over energy cells. For p < 2 the gradient
// magnitude is regularized by delta = 1e-8.
double p_energy(const DiscreteField& u, const GridDomain& G,
                const PExponent& pe);

// Trilinear interpolation of a nodewise field; throws when the surrounding
// cell contains exterior nodes.
double interpolate(const GridDomain& G, const DiscreteField& u,
                   const Point& g);

void export_csv(const GridDomain& G, const DiscreteField& u,
                std::ostream& os);

}  // namespace heis
