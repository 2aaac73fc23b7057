#pragma once

#include <vector>

#include "mcvar/domain.hpp"

namespace mcvar {

enum class NodeClass : unsigned char { Interior, Boundary, Exterior };

// A point where the discretization touches the boundary: either a lattice
// node lying on it, or the intersection of a stencil arm with it. Traces of
// g and h are evaluated at sites; ds is the arc-length weight for boundary
// integrals (counting measure in 1-d).
struct BoundarySite {
    double x = 0, y = 0;
    double ds = 0;
    int lattice = -1; // lattice index when the site is a boundary lattice node
};

// One coordinate-direction arm of an interior node's stencil. Either it ends
// at another non-exterior lattice node (nbr = compact index) or it is cut by
// the boundary (site >= 0) after a fraction theta of the nominal spacing.
struct Arm {
    double theta = 1.0; // in (0, 1]
    int nbr = -1;       // compact index of an *interior* unknown, or -1
    int site = -1;      // boundary site index, or -1
};

// A unique stencil face, identified by the interior node owning the arm.
// Interior-interior arms are listed once (from their W/S end); arms cut by
// the boundary belong to their single interior node.
struct Face {
    int q;   // owning interior index
    int dir; // arm direction from the owner
};

// Uniform Cartesian grid over the domain's bounding box with
// Shortley--Weller boundary data. Directions: W=0,E=1 (n=1); +S=2,N=3 (n=2).
class Grid {
  public:
    DomainSpec spec;
    int n = 2;  // dimension
    int m = 0;  // requested nodes per axis
    int nx = 0, ny = 1;
    double x0 = 0, y0 = 0, hx = 1, hy = 1;

    std::vector<NodeClass> cls;      // lattice, size nx*ny
    std::vector<int> compact_of;     // lattice -> compact index of non-exterior nodes, -1 otherwise
    std::vector<int> lattice_of;     // compact -> lattice
    std::vector<int> interior_of;    // compact -> interior index, -1 for boundary nodes
    std::vector<int> compact_of_int; // interior index -> compact
    std::vector<Arm> arms;           // interior index * 2n + dir
    std::vector<double> weight;      // compact: quadrature weight (sums to |Omega| + O(h))
    std::vector<BoundarySite> sites;
    std::vector<int> site_of_lattice; // lattice -> site index, -1 if none
    std::vector<Face> faces;
    std::vector<int> cells; // SW-corner lattice index of cells with 4 non-exterior corners

    int num_nodes() const { return static_cast<int>(lattice_of.size()); }
    int num_interior() const { return static_cast<int>(compact_of_int.size()); }
    int num_sites() const { return static_cast<int>(sites.size()); }

    int lat(int i, int j) const { return j * nx + i; }
    double x_of_i(int i) const { return x0 + i * hx; }
    double y_of_j(int j) const { return y0 + j * hy; }
    double x_of_lat(int l) const { return x_of_i(l % nx); }
    double y_of_lat(int l) const { return y_of_j(l / nx); }

    const Arm& arm(int interior_idx, int dir) const {
        return arms[static_cast<std::size_t>(interior_idx) * 2 * n + dir];
    }
    double spacing(int axis) const { return axis == 0 ? hx : hy; }

    bool same_layout(const Grid& other) const {
        return nx == other.nx && ny == other.ny && num_nodes() == other.num_nodes() &&
               num_sites() == other.num_sites();
    }
};

// Builds the grid for a domain with m nodes per axis (m >= 4). Disk domains
// use the bounding box with arms shortened where stencils cross the circle.
Grid build_grid(const DomainSpec& spec, int m);

} // namespace mcvar
