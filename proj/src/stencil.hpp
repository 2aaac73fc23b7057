#pragma once

// Internal finite-difference building blocks shared by calculus, elliptic and
// pmc: sparse linear functionals for nodal and face-centered derivatives on
// Shortley--Weller grids. Not installed; include only from src/.

#include <utility>
#include <vector>

#include "mcvar/field.hpp"

namespace mcvar::stencil {

// Linear functional  sum w*values[node] + sum w*trace[site]  over a field.
// Node terms use compact indices (boundary nodes carry their trace value in
// solution fields); site terms always read the trace.
struct LinComb {
    std::vector<std::pair<int, double>> nodes;
    std::vector<std::pair<int, double>> sites;

    void add_node(int c, double w) {
        for (auto& t : nodes)
            if (t.first == c) {
                t.second += w;
                return;
            }
        nodes.emplace_back(c, w);
    }
    void add_site(int s, double w) {
        for (auto& t : sites)
            if (t.first == s) {
                t.second += w;
                return;
            }
        sites.emplace_back(s, w);
    }
    void add_scaled(const LinComb& o, double f) {
        for (const auto& t : o.nodes) add_node(t.first, f * t.second);
        for (const auto& t : o.sites) add_site(t.first, f * t.second);
    }
    void add_arm_end(const Grid&, const Arm& a, double w) {
        if (a.site >= 0)
            add_site(a.site, w);
        else
            add_node(a.nbr, w);
    }

    double eval(const ScalarField& f) const {
        double v = 0;
        for (const auto& t : nodes) v += t.second * f.values[static_cast<std::size_t>(t.first)];
        if (!sites.empty() && !f.has_trace())
            throw FieldError("missing boundary trace for a stencil reaching the boundary");
        for (const auto& t : sites) v += t.second * f.trace[static_cast<std::size_t>(t.first)];
        return v;
    }
};

// Second-order derivative at an interior node along an axis: the non-uniform
// central three-point formula over the node's two arms (exact on quadratics).
LinComb nodal_deriv(const Grid& g, int q, int axis);

// One-sided second-order derivative at a boundary lattice node, pointing into
// the domain (used by energy quadrature on rectangles and intervals).
LinComb boundary_deriv(const Grid& g, int c, int axis);

// Gradient at the midpoint of arm (q, dir): normal component from the
// two-point difference along the (possibly shortened) arm, tangential
// component averaged from the nodal derivatives at the two arm ends. Where
// the far end carries no tangential stencil (cut intersections), the value
// is extrapolated to the face midpoint from the owner and its opposite
// neighbor, keeping the face evaluation second-order consistent.
struct FaceGrad {
    LinComb g[2];
};
FaceGrad face_gradient(const Grid& g, int q, int dir);

// Cell-centered gradient from the four corners of a lattice cell (SW corner
// lattice index), exact on affine fields.
FaceGrad cell_gradient(const Grid& g, int sw_lattice);

// (theta_minus + theta_plus)/2 * h, the divergence normalization at a node.
inline double div_spacing(const Grid& g, int q, int axis) {
    return 0.5 * (g.arm(q, 2 * axis).theta + g.arm(q, 2 * axis + 1).theta) * g.spacing(axis);
}

// Gradient of a field at a compact node: central at interior nodes, one-sided
// into the domain at boundary lattice nodes (zero where no stencil exists).
void grad_at_compact(const Grid& g, const ScalarField& f, int c, double out[2]);

} // namespace mcvar::stencil
