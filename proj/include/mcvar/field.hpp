#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "mcvar/expr.hpp"
#include "mcvar/grid.hpp"

namespace mcvar {

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(const DomainSpec& spec, int m);

// Nodal scalar values on a grid, one per non-exterior node, plus (optionally)
// trace values at the boundary sites for stencils that reach the boundary.
struct ScalarField {
    GridPtr grid;
    std::vector<double> values; // compact node order
    std::vector<double> trace;  // site order; empty when the trace is unknown

    ScalarField() = default;
    explicit ScalarField(GridPtr g, double fill = 0.0)
        : grid(std::move(g)), values(static_cast<std::size_t>(grid->num_nodes()), fill) {}

    bool has_trace() const { return !trace.empty(); }
    double& at_lattice(int l) { return values[static_cast<std::size_t>(grid->compact_of[l])]; }

    // Fill nodal values and trace from a pointwise function.
    static ScalarField sample(const GridPtr& g, const std::function<double(double, double)>& f);

    ScalarField& set_trace_constant(double v);
    ScalarField& set_trace(std::vector<double> site_values);
};

// Per-interior-node vectors (n components).
struct VectorField {
    GridPtr grid;
    std::vector<double> values; // interior index * n + component

    VectorField() = default;
    explicit VectorField(GridPtr g)
        : grid(std::move(g)),
          values(static_cast<std::size_t>(grid->num_interior()) * grid->n, 0.0) {}

    double comp(int interior_idx, int c) const {
        return values[static_cast<std::size_t>(interior_idx) * grid->n + c];
    }
};

// Dirichlet data for a run: g (surface height on the boundary) and h (mean
// curvature on the boundary), parsed formulas plus their cached site values.
struct BoundaryData {
    Expr g, h;
    std::vector<double> g_sites, h_sites;

    static BoundaryData make(const Grid& grid, Expr g, Expr h);
    static BoundaryData from_text(const Grid& grid, const std::string& g_text,
                                  const std::string& h_text);
};

// Evaluation-point bindings for a bulk or boundary point of the domain:
// x, y always; r = distance to the domain center; t = polar angle (disk only).
EvalPoint domain_point(const DomainSpec& spec, double x, double y);

// Uniform parametric boundary samples (rectangle corners excluded).
struct BoundarySample {
    double x, y;
};
std::vector<BoundarySample> sample_boundary(const DomainSpec& spec, int count);

// Max-norm over interior nodes of the difference of two fields.
double diff_inf(const ScalarField& a, const ScalarField& b);

} // namespace mcvar
