#include "mcvar/calculus.hpp"

#include <cmath>

#include "stencil.hpp"

namespace mcvar {

namespace {

void require_same_grid(const ScalarField& a, const ScalarField& b) {
    if (a.grid.get() != b.grid.get() && !a.grid->same_layout(*b.grid))
        throw FieldError("fields live on different grids");
}

double dot2(const double a[2], const double b[2], int n) {
    double s = a[0] * b[0];
    if (n == 2) s += a[1] * b[1];
    return s;
}

} // namespace

VectorField gradient(const ScalarField& f) {
    const Grid& g = *f.grid;
    VectorField out(f.grid);
    for (int q = 0; q < g.num_interior(); ++q)
        for (int axis = 0; axis < g.n; ++axis)
            out.values[static_cast<std::size_t>(q) * g.n + axis] =
                stencil::nodal_deriv(g, q, axis).eval(f);
    return out;
}

ScalarField area_factor(const ScalarField& u) {
    const Grid& g = *u.grid;
    ScalarField out(u.grid, 1.0);
    double du[2];
    for (int c = 0; c < g.num_nodes(); ++c) {
        stencil::grad_at_compact(g, u, c, du);
        out.values[static_cast<std::size_t>(c)] = std::sqrt(1 + dot2(du, du, g.n));
    }
    return out;
}

ScalarField mean_curvature(const ScalarField& u) {
    const Grid& g = *u.grid;
    ScalarField out(u.grid, 0.0);
    for (int q = 0; q < g.num_interior(); ++q) {
        double div = 0;
        for (int axis = 0; axis < g.n; ++axis) {
            double flux[2];
            for (int side = 0; side < 2; ++side) {
                const auto fg = stencil::face_gradient(g, q, 2 * axis + side);
                double p[2] = {fg.g[0].eval(u), 0};
                if (g.n == 2) p[1] = fg.g[1].eval(u);
                flux[side] = p[axis] / std::sqrt(1 + dot2(p, p, g.n));
            }
            div += (flux[1] - flux[0]) / stencil::div_spacing(g, q, axis);
        }
        out.values[static_cast<std::size_t>(g.compact_of_int[q])] = div / g.n;
    }
    // pad boundary entries from the nearest interior neighbor (finite values
    // everywhere; the curvature itself is an interior quantity)
    for (int c = 0; c < g.num_nodes(); ++c) {
        if (g.interior_of[c] >= 0) continue;
        const int l = g.lattice_of[c];
        const int i = l % g.nx, j = l / g.nx;
        const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
        for (int k = 0; k < 2 * g.n; ++k) {
            const int ii = i + di[k], jj = j + dj[k];
            if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny) continue;
            const int cc = g.compact_of[g.lat(ii, jj)];
            if (cc >= 0 && g.interior_of[cc] >= 0) {
                out.values[static_cast<std::size_t>(c)] =
                    out.values[static_cast<std::size_t>(cc)];
                break;
            }
        }
    }
    return out;
}

ScalarField tangential_gradient_sq(const ScalarField& H, const ScalarField& u) {
    require_same_grid(H, u);
    const Grid& g = *u.grid;
    ScalarField out(u.grid, 0.0);
    double dH[2], du[2];
    for (int c = 0; c < g.num_nodes(); ++c) {
        stencil::grad_at_compact(g, H, c, dH);
        stencil::grad_at_compact(g, u, c, du);
        const double D2 = 1 + dot2(du, du, g.n);
        const double mixed = dot2(du, dH, g.n);
        out.values[static_cast<std::size_t>(c)] = dot2(dH, dH, g.n) - mixed * mixed / D2;
    }
    return out;
}

namespace {

// Shared quadrature loop for both energies.
double energy_quadrature(const ScalarField& H, const ScalarField& u, bool geometric) {
    require_same_grid(H, u);
    const Grid& g = *u.grid;
    double sum = 0;
    double dH[2], du[2];
    for (int c = 0; c < g.num_nodes(); ++c) {
        const double w = g.weight[static_cast<std::size_t>(c)];
        if (w == 0) continue;
        stencil::grad_at_compact(g, H, c, dH);
        stencil::grad_at_compact(g, u, c, du);
        const double D = std::sqrt(1 + dot2(du, du, g.n));
        double density = dot2(dH, dH, g.n);
        if (geometric) {
            const double mixed = dot2(du, dH, g.n) / D;
            density -= mixed * mixed;
        }
        sum += 0.5 * w * density * D;
    }
    return sum;
}

} // namespace

double energy_simplified(const ScalarField& H, const ScalarField& u) {
    return energy_quadrature(H, u, false);
}

double energy_geometric(const ScalarField& H, const ScalarField& u) {
    return energy_quadrature(H, u, true);
}

double functional_J(const ScalarField& v, const ScalarField& H, const BoundaryData& bd) {
    require_same_grid(v, H);
    const Grid& g = *v.grid;
    if (!v.has_trace()) throw FieldError("functional_J needs the trace of v");

    double area = 0, bulk = 0;
    double dv[2];
    for (int c = 0; c < g.num_nodes(); ++c) {
        const double w = g.weight[static_cast<std::size_t>(c)];
        if (w == 0) continue;
        stencil::grad_at_compact(g, v, c, dv);
        area += w * std::sqrt(1 + dot2(dv, dv, g.n));
        bulk += w * g.n * H.values[static_cast<std::size_t>(c)] *
                v.values[static_cast<std::size_t>(c)];
    }
    double misfit = 0;
    for (int s = 0; s < g.num_sites(); ++s)
        misfit += g.sites[s].ds * std::fabs(v.trace[static_cast<std::size_t>(s)] -
                                            bd.g_sites[static_cast<std::size_t>(s)]);
    return area + bulk + misfit;
}

} // namespace mcvar
