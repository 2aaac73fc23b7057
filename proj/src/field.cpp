#include "mcvar/field.hpp"

#include <cmath>

namespace mcvar {

GridPtr make_grid(const DomainSpec& spec, int m) {
    return std::make_shared<const Grid>(build_grid(spec, m));
}

ScalarField ScalarField::sample(const GridPtr& g,
                                const std::function<double(double, double)>& f) {
    ScalarField out(g);
    for (int c = 0; c < g->num_nodes(); ++c) {
        const int l = g->lattice_of[c];
        out.values[static_cast<std::size_t>(c)] = f(g->x_of_lat(l), g->y_of_lat(l));
    }
    out.trace.resize(static_cast<std::size_t>(g->num_sites()));
    for (int s = 0; s < g->num_sites(); ++s)
        out.trace[static_cast<std::size_t>(s)] = f(g->sites[s].x, g->sites[s].y);
    return out;
}

ScalarField& ScalarField::set_trace_constant(double v) {
    trace.assign(static_cast<std::size_t>(grid->num_sites()), v);
    return *this;
}

ScalarField& ScalarField::set_trace(std::vector<double> site_values) {
    if (static_cast<int>(site_values.size()) != grid->num_sites())
        throw FieldError("trace size does not match the grid's boundary sites");
    trace = std::move(site_values);
    return *this;
}

EvalPoint domain_point(const DomainSpec& spec, double x, double y) {
    EvalPoint p = EvalPoint::of_xy(x, y);
    switch (spec.kind) {
        case DomainSpec::Kind::Interval:
            p.has_y = false;
            p.with_r(std::fabs(x - (spec.extents[0] + spec.extents[1]) / 2));
            break;
        case DomainSpec::Kind::Rectangle:
            p.with_r(std::hypot(x - (spec.extents[0] + spec.extents[1]) / 2,
                                y - (spec.extents[2] + spec.extents[3]) / 2));
            break;
        case DomainSpec::Kind::Disk:
            p.with_r(std::hypot(x - spec.cx, y - spec.cy));
            p.with_t(std::atan2(y - spec.cy, x - spec.cx));
            break;
    }
    return p;
}

BoundaryData BoundaryData::make(const Grid& grid, Expr g, Expr h) {
    BoundaryData bd;
    bd.g = std::move(g);
    bd.h = std::move(h);
    bd.g_sites.resize(static_cast<std::size_t>(grid.num_sites()));
    bd.h_sites.resize(static_cast<std::size_t>(grid.num_sites()));
    for (int s = 0; s < grid.num_sites(); ++s) {
        const EvalPoint p = domain_point(grid.spec, grid.sites[s].x, grid.sites[s].y);
        bd.g_sites[static_cast<std::size_t>(s)] = bd.g.eval(p);
        bd.h_sites[static_cast<std::size_t>(s)] = bd.h.eval(p);
    }
    return bd;
}

BoundaryData BoundaryData::from_text(const Grid& grid, const std::string& g_text,
                                     const std::string& h_text) {
    return make(grid, Expr::parse(g_text), Expr::parse(h_text));
}

std::vector<BoundarySample> sample_boundary(const DomainSpec& spec, int count) {
    std::vector<BoundarySample> out;
    switch (spec.kind) {
        case DomainSpec::Kind::Interval:
            out.push_back({spec.extents[0], 0});
            out.push_back({spec.extents[1], 0});
            break;
        case DomainSpec::Kind::Rectangle: {
            // Open edges only; H_dOmega is undefined at the corners.
            const int per_edge = std::max(2, count / 4);
            const double ax = spec.extents[0], bx = spec.extents[1];
            const double ay = spec.extents[2], by = spec.extents[3];
            for (int k = 1; k <= per_edge; ++k) {
                const double sx = ax + (bx - ax) * k / (per_edge + 1);
                const double sy = ay + (by - ay) * k / (per_edge + 1);
                out.push_back({sx, ay});
                out.push_back({sx, by});
                out.push_back({ax, sy});
                out.push_back({bx, sy});
            }
            break;
        }
        case DomainSpec::Kind::Disk:
            for (int k = 0; k < count; ++k) {
                const double a = 2 * M_PI * k / count;
                out.push_back({spec.cx + spec.radius * std::cos(a),
                               spec.cy + spec.radius * std::sin(a)});
            }
            break;
    }
    return out;
}

double diff_inf(const ScalarField& a, const ScalarField& b) {
    if (a.grid->num_nodes() != b.grid->num_nodes())
        throw FieldError("fields live on different grids");
    double m = 0;
    for (int q = 0; q < a.grid->num_interior(); ++q) {
        const std::size_t c = static_cast<std::size_t>(a.grid->compact_of_int[q]);
        m = std::max(m, std::fabs(a.values[c] - b.values[c]));
    }
    return m;
}

} // namespace mcvar
