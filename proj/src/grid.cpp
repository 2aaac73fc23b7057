#include "mcvar/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mcvar {

namespace {

// Smallest admitted arm fraction. True intersections closer to the node than
// this are handled by snapping the node onto the boundary at classification
// time, so coefficients stay bounded by 1/kThetaMin.
constexpr double kThetaMin = 1e-6;

// Intersection parameter s in (0,1] of the segment from (px,py) toward
// (px+dx, py+dy) with the circle |q - c| = R. The far endpoint is outside.
double circle_arm_fraction(double px, double py, double dx, double dy, double cx, double cy,
                           double R) {
    const double ox = px - cx, oy = py - cy;
    const double a = dx * dx + dy * dy;
    const double b = 2 * (ox * dx + oy * dy);
    const double c = ox * ox + oy * oy - R * R;
    double disc = b * b - 4 * a * c;
    if (disc < 0) disc = 0;
    const double sq = std::sqrt(disc);
    // c < 0 (start inside), so the roots straddle zero; take the positive one
    // via the numerically stable pairing.
    double s;
    if (b <= 0)
        s = (-b + sq) / (2 * a);
    else
        s = (2 * c) / (-b - sq);
    return std::clamp(s, kThetaMin, 1.0);
}

} // namespace

Grid build_grid(const DomainSpec& spec, int m) {
    if (m < 4) throw DomainError("build_grid requires m >= 4 nodes per axis");

    Grid g;
    g.spec = spec;
    g.n = spec.dimension();
    g.m = m;

    if (spec.kind == DomainSpec::Kind::Interval) {
        g.nx = m;
        g.ny = 1;
        g.x0 = spec.extents[0];
        g.y0 = 0;
        g.hx = (spec.extents[1] - spec.extents[0]) / (m - 1);
        g.hy = 1;
    } else if (spec.kind == DomainSpec::Kind::Rectangle) {
        g.nx = g.ny = m;
        g.x0 = spec.extents[0];
        g.y0 = spec.extents[2];
        g.hx = (spec.extents[1] - spec.extents[0]) / (m - 1);
        g.hy = (spec.extents[3] - spec.extents[2]) / (m - 1);
    } else {
        g.nx = g.ny = m;
        g.x0 = spec.cx - spec.radius;
        g.y0 = spec.cy - spec.radius;
        g.hx = g.hy = 2 * spec.radius / (m - 1);
    }

    const int nlat = g.nx * g.ny;
    g.cls.assign(nlat, NodeClass::Exterior);
    g.compact_of.assign(nlat, -1);
    g.site_of_lattice.assign(nlat, -1);

    // Classification. The snap band keeps arm fractions bounded away from 0.
    const double tol = 1e-8 * spec.diameter();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double d = spec.signed_distance(g.x_of_i(i), g.y_of_j(j));
            NodeClass c = NodeClass::Exterior;
            if (std::fabs(d) <= tol)
                c = NodeClass::Boundary;
            else if (d < 0)
                c = NodeClass::Interior;
            g.cls[g.lat(i, j)] = c;
        }
    }

    // Compact numbering: all non-exterior nodes, lattice scan order.
    for (int l = 0; l < nlat; ++l) {
        if (g.cls[l] != NodeClass::Exterior) {
            g.compact_of[l] = static_cast<int>(g.lattice_of.size());
            g.lattice_of.push_back(l);
        }
    }
    g.interior_of.assign(g.lattice_of.size(), -1);
    for (int c = 0; c < g.num_nodes(); ++c) {
        if (g.cls[g.lattice_of[c]] == NodeClass::Interior) {
            g.interior_of[c] = static_cast<int>(g.compact_of_int.size());
            g.compact_of_int.push_back(c);
        }
    }

    // Sites for boundary lattice nodes (disk nodes are projected onto the circle).
    for (int c = 0; c < g.num_nodes(); ++c) {
        const int l = g.lattice_of[c];
        if (g.cls[l] != NodeClass::Boundary) continue;
        BoundarySite s;
        s.x = g.x_of_lat(l);
        s.y = g.y_of_lat(l);
        s.lattice = l;
        if (spec.kind == DomainSpec::Kind::Disk) {
            const double rr = std::hypot(s.x - spec.cx, s.y - spec.cy);
            if (rr > 0) {
                s.x = spec.cx + (s.x - spec.cx) * spec.radius / rr;
                s.y = spec.cy + (s.y - spec.cy) * spec.radius / rr;
            }
        }
        g.site_of_lattice[l] = static_cast<int>(g.sites.size());
        g.sites.push_back(s);
    }

    // Arms.
    const int ndir = 2 * g.n;
    g.arms.assign(static_cast<std::size_t>(g.num_interior()) * ndir, Arm{});
    const int di[4] = {-1, 1, 0, 0};
    const int dj[4] = {0, 0, -1, 1};
    for (int q = 0; q < g.num_interior(); ++q) {
        const int l = g.lattice_of[g.compact_of_int[q]];
        const int i = l % g.nx, j = l / g.nx;
        for (int dir = 0; dir < ndir; ++dir) {
            Arm a;
            const int ii = i + di[dir], jj = j + dj[dir];
            if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny)
                throw DomainError("interior node at lattice border; grid too coarse");
            const int ll = g.lat(ii, jj);
            switch (g.cls[ll]) {
                case NodeClass::Interior:
                    a.theta = 1.0;
                    a.nbr = g.compact_of[ll];
                    break;
                case NodeClass::Boundary:
                    a.theta = 1.0;
                    a.site = g.site_of_lattice[ll];
                    break;
                case NodeClass::Exterior: {
                    const double px = g.x_of_i(i), py = g.y_of_j(j);
                    const double dx = di[dir] * g.hx, dy = dj[dir] * g.hy;
                    const double s =
                        circle_arm_fraction(px, py, dx, dy, spec.cx, spec.cy, spec.radius);
                    BoundarySite bs;
                    bs.x = px + s * dx;
                    bs.y = py + s * dy;
                    a.theta = s;
                    a.site = static_cast<int>(g.sites.size());
                    g.sites.push_back(bs);
                    break;
                }
            }
            g.arms[static_cast<std::size_t>(q) * ndir + dir] = a;
        }
    }

    // Unique faces: every E/N arm, plus W/S arms ending on the boundary.
    for (int q = 0; q < g.num_interior(); ++q) {
        for (int dir = 0; dir < ndir; ++dir) {
            const bool forward = (dir % 2 == 1);
            if (forward || g.arm(q, dir).site >= 0) g.faces.push_back({q, dir});
        }
    }

    // Cells whose four corners all carry values (for cell-centered terms).
    if (g.n == 2) {
        for (int j = 0; j + 1 < g.ny; ++j)
            for (int i = 0; i + 1 < g.nx; ++i)
                if (g.cls[g.lat(i, j)] != NodeClass::Exterior &&
                    g.cls[g.lat(i + 1, j)] != NodeClass::Exterior &&
                    g.cls[g.lat(i + 1, j + 1)] != NodeClass::Exterior &&
                    g.cls[g.lat(i, j + 1)] != NodeClass::Exterior)
                    g.cells.push_back(g.lat(i, j));
    }

    // Quadrature weights.
    g.weight.assign(g.lattice_of.size(), 0.0);
    if (spec.kind == DomainSpec::Kind::Disk) {
        // Split each lattice cell's clipped area among its non-exterior
        // corners; cut cells are measured by midpoint counting. Sums to
        // |Omega| up to the slivers of cells with no non-exterior corner.
        for (int j = 0; j + 1 < g.ny; ++j) {
            for (int i = 0; i + 1 < g.nx; ++i) {
                const double xm = g.x_of_i(i) + g.hx / 2, ym = g.y_of_j(j) + g.hy / 2;
                const double rc = std::hypot(xm - spec.cx, ym - spec.cy);
                const double half_diag = 0.5 * std::hypot(g.hx, g.hy);
                double area;
                if (rc + half_diag <= spec.radius) {
                    area = g.hx * g.hy;
                } else if (rc - half_diag >= spec.radius) {
                    continue;
                } else {
                    constexpr int k = 64;
                    int inside = 0;
                    for (int b = 0; b < k; ++b)
                        for (int a = 0; a < k; ++a) {
                            const double sx = xm + g.hx * ((a + 0.5) / k - 0.5);
                            const double sy = ym + g.hy * ((b + 0.5) / k - 0.5);
                            if (std::hypot(sx - spec.cx, sy - spec.cy) <= spec.radius)
                                ++inside;
                        }
                    area = g.hx * g.hy * inside / double(k * k);
                    if (area == 0) continue;
                }
                const int corner[4] = {g.compact_of[g.lat(i, j)], g.compact_of[g.lat(i + 1, j)],
                                       g.compact_of[g.lat(i + 1, j + 1)],
                                       g.compact_of[g.lat(i, j + 1)]};
                int live = 0;
                for (int k2 = 0; k2 < 4; ++k2)
                    if (corner[k2] >= 0) ++live;
                if (live == 0) continue;
                for (int k2 = 0; k2 < 4; ++k2)
                    if (corner[k2] >= 0) g.weight[corner[k2]] += area / live;
            }
        }
    } else {
        for (int c = 0; c < g.num_nodes(); ++c) {
            const int l = g.lattice_of[c];
            const int i = l % g.nx, j = l / g.nx;
            if (spec.kind == DomainSpec::Kind::Interval) {
                g.weight[c] = (i == 0 || i == g.nx - 1) ? g.hx / 2 : g.hx;
            } else {
                const double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
                const double wy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
                g.weight[c] = g.hx * g.hy * wx * wy;
            }
        }
    }

    // Arc-length weights for boundary sites.
    if (spec.kind == DomainSpec::Kind::Interval) {
        for (auto& s : g.sites) s.ds = 1.0; // counting measure on two endpoints
    } else if (spec.kind == DomainSpec::Kind::Rectangle) {
        for (auto& s : g.sites) {
            const int i = s.lattice % g.nx, j = s.lattice / g.nx;
            const bool cx = (i == 0 || i == g.nx - 1);
            const bool cy = (j == 0 || j == g.ny - 1);
            if (cx && cy)
                s.ds = (g.hx + g.hy) / 2; // corner: two half-edges
            else
                s.ds = cx ? g.hy : g.hx;
        }
    } else {
        // Sort sites by polar angle and give each half the gap to its neighbors.
        const int ns = g.num_sites();
        std::vector<int> order(ns);
        std::iota(order.begin(), order.end(), 0);
        std::vector<double> ang(ns);
        for (int s = 0; s < ns; ++s)
            ang[s] = std::atan2(g.sites[s].y - spec.cy, g.sites[s].x - spec.cx);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return ang[a] < ang[b]; });
        for (int k = 0; k < ns; ++k) {
            const int prev = order[(k + ns - 1) % ns];
            const int next = order[(k + 1) % ns];
            double gap = ang[next] - ang[prev];
            if (gap <= 0) gap += 2 * M_PI;
            g.sites[order[k]].ds = spec.radius * gap / 2;
        }
    }

    return g;
}

} // namespace mcvar
