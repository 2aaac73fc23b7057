#include "stencil.hpp"

namespace mcvar::stencil {

LinComb nodal_deriv(const Grid& g, int q, int axis) {
    const Arm& am = g.arm(q, 2 * axis);
    const Arm& ap = g.arm(q, 2 * axis + 1);
    const double h = g.spacing(axis);
    const double a = am.theta * h, b = ap.theta * h;
    // f' at the center of a {-a, 0, +b} stencil.
    const double denom = a * b * (a + b);
    LinComb lc;
    lc.add_arm_end(g, ap, a * a / denom);
    lc.add_arm_end(g, am, -b * b / denom);
    lc.add_node(g.compact_of_int[q], (b * b - a * a) / denom);
    return lc;
}

LinComb boundary_deriv(const Grid& g, int c, int axis) {
    LinComb lc;
    const int l = g.lattice_of[c];
    const int i = l % g.nx, j = l / g.nx;
    const double h = g.spacing(axis);
    const int step = axis == 0 ? 1 : g.nx;
    const int pos = axis == 0 ? i : j;
    const int len = axis == 0 ? g.nx : g.ny;

    auto cls_at = [&](int off) { return g.cls[l + off * step]; };
    auto add = [&](int off, double w) { lc.add_node(g.compact_of[l + off * step], w); };

    // along-boundary direction: central if both neighbors exist
    if (pos > 0 && pos + 1 < len && cls_at(-1) != NodeClass::Exterior &&
        cls_at(+1) != NodeClass::Exterior) {
        add(+1, 1 / (2 * h));
        add(-1, -1 / (2 * h));
        return lc;
    }
    // one-sided, second order, pointing into the domain
    if (pos + 2 < len && cls_at(+1) != NodeClass::Exterior && cls_at(+2) != NodeClass::Exterior) {
        add(0, -3 / (2 * h));
        add(+1, 4 / (2 * h));
        add(+2, -1 / (2 * h));
        return lc;
    }
    if (pos >= 2 && cls_at(-1) != NodeClass::Exterior && cls_at(-2) != NodeClass::Exterior) {
        add(0, 3 / (2 * h));
        add(-1, -4 / (2 * h));
        add(-2, 1 / (2 * h));
        return lc;
    }
    return lc; // isolated direction (disk sliver); caller treats as zero
}

namespace {

// Tangential derivative at the far end of an arm. Interior end: its own
// central formula. Boundary lattice end: central along the lattice if both
// neighbors are available. Cut intersections fall back to the owner's value.
bool end_tangential(const Grid& g, const Arm& a, int taxis, LinComb& out) {
    if (a.nbr >= 0) {
        const int qn = g.interior_of[a.nbr];
        if (qn >= 0) {
            out = nodal_deriv(g, qn, taxis);
            return true;
        }
        return false;
    }
    const int lat = g.sites[a.site].lattice;
    if (lat < 0) return false;
    const int i = lat % g.nx, j = lat / g.nx;
    const int step = taxis == 0 ? 1 : g.nx;
    const int pos = taxis == 0 ? i : j;
    const int len = taxis == 0 ? g.nx : g.ny;
    if (pos == 0 || pos + 1 >= len) return false;
    if (g.cls[lat - step] == NodeClass::Exterior || g.cls[lat + step] == NodeClass::Exterior)
        return false;
    const double h = g.spacing(taxis);
    out.add_node(g.compact_of[lat + step], 1 / (2 * h));
    out.add_node(g.compact_of[lat - step], -1 / (2 * h));
    return true;
}

} // namespace

FaceGrad face_gradient(const Grid& g, int q, int dir) {
    const int axis = dir / 2;
    const double sign = (dir % 2 == 1) ? 1.0 : -1.0;
    const Arm& a = g.arm(q, dir);
    const double delta = a.theta * g.spacing(axis);
    const int c = g.compact_of_int[q];

    FaceGrad fg;
    fg.g[axis].add_arm_end(g, a, sign / delta);
    fg.g[axis].add_node(c, -sign / delta);

    if (g.n == 2) {
        const int taxis = 1 - axis;
        const LinComb tc = nodal_deriv(g, q, taxis);
        LinComb te;
        if (end_tangential(g, a, taxis, te)) {
            fg.g[taxis].add_scaled(tc, 0.5);
            fg.g[taxis].add_scaled(te, 0.5);
        } else {
            // extrapolate the nodal tangential derivative to the face
            // midpoint using the opposite arm's end
            const Arm& opp = g.arm(q, dir ^ 1);
            LinComb topp;
            if (opp.nbr >= 0 && g.interior_of[opp.nbr] >= 0 &&
                end_tangential(g, opp, taxis, topp)) {
                const double s = a.theta / (2 * opp.theta);
                fg.g[taxis].add_scaled(tc, 1 + s);
                fg.g[taxis].add_scaled(topp, -s);
            } else {
                fg.g[taxis] = tc;
            }
        }
    }
    return fg;
}

FaceGrad cell_gradient(const Grid& g, int sw_lattice) {
    FaceGrad fg;
    const int corner[4] = {sw_lattice, sw_lattice + 1, sw_lattice + 1 + g.nx, sw_lattice + g.nx};
    const double wx[4] = {-1, 1, 1, -1};
    const double wy[4] = {-1, -1, 1, 1};
    for (int k = 0; k < 4; ++k) {
        const int c = g.compact_of[corner[k]];
        fg.g[0].add_node(c, wx[k] / (2 * g.hx));
        fg.g[1].add_node(c, wy[k] / (2 * g.hy));
    }
    return fg;
}

void grad_at_compact(const Grid& g, const ScalarField& f, int c, double out[2]) {
    out[0] = out[1] = 0;
    const int q = g.interior_of[c];
    if (q >= 0) {
        for (int axis = 0; axis < g.n; ++axis) out[axis] = nodal_deriv(g, q, axis).eval(f);
        return;
    }
    for (int axis = 0; axis < g.n; ++axis) out[axis] = boundary_deriv(g, c, axis).eval(f);
}

} // namespace mcvar::stencil
