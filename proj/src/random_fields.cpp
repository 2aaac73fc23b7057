#include "mcvar/random_fields.hpp"

#include <cmath>

namespace mcvar {

ScalarField random_smooth_field(const GridPtr& grid, std::mt19937_64& rng, double amplitude) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    struct Term {
        double a, kx, ky, px, py;
    };
    std::vector<Term> terms(3);
    for (auto& t : terms) {
        t.a = amplitude * unif(rng) / 3;
        t.kx = 2.0 * unif(rng);
        t.ky = 2.0 * unif(rng);
        t.px = M_PI * unif(rng);
        t.py = M_PI * unif(rng);
    }
    const double lx = amplitude * unif(rng) / 4, ly = amplitude * unif(rng) / 4;
    return ScalarField::sample(grid, [=](double x, double y) {
        double v = lx * x + ly * y;
        for (const auto& t : terms) v += t.a * std::sin(t.kx * x + t.px) * std::sin(t.ky * y + t.py);
        return v;
    });
}

ScalarField random_zero_trace_bump(const GridPtr& grid, std::mt19937_64& rng, double amplitude) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_int_distribution<int> mode(1, 3);
    const DomainSpec spec = grid->spec;

    ScalarField out;
    if (spec.kind == DomainSpec::Kind::Disk) {
        struct Term {
            double a, kx, ky, px, py;
        };
        std::vector<Term> terms(3);
        for (auto& t : terms) {
            t.a = amplitude * unif(rng) / 3;
            t.kx = 3.0 * unif(rng);
            t.ky = 3.0 * unif(rng);
            t.px = M_PI * unif(rng);
            t.py = M_PI * unif(rng);
        }
        const double cx = spec.cx, cy = spec.cy, R = spec.radius;
        out = ScalarField::sample(grid, [=](double x, double y) {
            const double rho2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (R * R);
            double v = 0;
            for (const auto& t : terms)
                v += t.a * std::sin(t.kx * x + t.px) * std::sin(t.ky * y + t.py);
            return v * std::max(0.0, 1.0 - rho2);
        });
    } else {
        const double ax = spec.extents[0], bx = spec.extents[1];
        const double ay = spec.extents[2], by = spec.extents[3];
        const bool one_d = spec.kind == DomainSpec::Kind::Interval;
        struct Term {
            double a;
            int kx, ky;
        };
        std::vector<Term> terms(3);
        for (auto& t : terms) {
            t.a = amplitude * unif(rng) / 3;
            t.kx = mode(rng);
            t.ky = mode(rng);
        }
        out = ScalarField::sample(grid, [=](double x, double y) {
            const double xi = (x - ax) / (bx - ax);
            const double eta = one_d ? 0.5 : (y - ay) / (by - ay);
            double v = 0;
            for (const auto& t : terms)
                v += t.a * std::sin(M_PI * t.kx * xi) *
                     (one_d ? 1.0 : std::sin(M_PI * t.ky * eta));
            return v;
        });
    }
    // exact zero trace, including at boundary lattice nodes
    out.set_trace_constant(0.0);
    const Grid& g = *grid;
    for (int c = 0; c < g.num_nodes(); ++c)
        if (g.interior_of[c] < 0) out.values[static_cast<std::size_t>(c)] = 0.0;
    return out;
}

ScalarField axpy(const ScalarField& u, double s, const ScalarField& d) {
    ScalarField out = u;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += s * d.values[i];
    if (out.has_trace() && d.has_trace())
        for (std::size_t i = 0; i < out.trace.size(); ++i) out.trace[i] += s * d.trace[i];
    return out;
}

} // namespace mcvar
