#include "mcvar/admissible.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcvar {

namespace {

constexpr double kBorderline = 1e-12;

Condition make_condition(std::string name, double threshold, double observed, bool strict,
                         bool required, int samples) {
    Condition c;
    c.name = std::move(name);
    c.threshold = threshold;
    c.observed = observed;
    c.margin = threshold - observed;
    c.required = required;
    c.samples = samples;
    if (strict) {
        if (c.margin > kBorderline)
            c.status = CondStatus::Satisfied;
        else if (c.margin >= 0)
            c.status = CondStatus::Borderline;
        else
            c.status = CondStatus::Violated;
    } else {
        c.status = c.margin >= 0 ? CondStatus::Satisfied : CondStatus::Violated;
    }
    return c;
}

} // namespace

AdmissibilityReport check_h(const BoundaryData& bd, const DomainSpec& spec, const Grid& grid,
                            double eps0, bool allow_1d_nonzero_h) {
    AdmissibilityReport rep;
    const int n = spec.dimension();
    const double ratio = std::pow(ball_volume(n) / domain_volume(spec), 1.0 / n);

    // Sample set: every boundary site plus 4x parametric oversampling.
    struct Sample {
        double x, y;
        bool corner;
    };
    std::vector<Sample> samples;
    for (int s = 0; s < grid.num_sites(); ++s) {
        const auto& bs = grid.sites[s];
        bool corner = false;
        if (spec.kind == DomainSpec::Kind::Rectangle && bs.lattice >= 0) {
            const int i = bs.lattice % grid.nx, j = bs.lattice / grid.nx;
            corner = (i == 0 || i == grid.nx - 1) && (j == 0 || j == grid.ny - 1);
        }
        samples.push_back({bs.x, bs.y, corner});
    }
    for (const auto& p : sample_boundary(spec, 4 * std::max(grid.num_sites(), 8)))
        samples.push_back({p.x, p.y, false});

    double max_abs_h = 0;
    double min_curv_margin = std::numeric_limits<double>::infinity();
    int curv_samples = 0;
    for (const auto& s : samples) {
        const double hv = bd.h.eval(domain_point(spec, s.x, s.y));
        max_abs_h = std::max(max_abs_h, std::fabs(hv));
        if (n == 2 && !s.corner) {
            const double hb = boundary_mean_curvature(spec, s.x, s.y);
            min_curv_margin =
                std::min(min_curv_margin, (n - 1.0) / n * hb - std::fabs(hv));
            ++curv_samples;
        }
    }

    rep.conditions.push_back(make_condition("H_SMALLNESS", ratio, max_abs_h, /*strict=*/true,
                                            /*required=*/true,
                                            static_cast<int>(samples.size())));
    if (n == 2) {
        // expressed as a margin: min over samples of (n-1)/n H_dOmega - |h|
        Condition c;
        c.name = "H_BOUNDARY_CURV";
        c.margin = min_curv_margin;
        c.threshold = 0;
        c.observed = -min_curv_margin;
        c.required = true;
        c.samples = curv_samples;
        c.status = min_curv_margin >= 0 ? CondStatus::Satisfied : CondStatus::Violated;
        rep.conditions.push_back(c);
        if (spec.kind == DomainSpec::Kind::Rectangle)
            rep.warnings.push_back(
                "rectangle corners excluded from H_BOUNDARY_CURV; the C^{2,alpha} boundary "
                "hypothesis fails there");
    } else {
        // (n-1)/n = 0 forces h = 0 at the endpoints under a literal reading.
        double max_end = 0;
        for (const auto& p : sample_boundary(spec, 2))
            max_end = std::max(max_end, std::fabs(bd.h.eval(domain_point(spec, p.x, p.y))));
        Condition c = make_condition("ONE_D_DEGENERATE", 0.0, max_end, /*strict=*/false,
                                     /*required=*/!allow_1d_nonzero_h, 2);
        rep.conditions.push_back(c);
        if (allow_1d_nonzero_h && !c.satisfied())
            rep.warnings.push_back("nonzero 1-d endpoint curvature allowed by override");
    }
    rep.conditions.push_back(make_condition("GIAQUINTA_SUFFICIENT", (1 - eps0) * ratio,
                                            max_abs_h, /*strict=*/false, /*required=*/false,
                                            static_cast<int>(samples.size())));
    return rep;
}

AdmissibilityReport check_H_field(const ScalarField& H, const DomainSpec& spec, double eps0) {
    AdmissibilityReport rep;
    const Grid& g = *H.grid;
    const int n = spec.dimension();

    double sum = 0;
    int used = 0;
    for (int c = 0; c < g.num_nodes(); ++c) {
        const double w = g.weight[static_cast<std::size_t>(c)];
        if (w == 0) continue;
        sum += w * std::pow(std::fabs(H.values[static_cast<std::size_t>(c)]), n);
        ++used;
    }
    const double ln_norm = std::pow(sum, 1.0 / n);
    const double threshold = std::pow(ball_volume(n), 1.0 / n);

    rep.conditions.push_back(
        make_condition("H_LN_BALL", threshold, ln_norm, /*strict=*/true, /*required=*/true, used));
    rep.conditions.push_back(make_condition("GIAQUINTA_SUFFICIENT", (1 - eps0) * threshold,
                                            ln_norm, /*strict=*/false, /*required=*/false, used));
    return rep;
}

} // namespace mcvar
