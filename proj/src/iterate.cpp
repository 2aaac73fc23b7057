#include "mcvar/iterate.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "mcvar/calculus.hpp"
#include "mcvar/random_fields.hpp"

namespace mcvar {

TMapResult t_map(const ScalarField& v, const BoundaryData& bd, IterateMode mode,
                 const NewtonOptions& opts) {
    TMapResult res;
    res.H = curvature_step(v, bd, mode);
    PmcResult pmc = solve_pmc(res.H, bd, v, opts);
    res.u = std::move(pmc.u);
    res.newton = std::move(pmc.log);
    res.ok = pmc.converged;
    return res;
}

FixedPointResult fixed_point(const BoundaryData& bd, const GridPtr& grid,
                             const IterateOptions& opts, bool force) {
    const auto t_start = std::chrono::steady_clock::now();
    FixedPointResult out;
    SolveReport& rep = out.report;

    rep.admissibility = check_h(bd, grid->spec, *grid, opts.eps0, opts.allow_1d_nonzero_h);
    rep.admissibility_ok = rep.admissibility.required_ok();
    if (!rep.admissibility_ok) {
        if (!force)
            throw std::runtime_error(
                "boundary data fails a required admissibility condition (use force to "
                "attempt anyway)");
        rep.forced = true;
    }

    // Minimal-surface start: the PMC solve with H = 0.
    ScalarField zeroH(grid, 0.0);
    zeroH.set_trace_constant(0.0);
    PmcResult start = solve_pmc(zeroH, bd, std::nullopt, opts.newton);
    if (!start.converged) {
        rep.status = SolveStatus::PmcFailure;
        rep.failed_at = 0;
        rep.failed_stage = start.log.failed_stage;
        out.u = start.u;
        out.H = zeroH;
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
                          .count();
        return out;
    }

    ScalarField v = start.u;
    ScalarField H_prev = zeroH;
    double omega = opts.omega;
    bool omega_halved = false;
    bool converged = false;

    for (int k = 1; k <= opts.max_iters; ++k) {
        TMapResult step = t_map(v, bd, opts.mode, opts.newton);
        if (!step.ok && !omega_halved) {
            // one cheap rescue: halve the relaxation and retry the step
            omega /= 2;
            omega_halved = true;
            step = t_map(v, bd, opts.mode, opts.newton);
        }
        if (!step.ok) {
            rep.status = SolveStatus::PmcFailure;
            rep.failed_at = k;
            rep.failed_stage = step.newton.failed_stage;
            out.u = v;
            out.H = step.H;
            rep.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
                    .count();
            return out;
        }

        ScalarField v_next = v;
        for (std::size_t i = 0; i < v_next.values.size(); ++i)
            v_next.values[i] = (1 - omega) * v.values[i] + omega * step.u.values[i];

        OuterIter row;
        row.k = k;
        row.du_inf = diff_inf(v_next, v);
        row.dH_inf = diff_inf(step.H, H_prev);
        row.newton_iters = step.newton.total_iters;
        if (opts.record_energy) {
            row.e_simplified = energy_simplified(step.H, step.u);
            row.e_geometric = energy_geometric(step.H, step.u);
        } else {
            row.e_simplified = row.e_geometric = 0;
        }
        rep.history.push_back(row);

        v = std::move(v_next);
        H_prev = step.H;
        out.u = step.u;
        out.H = step.H;
        rep.final_diff = row.du_inf;
        if (opts.on_iterate) opts.on_iterate(k, out.u, out.H);

        if (row.du_inf <= opts.tol) {
            converged = true;
            break;
        }
    }

    rep.status = converged ? SolveStatus::Converged : SolveStatus::MaxIters;

    // Residual certificate: tighten the pair with plain T applications until
    // both discrete systems close at 10x the Newton tolerance. The Picard
    // stop alone cannot certify the elliptic residual because the
    // coefficient still carries the last iterate.
    if (converged) {
        const double target = 10 * opts.newton.tol;
        for (int p = 0; p < opts.polish_max; ++p) {
            out.H = curvature_step(out.u, bd, opts.mode);
            PmcResult refit = solve_pmc(out.H, bd, out.u, opts.newton);
            if (!refit.converged) break;
            out.u = std::move(refit.u);
            rep.polish_iters = p + 1;

            rep.cert_pmc = rms_residual(out.u, out.H);
            const CoefficientField coef = build_coefficient(out.u, opts.mode);
            const LinearSystem sys = assemble(coef, *grid, bd.h_sites);
            rep.cert_elliptic = rms(elliptic_residual(sys, out.H));
            if (rep.cert_pmc <= target && rep.cert_elliptic <= target) break;
        }
    }

    rep.final_e_simplified = energy_simplified(out.H, out.u);
    rep.final_e_geometric = energy_geometric(out.H, out.u);
    rep.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

ProbeReport local_minimality_probe(const ScalarField& u, const ScalarField& H,
                                   const BoundaryData& bd, int samples, std::uint64_t seed) {
    ProbeReport rep;
    rep.samples = samples;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    const double J0 = functional_J(u, H, bd);
    const double eps[4] = {1e-2, -1e-2, 1e-3, -1e-3};
    for (int s = 0; s < samples; ++s) {
        const ScalarField delta = random_zero_trace_bump(u.grid, rng, 1.0);
        for (double e : eps) {
            const double margin = functional_J(axpy(u, e, delta), H, bd) - J0;
            rep.worst_margin = std::min(rep.worst_margin, margin);
            if (margin < -1e-8) ++rep.violations;
        }
    }
    if (samples == 0) rep.worst_margin = 0;
    return rep;
}

} // namespace mcvar
