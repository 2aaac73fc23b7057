#pragma once

#include <cstdint>
#include <functional>

#include "mcvar/admissible.hpp"
#include "mcvar/pmc.hpp"

namespace mcvar {

using IterateMode = CoefMode; // simplified = scalar coefficient, geometric = tensor

struct IterateOptions {
    IterateMode mode = IterateMode::Scalar;
    double tol = 1e-8; // sup norm of the iterate difference
    int max_iters = 50;
    double omega = 1.0; // under-relaxation in (0, 1]
    bool record_energy = true;
    NewtonOptions newton;
    double eps0 = 0.05;
    bool allow_1d_nonzero_h = false;
    int polish_max = 15; // extra T applications for the residual certificate
    std::function<void(int, const ScalarField&, const ScalarField&)> on_iterate; // snapshots
};

struct OuterIter {
    int k;
    double du_inf, dH_inf;
    double e_simplified, e_geometric;
    int newton_iters;
};

enum class SolveStatus { Converged, MaxIters, PmcFailure };

struct SolveReport {
    std::vector<OuterIter> history;
    SolveStatus status = SolveStatus::MaxIters;
    int failed_at = -1;        // outer index of a PMC failure
    int failed_stage = -1;     // continuation stage of that failure
    double cert_pmc = -1;      // RMS pmc residual of the final pair
    double cert_elliptic = -1; // RMS elliptic residual of the final pair
    int polish_iters = 0;
    double final_e_simplified = 0, final_e_geometric = 0;
    double final_diff = 0;
    AdmissibilityReport admissibility;
    bool admissibility_ok = true;
    bool forced = false; // ran despite failing admissibility; output unvalidated
    double seconds = 0;  // wall clock; excluded from determinism comparisons
};

struct TMapResult {
    ScalarField u, H;
    NewtonLog newton;
    bool ok = false;
};

// One application of the map T: H from the linear curvature step with
// coefficient built at v, then u from the prescribed mean curvature solve
// started at v.
TMapResult t_map(const ScalarField& v, const BoundaryData& bd, IterateMode mode,
                 const NewtonOptions& opts);

struct FixedPointResult {
    ScalarField u, H;
    SolveReport report;
};

// Picard iteration of T from the minimal-surface start (the H = 0 solve),
// with under-relaxation omega and sup-norm stopping. After convergence a few
// extra applications of T tighten the pair until both PDE residuals are
// within 10x the Newton tolerance. Refuses inadmissible data unless force.
FixedPointResult fixed_point(const BoundaryData& bd, const GridPtr& grid,
                             const IterateOptions& opts, bool force = false);

struct ProbeReport {
    int samples = 0;
    double worst_margin = 0;
    int violations = 0; // margins below -1e-8
};

// Sampled local minimality of the J functional at the converged pair:
// random smooth zero-trace perturbations at eps in {1e-2, 1e-3} both signs.
ProbeReport local_minimality_probe(const ScalarField& u, const ScalarField& H,
                                   const BoundaryData& bd, int samples, std::uint64_t seed);

} // namespace mcvar
