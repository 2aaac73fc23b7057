#pragma once

#include <optional>

#include "mcvar/elliptic.hpp"
#include "mcvar/field.hpp"

namespace mcvar {

struct NewtonOptions {
    int max_iters = 50;
    double tol = 1e-10;      // RMS of the nodal residual
    double armijo_c = 1e-4;  // sufficient-decrease constant
    double min_step = 9.5367431640625e-7; // 2^-20
    std::vector<double> continuation = {0.25, 0.5, 0.75, 1.0};
};

struct NewtonIter {
    int k;
    double rms, inf;
    double step; // accepted line-search step (0 for the initial residual row)
    double t;    // continuation parameter of the stage
};

struct NewtonLog {
    std::vector<NewtonIter> iters;
    bool converged = false;
    int failed_stage = -1;   // continuation stage index that gave up, -1 if none
    double best_rms = 0;
    double quad_kappa = 0;   // max ||R_{k+1}|| / ||R_k||^2 over the full-step tail
    int total_iters = 0;
};

struct PmcResult {
    ScalarField u;
    NewtonLog log;
    bool converged = false;
};

// Nodal residual R(u) = div_h(F(grad u)) - n H with F(p) = p / sqrt(1+|p|^2)
// in flux form; identically zero for affine u with H = 0. Interior nodes
// only (boundary entries zero, no trace).
ScalarField pmc_residual(const ScalarField& u, const ScalarField& H);

// RMS over interior nodes of the pmc residual.
double rms_residual(const ScalarField& u, const ScalarField& H);

// Exact linearization of pmc_residual with respect to the interior unknowns:
// w -> div_h(gradF(grad u) grad w), assembled per face with the symmetric
// tensor gradF(p) = (I - p p^T / D^2) / D (face eigenvalues in [1/D^3, 1/D]).
LinearSystem pmc_jacobian(const ScalarField& u);

// The face tensor itself, for inspection/tests: (a11, a12, a22) at a face.
std::array<double, 3> pmc_face_tensor(const ScalarField& u, int face_index);

// Discrete harmonic extension of g: one scalar-mode elliptic solve with c=1.
ScalarField harmonic_extension(const GridPtr& grid, const std::vector<double>& g_sites);

// Damped Newton with Armijo backtracking on ||R||_2; on failure restarts with
// continuation in t*H from the solution at the previous t. Non-convergence is
// a reported outcome, not a crash.
PmcResult solve_pmc(const ScalarField& H, const BoundaryData& bd,
                    const std::optional<ScalarField>& u0, const NewtonOptions& opts);

} // namespace mcvar
