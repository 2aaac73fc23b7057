#pragma once

#include <Eigen/Sparse>
#include <array>
#include <vector>

#include "mcvar/field.hpp"

namespace mcvar {

struct EllipticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CoefMode { Scalar, Tensor };

// Coefficients for div(coef grad H) = 0. Scalar mode stores c = D(v) >= 1
// per face; tensor mode stores the symmetric a = D(v) I - grad v grad v^T /
// D(v) as (a11, a12, a22) per face (eigenvalues {1/D, D}), plus the mixed
// coefficient sampled at cell centers where the assembled form carries the
// cross terms.
struct CoefficientField {
    CoefMode mode = CoefMode::Scalar;
    std::vector<double> c;                // per grid face
    std::vector<std::array<double, 3>> a; // per grid face
    std::vector<double> cell_cross;       // a12 per grid cell (tensor mode, n = 2)
};

// Dirichlet system over the interior unknowns; the trace contributions are
// folded into b. Assembled from shared face contributions of the discrete
// quadratic energy form, so A is symmetric to the last bit and positive
// definite; in scalar mode it is also an M-matrix (discrete maximum
// principle).
struct LinearSystem {
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    bool spd = true;
};

CoefficientField build_coefficient(const ScalarField& v, CoefMode mode);

LinearSystem assemble(const CoefficientField& coef, const Grid& grid,
                      const std::vector<double>& trace_sites);

// Solves to a relative residual of at most 1e-10 (direct factorization plus
// iterative refinement); throws EllipticError when the contract cannot be met.
Eigen::VectorXd solve_linear(const LinearSystem& sys);

// Step one of the map T: the unique minimizer of the discrete energy form
// over fields with trace h, i.e. the solution of the assembled
// Euler--Lagrange system. Returns H with its h-trace attached.
ScalarField curvature_step(const ScalarField& v, const BoundaryData& bd, CoefMode mode);

// The assembled quadratic energy form evaluated on a field with trace
// (its minimizer is curvature_step's solution).
double discrete_form_energy(const CoefficientField& coef, const Grid& grid,
                            const ScalarField& H);

// Nodal residual A x - b of the system at a field with trace.
Eigen::VectorXd elliptic_residual(const LinearSystem& sys, const ScalarField& H);

double rms(const Eigen::VectorXd& r);

} // namespace mcvar
