#pragma once

#include "mcvar/field.hpp"

namespace mcvar {

// Gradient at interior nodes: central differences, with the non-uniform
// three-point formula where an arm is shortened by the boundary. Needs the
// field's trace wherever a stencil reaches the boundary.
VectorField gradient(const ScalarField& f);

// Area factor D(u) = sqrt(1 + |grad u|^2) at every weighted node (one-sided
// gradients on rectangle/interval boundary nodes).
ScalarField area_factor(const ScalarField& u);

// Mean curvature H = (1/n) div(grad u / D(u)) of the graph of u, in flux
// form: face fluxes from face-centered gradients, then differenced. Exactly
// zero for affine u. Interior nodes only; boundary entries are padded with
// the adjacent interior value and no trace is attached.
ScalarField mean_curvature(const ScalarField& u);

// |grad_M H|^2 = |grad H|^2 - |grad u . grad H / D|^2, nodal.
ScalarField tangential_gradient_sq(const ScalarField& H, const ScalarField& u);

// (1/2) int |grad H|^2 D(u) dx by nodal quadrature.
double energy_simplified(const ScalarField& H, const ScalarField& u);

// (1/2) int [ |grad H|^2 - |grad u . grad H / D|^2 ] D(u) dx; never exceeds
// the simplified energy (same quadrature, Cauchy--Schwarz pointwise).
double energy_geometric(const ScalarField& H, const ScalarField& u);

// J[v] = int D(v) + int n H v dx + oint |v - g| dS. The trace of v supplies
// the boundary values for the misfit term.
double functional_J(const ScalarField& v, const ScalarField& H, const BoundaryData& bd);

} // namespace mcvar
