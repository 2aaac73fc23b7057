#pragma once

#include <random>

#include "mcvar/field.hpp"

namespace mcvar {

// Random smooth trigonometric field with amplitude-bounded values and
// gradients, sampled nodally with its exact trace attached.
ScalarField random_smooth_field(const GridPtr& grid, std::mt19937_64& rng, double amplitude);

// Random smooth perturbation vanishing on the boundary: sine products on
// rectangles/intervals, a (1 - (r/R)^2) envelope on disks. The trace and the
// boundary nodal values are exactly zero.
ScalarField random_zero_trace_bump(const GridPtr& grid, std::mt19937_64& rng, double amplitude);

// u + s * d (values and trace).
ScalarField axpy(const ScalarField& u, double s, const ScalarField& d);

} // namespace mcvar
