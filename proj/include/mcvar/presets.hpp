#pragma once

#include <functional>
#include <string>

#include "mcvar/field.hpp"
#include "mcvar/pmc.hpp"

namespace mcvar {

// Analytic reference problems: "plane" (affine graph on the unit square),
// "cap" / "cap-<R>" (spherical cap of radius R over the unit disk, H = -1/R
// with the upward normal) and "sine" (manufactured sine bump on the unit
// square with closed-form curvature).
struct Preset {
    std::string name;
    DomainSpec domain;
    std::function<double(double, double)> u_exact;
    std::function<double(double, double)> H_exact;
    std::string g_text; // boundary expressions where a run config needs them
    std::string h_text;
    bool zero_energy = false; // exact curvature-variation energy vanishes

    ScalarField exact_u(const GridPtr& grid) const;
    ScalarField exact_H(const GridPtr& grid) const;
};

Preset make_preset(const std::string& name);

// Mean curvature of a graph given by a formula, via high-order finite
// differences of the expression (for user-supplied manufactured solutions).
double curvature_of_expr(const Expr& e, const DomainSpec& spec, double x, double y);

struct ConvergenceRow {
    int m = 0;
    double err_curvature = 0; // sup |mean_curvature(u*) - H*|
    double err_pmc = 0;       // sup |solve_pmc(H*, g) - u*|
    double e_simplified = 0, e_geometric = 0;
    double quad_kappa = 0;
    bool newton_ok = false;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    // observed orders between consecutive rows (log2 of error ratios);
    // entries are NaN where an error sits at the solver floor
    std::vector<double> order_curvature, order_pmc, order_energy;
    bool all_orders_ok(double min_order) const;
};

ConvergenceStudy run_convergence(const Preset& preset, const std::vector<int>& resolutions,
                                 const NewtonOptions& newton);

} // namespace mcvar
