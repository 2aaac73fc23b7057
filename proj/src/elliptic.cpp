#include "mcvar/elliptic.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>

#include "stencil.hpp"

namespace mcvar {

namespace {

// Splits a stencil functional into interior unknowns and a trace constant.
struct SplitComb {
    std::vector<std::pair<int, double>> unknowns; // interior index, weight
    double constant = 0;
};

SplitComb split(const Grid& g, const stencil::LinComb& lc,
                const std::vector<double>& trace_sites) {
    SplitComb out;
    for (const auto& t : lc.nodes) {
        const int q = g.interior_of[t.first];
        if (q >= 0) {
            out.unknowns.emplace_back(q, t.second);
        } else {
            const int s = g.site_of_lattice[g.lattice_of[t.first]];
            out.constant += t.second * trace_sites[static_cast<std::size_t>(s)];
        }
    }
    for (const auto& t : lc.sites)
        out.constant += t.second * trace_sites[static_cast<std::size_t>(t.first)];
    return out;
}

} // namespace

CoefficientField build_coefficient(const ScalarField& v, CoefMode mode) {
    const Grid& g = *v.grid;
    CoefficientField coef;
    coef.mode = mode;
    const std::size_t nf = g.faces.size();
    if (mode == CoefMode::Scalar)
        coef.c.resize(nf);
    else
        coef.a.resize(nf);

    for (std::size_t f = 0; f < nf; ++f) {
        const auto fg = stencil::face_gradient(g, g.faces[f].q, g.faces[f].dir);
        double p[2] = {fg.g[0].eval(v), 0};
        if (g.n == 2) p[1] = fg.g[1].eval(v);
        const double D = std::sqrt(1 + p[0] * p[0] + p[1] * p[1]);
        if (mode == CoefMode::Scalar) {
            coef.c[f] = D;
        } else {
            coef.a[f] = {D - p[0] * p[0] / D, -p[0] * p[1] / D,
                         g.n == 2 ? D - p[1] * p[1] / D : 0.0};
        }
    }
    if (mode == CoefMode::Tensor && g.n == 2) {
        coef.cell_cross.resize(g.cells.size());
        for (std::size_t k = 0; k < g.cells.size(); ++k) {
            const auto cg = stencil::cell_gradient(g, g.cells[k]);
            const double px = cg.g[0].eval(v), py = cg.g[1].eval(v);
            coef.cell_cross[k] = -px * py / std::sqrt(1 + px * px + py * py);
        }
    }
    return coef;
}

LinearSystem assemble(const CoefficientField& coef, const Grid& grid,
                      const std::vector<double>& trace_sites) {
    if (static_cast<int>(trace_sites.size()) != grid.num_sites())
        throw EllipticError("trace size does not match the grid's boundary sites");
    const std::size_t expected = grid.faces.size();
    if ((coef.mode == CoefMode::Scalar ? coef.c.size() : coef.a.size()) != expected)
        throw EllipticError("coefficient field does not match the grid's faces");
    if (coef.mode == CoefMode::Tensor && grid.n == 2 &&
        coef.cell_cross.size() != grid.cells.size())
        throw EllipticError("tensor coefficient is missing cell cross terms");

    const int N = grid.num_interior();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(N) * 10);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(N);

    // Normal (two-point) arm terms: kappa (u_P - u_end)^2 / 2 per face, with
    // the tensor mode using its diagonal entry along the face axis.
    for (std::size_t f = 0; f < grid.faces.size(); ++f) {
        const Face& face = grid.faces[f];
        const int axis = face.dir / 2;
        const Arm& a = grid.arm(face.q, face.dir);
        const double delta = a.theta * grid.spacing(axis);
        const double cf =
            coef.mode == CoefMode::Scalar ? coef.c[f] : (axis == 0 ? coef.a[f][0] : coef.a[f][2]);
        const double kappa = cf * a.theta / (delta * delta);
        const int P = face.q;
        trip.emplace_back(P, P, kappa);
        if (a.site >= 0) {
            b[P] += kappa * trace_sites[static_cast<std::size_t>(a.site)];
        } else {
            const int Q = grid.interior_of[a.nbr];
            trip.emplace_back(Q, Q, kappa);
            trip.emplace_back(P, Q, -kappa);
            trip.emplace_back(Q, P, -kappa);
        }
    }

    // Mixed terms on cells: a12 gx gy per cell with four-corner gradients.
    // Cells tile the domain (boundary rows included), which keeps affine
    // fields exact critical points of the form for constant tensors.
    if (coef.mode == CoefMode::Tensor && grid.n == 2) {
        for (std::size_t k = 0; k < grid.cells.size(); ++k) {
            const double a12 = coef.cell_cross[k];
            if (a12 == 0) continue;
            const auto cg = stencil::cell_gradient(grid, grid.cells[k]);
            const SplitComb gx = split(grid, cg.g[0], trace_sites);
            const SplitComb gy = split(grid, cg.g[1], trace_sites);
            for (const auto& [i, Gxi] : gx.unknowns) {
                for (const auto& [j, Gyj] : gy.unknowns) {
                    trip.emplace_back(i, j, a12 * Gxi * Gyj);
                    trip.emplace_back(j, i, a12 * Gxi * Gyj);
                }
                b[i] -= a12 * Gxi * gy.constant;
            }
            for (const auto& [j, Gyj] : gy.unknowns) b[j] -= a12 * Gyj * gx.constant;
        }
    }

    LinearSystem sys;
    sys.A.resize(N, N);
    sys.A.setFromTriplets(trip.begin(), trip.end());
    sys.A.makeCompressed();
    sys.b = std::move(b);
    sys.spd = true;
    return sys;
}

Eigen::VectorXd solve_linear(const LinearSystem& sys) {
    const double bnorm = std::max(sys.b.norm(), 1e-300);
    Eigen::VectorXd x;

    auto refine = [&](auto& solver) {
        x = solver.solve(sys.b);
        for (int round = 0; round < 4; ++round) {
            const Eigen::VectorXd r = sys.b - sys.A * x;
            if (r.norm() / bnorm <= 1e-12) break;
            x += solver.solve(r).eval();
        }
    };

    if (sys.spd) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
        solver.compute(sys.A);
        if (solver.info() != Eigen::Success)
            throw EllipticError("factorization breakdown (system not SPD?)");
        refine(solver);
    } else {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
        solver.compute(sys.A);
        if (solver.info() != Eigen::Success)
            throw EllipticError("factorization breakdown (singular system?)");
        refine(solver);
    }

    const double rel = (sys.b - sys.A * x).norm() / bnorm;
    if (!(rel <= 1e-10))
        throw EllipticError("linear solve missed the 1e-10 residual contract, rel=" +
                            std::to_string(rel));
    return x;
}

ScalarField curvature_step(const ScalarField& v, const BoundaryData& bd, CoefMode mode) {
    const Grid& g = *v.grid;
    const CoefficientField coef = build_coefficient(v, mode);
    const LinearSystem sys = assemble(coef, g, bd.h_sites);
    const Eigen::VectorXd x = solve_linear(sys);

    ScalarField H(v.grid, 0.0);
    for (int q = 0; q < g.num_interior(); ++q)
        H.values[static_cast<std::size_t>(g.compact_of_int[q])] = x[q];
    for (int c = 0; c < g.num_nodes(); ++c) {
        if (g.interior_of[c] >= 0) continue;
        const int s = g.site_of_lattice[g.lattice_of[c]];
        H.values[static_cast<std::size_t>(c)] = bd.h_sites[static_cast<std::size_t>(s)];
    }
    H.trace = bd.h_sites;
    return H;
}

double discrete_form_energy(const CoefficientField& coef, const Grid& grid,
                            const ScalarField& H) {
    double sum = 0;
    for (std::size_t f = 0; f < grid.faces.size(); ++f) {
        const Face& face = grid.faces[f];
        const int axis = face.dir / 2;
        const Arm& a = grid.arm(face.q, face.dir);
        const double delta = a.theta * grid.spacing(axis);
        const double cf =
            coef.mode == CoefMode::Scalar ? coef.c[f] : (axis == 0 ? coef.a[f][0] : coef.a[f][2]);
        stencil::LinComb gn;
        gn.add_arm_end(grid, a, 1.0 / delta);
        gn.add_node(grid.compact_of_int[face.q], -1.0 / delta);
        const double v = gn.eval(H);
        sum += 0.5 * cf * a.theta * v * v;
    }
    if (coef.mode == CoefMode::Tensor && grid.n == 2) {
        for (std::size_t k = 0; k < grid.cells.size(); ++k) {
            const auto cg = stencil::cell_gradient(grid, grid.cells[k]);
            sum += coef.cell_cross[k] * cg.g[0].eval(H) * cg.g[1].eval(H);
        }
    }
    return sum;
}

Eigen::VectorXd elliptic_residual(const LinearSystem& sys, const ScalarField& H) {
    const Grid& g = *H.grid;
    Eigen::VectorXd x(g.num_interior());
    for (int q = 0; q < g.num_interior(); ++q)
        x[q] = H.values[static_cast<std::size_t>(g.compact_of_int[q])];
    return sys.A * x - sys.b;
}

double rms(const Eigen::VectorXd& r) {
    if (r.size() == 0) return 0;
    return std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));
}

} // namespace mcvar
