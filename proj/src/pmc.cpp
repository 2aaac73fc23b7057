#include "mcvar/pmc.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "stencil.hpp"

namespace mcvar {

namespace {

void eval_face_gradient(const Grid& g, const stencil::FaceGrad& fg, const ScalarField& u,
                        double p[2]) {
    p[0] = fg.g[0].eval(u);
    p[1] = g.n == 2 ? fg.g[1].eval(u) : 0.0;
}

std::array<double, 3> grad_F(const double p[2], int n) {
    const double D2 = 1 + p[0] * p[0] + p[1] * p[1];
    const double D = std::sqrt(D2);
    if (n == 1) return {(1 - p[0] * p[0] / D2) / D, 0, 0};
    return {(1 - p[0] * p[0] / D2) / D, (-p[0] * p[1] / D2) / D, (1 - p[1] * p[1] / D2) / D};
}

Eigen::VectorXd interior_vector(const ScalarField& f) {
    const Grid& g = *f.grid;
    Eigen::VectorXd x(g.num_interior());
    for (int q = 0; q < g.num_interior(); ++q)
        x[q] = f.values[static_cast<std::size_t>(g.compact_of_int[q])];
    return x;
}

void set_interior(ScalarField& f, const Eigen::VectorXd& x) {
    const Grid& g = *f.grid;
    for (int q = 0; q < g.num_interior(); ++q)
        f.values[static_cast<std::size_t>(g.compact_of_int[q])] = x[q];
}

} // namespace

ScalarField pmc_residual(const ScalarField& u, const ScalarField& H) {
    const Grid& g = *u.grid;
    if (!u.grid->same_layout(*H.grid)) throw FieldError("fields live on different grids");

    ScalarField out(u.grid, 0.0);
    for (int q = 0; q < g.num_interior(); ++q) {
        double div = 0;
        for (int axis = 0; axis < g.n; ++axis) {
            double flux[2];
            for (int side = 0; side < 2; ++side) {
                const auto fg = stencil::face_gradient(g, q, 2 * axis + side);
                double p[2];
                eval_face_gradient(g, fg, u, p);
                flux[side] = p[axis] / std::sqrt(1 + p[0] * p[0] + p[1] * p[1]);
            }
            div += (flux[1] - flux[0]) / stencil::div_spacing(g, q, axis);
        }
        const int c = g.compact_of_int[q];
        out.values[static_cast<std::size_t>(c)] =
            div - g.n * H.values[static_cast<std::size_t>(c)];
    }
    return out;
}

double rms_residual(const ScalarField& u, const ScalarField& H) {
    return rms(interior_vector(pmc_residual(u, H)));
}

LinearSystem pmc_jacobian(const ScalarField& u) {
    const Grid& g = *u.grid;
    const int N = g.num_interior();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(N) * 12);

    for (int q = 0; q < N; ++q) {
        for (int axis = 0; axis < g.n; ++axis) {
            const double dx = stencil::div_spacing(g, q, axis);
            for (int side = 0; side < 2; ++side) {
                const auto fg = stencil::face_gradient(g, q, 2 * axis + side);
                double p[2];
                eval_face_gradient(g, fg, u, p);
                const auto A = grad_F(p, g.n);
                const double sgn = side == 1 ? 1.0 : -1.0;
                // d(flux_axis) = A[axis][0] dgx + A[axis][1] dgy ; trace
                // references are fixed under differentiation and drop out.
                for (int comp = 0; comp < g.n; ++comp) {
                    const double w = (comp == axis) ? (axis == 0 ? A[0] : A[2]) : A[1];
                    for (const auto& t : fg.g[comp].nodes) {
                        const int qq = g.interior_of[t.first];
                        if (qq >= 0) trip.emplace_back(q, qq, sgn * w * t.second / dx);
                    }
                }
            }
        }
    }

    LinearSystem sys;
    sys.A.resize(N, N);
    sys.A.setFromTriplets(trip.begin(), trip.end());
    sys.A.makeCompressed();
    sys.b = Eigen::VectorXd::Zero(N);
    sys.spd = false;
    return sys;
}

std::array<double, 3> pmc_face_tensor(const ScalarField& u, int face_index) {
    const Grid& g = *u.grid;
    const Face& f = g.faces[static_cast<std::size_t>(face_index)];
    const auto fg = stencil::face_gradient(g, f.q, f.dir);
    double p[2];
    eval_face_gradient(g, fg, u, p);
    return grad_F(p, g.n);
}

ScalarField harmonic_extension(const GridPtr& grid, const std::vector<double>& g_sites) {
    const Grid& g = *grid;
    CoefficientField coef;
    coef.mode = CoefMode::Scalar;
    coef.c.assign(g.faces.size(), 1.0);
    const LinearSystem sys = assemble(coef, g, g_sites);
    const Eigen::VectorXd x = solve_linear(sys);

    ScalarField u(grid, 0.0);
    set_interior(u, x);
    for (int c = 0; c < g.num_nodes(); ++c) {
        if (g.interior_of[c] >= 0) continue;
        const int s = g.site_of_lattice[g.lattice_of[c]];
        u.values[static_cast<std::size_t>(c)] = g_sites[static_cast<std::size_t>(s)];
    }
    u.trace = g_sites;
    return u;
}

namespace {

// One Newton run against a fixed right-hand side field. Appends log rows
// tagged with the continuation parameter t.
bool newton_stage(ScalarField& u, const ScalarField& H, const NewtonOptions& opts, double t,
                  NewtonLog& log) {
    const Grid& g = *u.grid;
    const int N = g.num_interior();

    Eigen::VectorXd r = interior_vector(pmc_residual(u, H));
    double rms_r = rms(r);
    log.iters.push_back({0, rms_r, r.size() ? r.cwiseAbs().maxCoeff() : 0.0, 0.0, t});

    for (int k = 1; k <= opts.max_iters; ++k) {
        if (rms_r <= opts.tol) {
            log.converged = true;
            return true;
        }
        const LinearSystem J = pmc_jacobian(u);
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J.A);
        if (lu.info() != Eigen::Success) return false;
        const Eigen::VectorXd delta = lu.solve(-r);

        // Armijo on phi = ||R||_2^2/2; the exact Jacobian gives the predicted
        // decrease <grad phi, delta> = -||R||^2.
        const double phi0 = 0.5 * r.squaredNorm();
        const Eigen::VectorXd x0 = interior_vector(u);
        double step = 1.0;
        bool accepted = false;
        Eigen::VectorXd r_new;
        while (step >= opts.min_step) {
            set_interior(u, x0 + step * delta);
            r_new = interior_vector(pmc_residual(u, H));
            const double phi = 0.5 * r_new.squaredNorm();
            if (phi <= phi0 * (1 - 2 * opts.armijo_c * step) + 1e-30) {
                accepted = true;
                break;
            }
            step /= 2;
        }
        if (!accepted) {
            set_interior(u, x0);
            return false;
        }
        r = std::move(r_new);
        const double rms_prev = rms_r;
        rms_r = rms(r);
        log.iters.push_back({k, rms_r, N ? r.cwiseAbs().maxCoeff() : 0.0, step, t});

        // Observed quadratic-tail constant over full steps below 1e-3.
        if (step == 1.0 && rms_prev <= 1e-3 && rms_r > 1e-14)
            log.quad_kappa = std::max(log.quad_kappa, rms_r / (rms_prev * rms_prev));
    }
    if (rms_r <= opts.tol) {
        log.converged = true;
        return true;
    }
    return false;
}

ScalarField scaled_H(const ScalarField& H, double t) {
    ScalarField out = H;
    for (auto& v : out.values) v *= t;
    for (auto& v : out.trace) v *= t;
    return out;
}

} // namespace

PmcResult solve_pmc(const ScalarField& H, const BoundaryData& bd,
                    const std::optional<ScalarField>& u0, const NewtonOptions& opts) {
    PmcResult res;
    res.u = u0 ? *u0 : harmonic_extension(H.grid, bd.g_sites);
    if (!res.u.has_trace()) res.u.trace = bd.g_sites;

    // Direct attempt from the initial guess.
    NewtonLog log;
    ScalarField u_try = res.u;
    if (newton_stage(u_try, H, opts, 1.0, log)) {
        res.u = u_try;
        res.log = log;
        res.log.converged = true;
        res.log.total_iters = static_cast<int>(res.log.iters.size());
        res.converged = true;
        return res;
    }

    // Continuation in t*H from the minimal surface (t = 0).
    NewtonLog clog;
    clog.quad_kappa = log.quad_kappa;
    ScalarField u_cont = harmonic_extension(H.grid, bd.g_sites);
    {
        const ScalarField H0 = scaled_H(H, 0.0);
        if (!newton_stage(u_cont, H0, opts, 0.0, clog)) {
            res.log = clog;
            res.log.failed_stage = 0;
            res.log.best_rms = clog.iters.empty() ? 0 : clog.iters.back().rms;
            return res;
        }
    }
    for (std::size_t stage = 0; stage < opts.continuation.size(); ++stage) {
        const double t = opts.continuation[stage];
        clog.converged = false;
        const ScalarField Ht = scaled_H(H, t);
        if (!newton_stage(u_cont, Ht, opts, t, clog)) {
            res.log = clog;
            res.log.failed_stage = static_cast<int>(stage) + 1;
            res.log.best_rms = clog.iters.empty() ? 0 : clog.iters.back().rms;
            res.u = u_cont;
            return res;
        }
    }
    res.u = u_cont;
    res.log = clog;
    res.log.converged = true;
    res.log.total_iters = static_cast<int>(res.log.iters.size());
    res.converged = true;
    return res;
}

} // namespace mcvar
