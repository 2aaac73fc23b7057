#include <doctest.h>

#include <cmath>
#include <random>

#include "mcvar/calculus.hpp"
#include "mcvar/elliptic.hpp"
#include "mcvar/random_fields.hpp"

using namespace mcvar;

namespace {

std::pair<double, double> sym_eigs(const std::array<double, 3>& a) {
    const double mid = (a[0] + a[2]) / 2;
    const double rad = std::sqrt((a[0] - a[2]) * (a[0] - a[2]) / 4 + a[1] * a[1]);
    return {mid - rad, mid + rad};
}

double max_abs_diff(const Eigen::SparseMatrix<double>& A, const Eigen::SparseMatrix<double>& B) {
    Eigen::SparseMatrix<double> D = A - B;
    double m = 0;
    for (int k = 0; k < D.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(D, k); it; ++it)
            m = std::max(m, std::fabs(it.value()));
    return m;
}

} // namespace

TEST_CASE("coefficients: flat surface gives unit coefficient, affine gives constants") {
    const GridPtr g = make_grid(DomainSpec::unit_square(), 9);
    const ScalarField zero = ScalarField::sample(g, [](double, double) { return 0.0; });

    const CoefficientField cs = build_coefficient(zero, CoefMode::Scalar);
    for (double c : cs.c) CHECK(c == doctest::Approx(1.0).epsilon(1e-15));

    const CoefficientField ct = build_coefficient(zero, CoefMode::Tensor);
    for (const auto& a : ct.a) {
        CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(a[1] == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(a[2] == doctest::Approx(1.0).epsilon(1e-15));
    }

    const ScalarField v34 =
        ScalarField::sample(g, [](double x, double y) { return 3 * x + 4 * y; });
    for (double c : build_coefficient(v34, CoefMode::Scalar).c)
        CHECK(c == doctest::Approx(std::sqrt(26.0)).epsilon(1e-14));
}

TEST_CASE("tensor eigenvalues are {1/D, D}: v = x gives {1/sqrt2, sqrt2}") {
    const GridPtr g = make_grid(DomainSpec::unit_square(), 9);
    const ScalarField vx = ScalarField::sample(g, [](double x, double) { return x; });
    const CoefficientField ct = build_coefficient(vx, CoefMode::Tensor);
    const double s2 = std::sqrt(2.0);
    for (const auto& a : ct.a) {
        const auto [lo, hi] = sym_eigs(a);
        CHECK(lo == doctest::Approx(1 / s2).epsilon(1e-13));
        CHECK(hi == doctest::Approx(s2).epsilon(1e-13));
    }
}

TEST_CASE("scalar coefficient is at least 1 and tensor is coercive on random fields") {
    std::mt19937_64 rng(5);
    const GridPtr g = make_grid(DomainSpec::disk(0, 0, 1), 17);
    for (int rep = 0; rep < 10; ++rep) {
        const ScalarField v = random_smooth_field(g, rng, 2.0);
        const CoefficientField cs = build_coefficient(v, CoefMode::Scalar);
        for (double c : cs.c) REQUIRE(c >= 1.0);

        const CoefficientField ct = build_coefficient(v, CoefMode::Tensor);
        std::uniform_real_distribution<double> unif(-1, 1);
        for (std::size_t f = 0; f < ct.a.size(); ++f) {
            const double D = cs.c[f];
            const auto [lo, hi] = sym_eigs(ct.a[f]);
            REQUIRE(lo >= 1 / D - 1e-12);
            REQUIRE(hi <= D + 1e-12);
            const double x1 = unif(rng), x2 = unif(rng);
            const double q = ct.a[f][0] * x1 * x1 + 2 * ct.a[f][1] * x1 * x2 +
                             ct.a[f][2] * x2 * x2;
            REQUIRE(q >= (x1 * x1 + x2 * x2) / D - 1e-12);
        }
    }
}

TEST_CASE("assemble: textbook five-point stencil for c = 1") {
    const GridPtr g = make_grid(DomainSpec::unit_square(), 5); // 3x3 interior, h = 1/4
    const double h2 = 16.0;
    CoefficientField coef;
    coef.mode = CoefMode::Scalar;
    coef.c.assign(g->faces.size(), 1.0);
    std::vector<double> trace(static_cast<std::size_t>(g->num_sites()), 0.0);
    const LinearSystem sys = assemble(coef, *g, trace);
    CHECK(sys.A.rows() == 9);
    for (int k = 0; k < sys.A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, k); it; ++it) {
            if (it.row() == it.col())
                CHECK(it.value() == doctest::Approx(4 * h2).epsilon(1e-15));
            else
                CHECK(it.value() == doctest::Approx(-h2).epsilon(1e-15));
        }
}

TEST_CASE("assembled matrices are symmetric to the last bit") {
    std::mt19937_64 rng(11);
    for (const DomainSpec& spec : {DomainSpec::unit_square(), DomainSpec::disk(0, 0, 1)}) {
        const GridPtr g = make_grid(spec, 17);
        const ScalarField v = random_smooth_field(g, rng, 1.5);
        std::vector<double> trace(static_cast<std::size_t>(g->num_sites()), 0.0);
        for (CoefMode mode : {CoefMode::Scalar, CoefMode::Tensor}) {
            const LinearSystem sys = assemble(build_coefficient(v, mode), *g, trace);
            Eigen::SparseMatrix<double> At = sys.A.transpose();
            CHECK(max_abs_diff(sys.A, At) == 0.0);
        }
    }
}

TEST_CASE("tensor identity assembles the same system as scalar unity") {
    const GridPtr g = make_grid(DomainSpec::disk(0, 0, 1), 17);
    CoefficientField cs, ct;
    cs.mode = CoefMode::Scalar;
    cs.c.assign(g->faces.size(), 1.0);
    ct.mode = CoefMode::Tensor;
    ct.a.assign(g->faces.size(), {1.0, 0.0, 1.0});
    ct.cell_cross.assign(g->cells.size(), 0.0);
    std::vector<double> trace(static_cast<std::size_t>(g->num_sites()), 0.3);
    const LinearSystem s1 = assemble(cs, *g, trace);
    const LinearSystem s2 = assemble(ct, *g, trace);
    CHECK(max_abs_diff(s1.A, s2.A) == 0.0);
    CHECK((s1.b - s2.b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("curvature step reproduces linear traces exactly") {
    const GridPtr g = make_grid(DomainSpec::unit_square(), 17);
    const BoundaryData bd = BoundaryData::from_text(*g, "0", "x");

    // harmonic extension of a linear is itself; constant coefficients divide out
    for (const char* vtxt : {"0", "0.6*x", "3*x+4*y"}) {
        const ScalarField v = ScalarField::sample(g, [&](double x, double y) {
            return Expr::parse(vtxt).eval(EvalPoint::of_xy(x, y));
        });
        for (CoefMode mode : {CoefMode::Scalar, CoefMode::Tensor}) {
            const ScalarField H = curvature_step(v, bd, mode);
            for (int q = 0; q < g->num_interior(); ++q) {
                const int l = g->lattice_of[g->compact_of_int[q]];
                REQUIRE(H.values[static_cast<std::size_t>(g->compact_of_int[q])] ==
                        doctest::Approx(g->x_of_lat(l)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("zero trace gives the zero solution for any coefficient surface") {
    std::mt19937_64 rng(3);
    const GridPtr g = make_grid(DomainSpec::disk(0, 0, 1), 17);
    const ScalarField v = random_smooth_field(g, rng, 2.0);
    const BoundaryData bd = BoundaryData::from_text(*g, "0", "0");
    for (CoefMode mode : {CoefMode::Scalar, CoefMode::Tensor}) {
        const ScalarField H = curvature_step(v, bd, mode);
        for (double val : H.values) REQUIRE(std::fabs(val) <= 1e-12);
    }
}

TEST_CASE("discrete harmonicity: trace x^2 - y^2 is reproduced exactly on the square") {
    const GridPtr g = make_grid(DomainSpec::unit_square(), 17);
    // oracle: the 5-point Laplacian of x^2 - y^2 vanishes identically
    {
        const double h = g->hx;
        auto f = [](double x, double y) { return x * x - y * y; };
        const double lap = (f(0.5 + h, 0.5) + f(0.5 - h, 0.5) + f(0.5, 0.5 + h) +
                            f(0.5, 0.5 - h) - 4 * f(0.5, 0.5));
        REQUIRE(std::fabs(lap) <= 1e-15);
    }
    const ScalarField zero = ScalarField::sample(g, [](double, double) { return 0.0; });
    const BoundaryData bd = BoundaryData::from_text(*g, "0", "x^2-y^2");
    const ScalarField H = curvature_step(zero, bd, CoefMode::Scalar);
    for (int q = 0; q < g->num_interior(); ++q) {
        const int l = g->lattice_of[g->compact_of_int[q]];
        const double x = g->x_of_lat(l), y = g->y_of_lat(l);
        REQUIRE(H.values[static_cast<std::size_t>(g->compact_of_int[q])] ==
                doctest::Approx(x * x - y * y).epsilon(1e-10));
    }
}

TEST_CASE("disk harmonic extension: sin t is exact (linear), sin 3t is second order") {
    auto err = [](int m, const char* htxt, auto exact) {
        const GridPtr g = make_grid(DomainSpec::disk(0, 0, 1), m);
        const ScalarField zero = ScalarField::sample(g, [](double, double) { return 0.0; });
        const BoundaryData bd = BoundaryData::from_text(*g, "0", htxt);
        const ScalarField H = curvature_step(zero, bd, CoefMode::Scalar);
        double e = 0;
        for (int q = 0; q < g->num_interior(); ++q) {
            const int l = g->lattice_of[g->compact_of_int[q]];
            e = std::max(e, std::fabs(H.values[static_cast<std::size_t>(g->compact_of_int[q])] -
                                      exact(g->x_of_lat(l), g->y_of_lat(l))));
        }
        return e;
    };
    // r sin(theta) = y: linear, reproduced to roundoff
    CHECK(err(33, "sin(t)", [](double, double y) { return y; }) <= 1e-12);
    // r^3 sin(3 theta) = 3x^2 y - y^3: genuine second-order case
    auto cubic = [](double x, double y) { return 3 * x * x * y - y * y * y; };
    const double e1 = err(33, "sin(3*t)", cubic);
    const double e2 = err(65, "sin(3*t)", cubic);
    const double e3 = err(129, "sin(3*t)", cubic);
    CHECK(std::log2(e1 / e2) >= 1.5);
    CHECK(std::log2(e2 / e3) >= 1.5);
    CHECK(e3 <= 5e-4);
}

TEST_CASE("square harmonic MMS converges at second order") {
    // H* = sin(pi x) sinh(pi y) / sinh(pi) is harmonic with its own trace
    auto exact = [](double x, double y) {
        return std::sin(M_PI * x) * std::sinh(M_PI * y) / std::sinh(M_PI);
    };
    auto err = [&](int m) {
        const GridPtr g = make_grid(DomainSpec::unit_square(), m);
        const ScalarField zero = ScalarField::sample(g, [](double, double) { return 0.0; });
        BoundaryData bd = BoundaryData::from_text(*g, "0", "0");
        for (int s = 0; s < g->num_sites(); ++s)
            bd.h_sites[static_cast<std::size_t>(s)] = exact(g->sites[s].x, g->sites[s].y);
        const ScalarField H = curvature_step(zero, bd, CoefMode::Scalar);
        double e = 0;
        for (int q = 0; q < g->num_interior(); ++q) {
            const int l = g->lattice_of[g->compact_of_int[q]];
            e = std::max(e, std::fabs(H.values[static_cast<std::size_t>(g->compact_of_int[q])] -
                                      exact(g->x_of_lat(l), g->y_of_lat(l))));
        }
        return e;
    };
    const double e1 = err(65), e2 = err(129);
    CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("variable-coefficient refinement against a nested reference") {
    // smooth fixed surface; reference solution on a four-times-finer grid
    auto vfun = [](double x, double y) {
        return 0.5 * std::sin(2 * x + 0.3) * std::cos(1.5 * y) + 0.2 * x;
    };
    auto solve_at = [&](int m, CoefMode mode) {
        const GridPtr g = make_grid(DomainSpec::unit_square(), m);
        const ScalarField v = ScalarField::sample(g, vfun);
        const BoundaryData bd = BoundaryData::from_text(*g, "0", "sin(2*x)+cos(3*y)");
        return std::pair{g, curvature_step(v, bd, mode)};
    };
    for (CoefMode mode : {CoefMode::Scalar, CoefMode::Tensor}) {
        const auto [gref, Href] = solve_at(257, mode);
        double errs[2];
        int idx = 0;
        for (int m : {33, 65}) {
            const auto [g, H] = solve_at(m, mode);
            const int stride = (gref->nx - 1) / (g->nx - 1);
            double e = 0;
            for (int q = 0; q < g->num_interior(); ++q) {
                const int l = g->lattice_of[g->compact_of_int[q]];
                const int i = l % g->nx, j = l / g->nx;
                const int cref = gref->compact_of[gref->lat(i * stride, j * stride)];
                e = std::max(e, std::fabs(
                                    H.values[static_cast<std::size_t>(g->compact_of_int[q])] -
                                    Href.values[static_cast<std::size_t>(cref)]));
            }
            errs[idx++] = e;
        }
        CHECK(std::log2(errs[0] / errs[1]) >= 1.8);
    }
}

TEST_CASE("discrete maximum principle in scalar mode") {
    std::mt19937_64 rng(17);
    for (const DomainSpec& spec : {DomainSpec::unit_square(), DomainSpec::disk(0, 0, 1)}) {
        const GridPtr g = make_grid(spec, 33);
        for (int rep = 0; rep < 10; ++rep) {
            const ScalarField v = random_smooth_field(g, rng, 2.0);
            std::uniform_real_distribution<double> unif(-1, 1);
            BoundaryData bd = BoundaryData::from_text(*g, "0", "0");
            const double a = unif(rng), b = unif(rng), c = unif(rng);
            for (int s = 0; s < g->num_sites(); ++s)
                bd.h_sites[static_cast<std::size_t>(s)] =
                    a + b * std::sin(3 * g->sites[s].x) + c * g->sites[s].y;
            const ScalarField H = curvature_step(v, bd, CoefMode::Scalar);
            double lo = 1e300, hi = -1e300;
            for (double t : bd.h_sites) {
                lo = std::min(lo, t);
                hi = std::max(hi, t);
            }
            for (int q = 0; q < g->num_interior(); ++q) {
                const double val = H.values[static_cast<std::size_t>(g->compact_of_int[q])];
                REQUIRE(val >= lo - 1e-12);
                REQUIRE(val <= hi + 1e-12);
            }
        }
    }
}

TEST_CASE("the elliptic solution minimizes the assembled quadratic form") {
    std::mt19937_64 rng(23);
    const GridPtr g = make_grid(DomainSpec::disk(0, 0, 1), 17);
    const ScalarField v = random_smooth_field(g, rng, 1.0);
    const BoundaryData bd = BoundaryData::from_text(*g, "0", "0.2*sin(2*t)");
    for (CoefMode mode : {CoefMode::Scalar, CoefMode::Tensor}) {
        const CoefficientField coef = build_coefficient(v, mode);
        const ScalarField H = curvature_step(v, bd, mode);
        const double E0 = discrete_form_energy(coef, *g, H);
        for (int rep = 0; rep < 100; ++rep) {
            const ScalarField delta = random_zero_trace_bump(g, rng, 1.0);
            for (double eps : {1e-3, -1e-3}) {
                const double E = discrete_form_energy(coef, *g, axpy(H, eps, delta));
                REQUIRE(E >= E0 - 1e-10);
            }
        }
    }
}

TEST_CASE("solve_linear meets the residual contract") {
    const GridPtr g = make_grid(DomainSpec::disk(0, 0, 1), 33);
    std::mt19937_64 rng(29);
    const ScalarField v = random_smooth_field(g, rng, 1.5);
    const BoundaryData bd = BoundaryData::from_text(*g, "0", "0.5*cos(3*t)");
    const LinearSystem sys = assemble(build_coefficient(v, CoefMode::Scalar), *g, bd.h_sites);
    const Eigen::VectorXd x = solve_linear(sys);
    CHECK((sys.A * x - sys.b).norm() / sys.b.norm() <= 1e-10);
}
