#include <doctest.h>

#include <cmath>

#include "mcvar/field.hpp"

using namespace mcvar;

TEST_CASE("ball and domain volumes") {
    CHECK(ball_volume(1) == 2.0);
    CHECK(ball_volume(2) == doctest::Approx(M_PI).epsilon(1e-16));
    CHECK_THROWS_AS(ball_volume(3), DomainError);

    CHECK(domain_volume(DomainSpec::unit_square()) == 1.0);
    CHECK(domain_volume(DomainSpec::disk(0, 0, 1)) == doctest::Approx(M_PI));
    CHECK(domain_volume(DomainSpec::interval(0, 3)) == 3.0);
}

TEST_CASE("boundary mean curvature w.r.t. the inner normal") {
    CHECK(boundary_mean_curvature(DomainSpec::disk(0, 0, 2), 2, 0) == doctest::Approx(0.5));
    CHECK(boundary_mean_curvature(DomainSpec::disk(0, 0, 1), 1, 0) == doctest::Approx(1.0));
    CHECK(boundary_mean_curvature(DomainSpec::unit_square(), 0.5, 0) == 0.0);
    CHECK_THROWS_AS(boundary_mean_curvature(DomainSpec::unit_square(), 0, 0), DomainError);
    CHECK_THROWS_AS(boundary_mean_curvature(DomainSpec::disk(0, 0, 1), 0.5, 0), DomainError);
}

TEST_CASE("rectangle grid construction") {
    const Grid g = build_grid(DomainSpec::unit_square(), 5);
    CHECK(g.num_nodes() == 25);
    CHECK(g.hx == doctest::Approx(0.25));
    CHECK(g.hy == doctest::Approx(0.25));
    CHECK(g.num_interior() == 9);
    double wsum = 0;
    for (double w : g.weight) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
    double dsum = 0;
    for (const auto& s : g.sites) dsum += s.ds;
    CHECK(dsum == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("interval grid construction") {
    const Grid g = build_grid(DomainSpec::interval(0, 1), 11);
    CHECK(g.num_nodes() == 11);
    CHECK(g.num_sites() == 2);
    CHECK(g.num_interior() == 9);
    double wsum = 0;
    for (double w : g.weight) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(build_grid(DomainSpec::interval(0, 1), 3), DomainError);
}

TEST_CASE("disk grid: weights approximate the area, sites lie on the circle") {
    const DomainSpec disk = DomainSpec::disk(0, 0, 1);
    const Grid g = build_grid(disk, 65);
    double wsum = 0;
    for (double w : g.weight) wsum += w;
    CHECK(std::fabs(wsum - M_PI) / M_PI < 0.01); // within 1% of pi

    for (const auto& s : g.sites) {
        const double r = std::hypot(s.x, s.y);
        CHECK(std::fabs(r - 1.0) <= 1e-12);
    }
    double dsum = 0;
    for (const auto& s : g.sites) dsum += s.ds;
    CHECK(dsum == doctest::Approx(2 * M_PI).epsilon(1e-12));

    // every interior node has usable arms in each direction
    for (int q = 0; q < g.num_interior(); ++q)
        for (int dir = 0; dir < 4; ++dir) {
            const Arm& a = g.arm(q, dir);
            CHECK(a.theta > 0);
            CHECK(a.theta <= 1.0);
            CHECK((a.nbr >= 0 || a.site >= 0));
        }
}

TEST_CASE("refinement m -> 2m-1 halves h and preserves classification") {
    const DomainSpec disk = DomainSpec::disk(0, 0, 1);
    const Grid g1 = build_grid(disk, 33);
    const Grid g2 = build_grid(disk, 65);
    CHECK(g2.hx == g1.hx / 2); // exact binary halving
    for (int j = 0; j < g1.ny; ++j)
        for (int i = 0; i < g1.nx; ++i)
            CHECK(g1.cls[g1.lat(i, j)] == g2.cls[g2.lat(2 * i, 2 * j)]);
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(DomainSpec::interval(1, 1), DomainError);
    CHECK_THROWS_AS(DomainSpec::rectangle(0, 1, 1, 0), DomainError);
    CHECK_THROWS_AS(DomainSpec::disk(0, 0, 0), DomainError);
}
