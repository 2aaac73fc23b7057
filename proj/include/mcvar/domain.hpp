#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace mcvar {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The computational domain: an interval (n=1), an axis-aligned rectangle or
// a disk (n=2).
struct DomainSpec {
    enum class Kind { Interval, Rectangle, Disk };

    Kind kind = Kind::Rectangle;
    // interval: [a, b] on extents[0..1]; rectangle: [ax,bx]x[ay,by]
    std::array<double, 4> extents{0, 1, 0, 1};
    double cx = 0, cy = 0, radius = 1; // disk

    static DomainSpec interval(double a, double b);
    static DomainSpec rectangle(double ax, double bx, double ay, double by);
    static DomainSpec unit_square() { return rectangle(0, 1, 0, 1); }
    static DomainSpec disk(double cx, double cy, double R);

    int dimension() const { return kind == Kind::Interval ? 1 : 2; }
    double diameter() const;
    std::string kind_name() const;

    // Signed distance to the boundary, negative inside.
    double signed_distance(double x, double y) const;
};

// |B_1| in R^n, n in {1,2}.
double ball_volume(int n);

// |Omega|, exact.
double domain_volume(const DomainSpec& spec);

// Mean curvature of the boundary with respect to the inner unit normal,
// at a point on the boundary (within 1e-10 * diameter). Disk: 1/R.
// Rectangle: 0 on open edges, rejects corners. Interval endpoints are
// handled by convention upstream (the n=1 admissibility rule).
double boundary_mean_curvature(const DomainSpec& spec, double x, double y = 0.0);

} // namespace mcvar
