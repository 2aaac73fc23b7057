#include "mcvar/domain.hpp"

#include <algorithm>
#include <cmath>

namespace mcvar {

DomainSpec DomainSpec::interval(double a, double b) {
    if (!(b > a)) throw DomainError("interval requires b > a");
    DomainSpec s;
    s.kind = Kind::Interval;
    s.extents = {a, b, 0, 0};
    return s;
}

DomainSpec DomainSpec::rectangle(double ax, double bx, double ay, double by) {
    if (!(bx > ax) || !(by > ay)) throw DomainError("rectangle requires bx > ax and by > ay");
    DomainSpec s;
    s.kind = Kind::Rectangle;
    s.extents = {ax, bx, ay, by};
    return s;
}

DomainSpec DomainSpec::disk(double cx, double cy, double R) {
    if (!(R > 0)) throw DomainError("disk requires R > 0");
    DomainSpec s;
    s.kind = Kind::Disk;
    s.cx = cx;
    s.cy = cy;
    s.radius = R;
    return s;
}

double DomainSpec::diameter() const {
    switch (kind) {
        case Kind::Interval: return extents[1] - extents[0];
        case Kind::Rectangle:
            return std::hypot(extents[1] - extents[0], extents[3] - extents[2]);
        case Kind::Disk: return 2 * radius;
    }
    return 0;
}

std::string DomainSpec::kind_name() const {
    switch (kind) {
        case Kind::Interval: return "interval";
        case Kind::Rectangle: return "rectangle";
        case Kind::Disk: return "disk";
    }
    return "?";
}

double DomainSpec::signed_distance(double x, double y) const {
    switch (kind) {
        case Kind::Interval: return std::max(extents[0] - x, x - extents[1]);
        case Kind::Rectangle: {
            double dx = std::max(extents[0] - x, x - extents[1]);
            double dy = std::max(extents[2] - y, y - extents[3]);
            return std::max(dx, dy);
        }
        case Kind::Disk: return std::hypot(x - cx, y - cy) - radius;
    }
    return 0;
}

double ball_volume(int n) {
    if (n == 1) return 2.0;
    if (n == 2) return M_PI;
    throw DomainError("ball_volume: unsupported dimension " + std::to_string(n));
}

double domain_volume(const DomainSpec& spec) {
    switch (spec.kind) {
        case DomainSpec::Kind::Interval: return spec.extents[1] - spec.extents[0];
        case DomainSpec::Kind::Rectangle:
            return (spec.extents[1] - spec.extents[0]) * (spec.extents[3] - spec.extents[2]);
        case DomainSpec::Kind::Disk: return M_PI * spec.radius * spec.radius;
    }
    return 0;
}

double boundary_mean_curvature(const DomainSpec& spec, double x, double y) {
    const double tol = 1e-10 * spec.diameter();
    switch (spec.kind) {
        case DomainSpec::Kind::Interval: {
            if (std::fabs(x - spec.extents[0]) > tol && std::fabs(x - spec.extents[1]) > tol)
                throw DomainError("point is not on the interval boundary");
            // (n-1)/n vanishes for n=1, so the value is never used; return 0.
            return 0.0;
        }
        case DomainSpec::Kind::Rectangle: {
            bool on_x = std::fabs(x - spec.extents[0]) <= tol || std::fabs(x - spec.extents[1]) <= tol;
            bool on_y = std::fabs(y - spec.extents[2]) <= tol || std::fabs(y - spec.extents[3]) <= tol;
            bool in_x = x >= spec.extents[0] - tol && x <= spec.extents[1] + tol;
            bool in_y = y >= spec.extents[2] - tol && y <= spec.extents[3] + tol;
            if (!((on_x && in_y) || (on_y && in_x)))
                throw DomainError("point is not on the rectangle boundary");
            if (on_x && on_y)
                throw DomainError("boundary mean curvature is undefined at rectangle corners");
            return 0.0; // flat edges
        }
        case DomainSpec::Kind::Disk: {
            double d = std::fabs(std::hypot(x - spec.cx, y - spec.cy) - spec.radius);
            if (d > tol) throw DomainError("point is not on the disk boundary");
            return 1.0 / spec.radius;
        }
    }
    return 0;
}

} // namespace mcvar
