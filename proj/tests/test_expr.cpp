#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "mcvar/expr.hpp"

using namespace mcvar;

namespace {
double ev(const std::string& s, double x, double y) {
    return Expr::parse(s).eval(EvalPoint::of_xy(x, y));
}
} // namespace

TEST_CASE("literals and grammar basics") {
    CHECK(ev("0", 0, 0) == 0.0);
    CHECK(ev("0.1*(x^2 - y^2)", 2, 1) == doctest::Approx(0.1 * 3).epsilon(1e-15));
    CHECK(ev("sin(pi*x)*sin(pi*y)", 0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ev("x+y", 1, 2) == 3.0);
}

TEST_CASE("power is right-associative and binds above unary minus") {
    CHECK(ev("2^3^2", 0, 0) == 512.0);
    CHECK(ev("-2^2", 0, 0) == -4.0);
    CHECK(ev("2^-2", 0, 0) == 0.25);
    CHECK(ev("-x^2", 3, 0) == -9.0);
}

TEST_CASE("errors carry byte offsets") {
    CHECK_THROWS_AS(Expr::parse(""), ExprError);
    CHECK_THROWS_AS(Expr::parse("sin(x"), ExprError);
    CHECK_THROWS_AS(Expr::parse("foo+1"), ExprError);
    try {
        Expr::parse("x + bar");
        CHECK(false);
    } catch (const ExprError& e) {
        CHECK(e.offset == 4);
    }
    // domain errors are reported, never silent NaN
    CHECK_THROWS_AS(Expr::parse("sqrt(x)").eval(EvalPoint::of_x(-1)), ExprError);
    CHECK_THROWS_AS(Expr::parse("1/x").eval(EvalPoint::of_x(0)), ExprError);
    CHECK_THROWS_AS(Expr::parse("x+t").eval(EvalPoint::of_x(1)), ExprError);
}

namespace {

// random expression trees of depth <= 6 for the round-trip property
struct TreeGen {
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> unif{-3.0, 3.0};

    std::string gen(int depth) {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
        switch (pick(rng)) {
            case 0: {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.3f", unif(rng));
                return buf;
            }
            case 1: return "x";
            case 2: return "y";
            case 3: return "(" + gen(depth - 1) + "+" + gen(depth - 1) + ")";
            case 4: return "(" + gen(depth - 1) + "-" + gen(depth - 1) + ")";
            case 5: return "(" + gen(depth - 1) + "*" + gen(depth - 1) + ")";
            case 6: return "(" + gen(depth - 1) + "/" + gen(depth - 1) + ")";
            case 7: return "sin(" + gen(depth - 1) + ")";
            case 8: return "cos(" + gen(depth - 1) + ")";
            default: return "-(" + gen(depth - 1) + ")";
        }
    }
};

} // namespace

TEST_CASE("print/parse round-trip is structurally identical and bit-exact") {
    TreeGen gen{std::mt19937_64{20240811}};
    std::uniform_real_distribution<double> pt(-2.0, 2.0);
    int checked = 0;
    while (checked < 1000) {
        const std::string text = gen.gen(6);
        Expr e;
        double v;
        const EvalPoint p = EvalPoint::of_xy(pt(gen.rng), pt(gen.rng));
        try {
            e = Expr::parse(text);
            v = e.eval(p);
        } catch (const ExprError&) {
            continue; // division by zero etc. in the random tree
        }
        const Expr round = Expr::parse(e.str());
        REQUIRE(round.structurally_equal(e));
        const double v2 = round.eval(p);
        REQUIRE(std::memcmp(&v, &v2, sizeof v) == 0);
        ++checked;
    }
}

TEST_CASE("precedence property on random values") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    const Expr lhs = Expr::parse("x+y*r");
    const Expr rhs = Expr::parse("x+(y*r)");
    for (int k = 0; k < 100; ++k) {
        EvalPoint p = EvalPoint::of_xy(unif(rng), unif(rng));
        p.with_r(unif(rng));
        CHECK(lhs.eval(p) == rhs.eval(p));
    }
}
