#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcvar {

// Error raised while parsing or evaluating a user formula. Carries the byte
// offset into the source text so the CLI can point at the problem.
struct ExprError : std::runtime_error {
    ExprError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " (at offset " + std::to_string(offset) + ")"),
          offset(offset) {}
    std::size_t offset;
};

// Coordinate bindings for evaluation. A variable used by the expression but
// not bound here is an error, never a silent NaN.
struct EvalPoint {
    double x = 0.0, y = 0.0, r = 0.0, t = 0.0;
    bool has_x = false, has_y = false, has_r = false, has_t = false;

    static EvalPoint of_x(double x) {
        EvalPoint p;
        p.x = x;
        p.has_x = true;
        return p;
    }
    static EvalPoint of_xy(double x, double y) {
        EvalPoint p = of_x(x);
        p.y = y;
        p.has_y = true;
        return p;
    }
    EvalPoint& with_r(double v) {
        r = v;
        has_r = true;
        return *this;
    }
    EvalPoint& with_t(double v) {
        t = v;
        has_t = true;
        return *this;
    }
};

// Immutable arithmetic expression over x, y, r, t with the usual operators,
// sin/cos/exp/sqrt/abs/tanh and the constant pi. Values are flat-stored AST
// nodes; an Expr is cheap to copy and safe to evaluate concurrently.
class Expr {
  public:
    Expr() = default;

    static Expr parse(const std::string& text);

    double eval(const EvalPoint& p) const;

    // Parseable text form; parse(str()) is structurally identical to *this.
    std::string str() const;

    bool structurally_equal(const Expr& other) const;
    bool empty() const { return nodes_.empty(); }

  private:
    enum class Kind : unsigned char { Number, Var, Unary, Binary, Call };
    enum class Fn : unsigned char { Sin, Cos, Exp, Sqrt, Abs, Tanh };

    struct Node {
        Kind kind;
        char op = 0;     // 'x','y','r','t' for Var; '+','-','*','/','^' for Binary; '-' for Unary
        Fn fn = Fn::Sin; // for Call
        double value = 0.0;
        int a = -1, b = -1;
        std::size_t pos = 0; // byte offset in the source, for error reports
    };

    double eval_node(int idx, const EvalPoint& p) const;
    void print_node(int idx, int parent_prec, bool right_child, std::string& out) const;

    std::vector<Node> nodes_;
    int root_ = -1;

    friend class ExprParser;
};

} // namespace mcvar
