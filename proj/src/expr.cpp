#include "mcvar/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>

namespace mcvar {

namespace {

const char* fn_name(int fn) {
    static const char* names[] = {"sin", "cos", "exp", "sqrt", "abs", "tanh"};
    return names[fn];
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // %.17g round-trips doubles exactly, so reparsing reproduces the bits.
    return buf;
}

int prec_of(char op) {
    switch (op) {
        case '+':
        case '-': return 1;
        case '*':
        case '/': return 2;
        case '^': return 4;
        default: return 0;
    }
}

} // namespace

class ExprParser {
  public:
    explicit ExprParser(const std::string& text) : text_(text) {}

    Expr run() {
        if (text_.empty()) throw ExprError("empty expression", 0);
        Expr e;
        e.root_ = parse_expr(e);
        skip_ws();
        if (pos_ != text_.size())
            throw ExprError("unexpected trailing input", pos_);
        return e;
    }

  private:
    using Node = Expr::Node;
    using Kind = Expr::Kind;
    using Fn = Expr::Fn;

    const std::string& text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw ExprError(std::string("expected '") + c + "'", pos_);
    }

    int add(Expr& e, Node n) {
        e.nodes_.push_back(n);
        return static_cast<int>(e.nodes_.size()) - 1;
    }

    // expr := term { (+|-) term }
    int parse_expr(Expr& e) {
        int lhs = parse_term(e);
        for (;;) {
            skip_ws();
            if (pos_ >= text_.size()) return lhs;
            char op = text_[pos_];
            if (op != '+' && op != '-') return lhs;
            std::size_t at = pos_++;
            int rhs = parse_term(e);
            Node n;
            n.kind = Kind::Binary;
            n.op = op;
            n.a = lhs;
            n.b = rhs;
            n.pos = at;
            lhs = add(e, n);
        }
    }

    // term := factor { (*|/) factor }
    int parse_term(Expr& e) {
        int lhs = parse_factor(e);
        for (;;) {
            skip_ws();
            if (pos_ >= text_.size()) return lhs;
            char op = text_[pos_];
            if (op != '*' && op != '/') return lhs;
            std::size_t at = pos_++;
            int rhs = parse_factor(e);
            Node n;
            n.kind = Kind::Binary;
            n.op = op;
            n.a = lhs;
            n.b = rhs;
            n.pos = at;
            lhs = add(e, n);
        }
    }

    // factor := '-' factor | power      (unary minus binds below ^)
    int parse_factor(Expr& e) {
        skip_ws();
        std::size_t at = pos_;
        if (accept('-')) {
            int a = parse_factor(e);
            Node n;
            n.kind = Kind::Unary;
            n.op = '-';
            n.a = a;
            n.pos = at;
            return add(e, n);
        }
        return parse_power(e);
    }

    // power := atom [ '^' factor ]      (right-associative, signed exponents allowed)
    int parse_power(Expr& e) {
        int lhs = parse_atom(e);
        skip_ws();
        std::size_t at = pos_;
        if (accept('^')) {
            int rhs = parse_factor(e);
            Node n;
            n.kind = Kind::Binary;
            n.op = '^';
            n.a = lhs;
            n.b = rhs;
            n.pos = at;
            return add(e, n);
        }
        return lhs;
    }

    int parse_atom(Expr& e) {
        skip_ws();
        if (pos_ >= text_.size()) throw ExprError("unexpected end of expression", pos_);
        std::size_t at = pos_;
        char c = text_[pos_];

        if (c == '(') {
            ++pos_;
            int inner = parse_expr(e);
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* start = text_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(start, &end);
            if (end == start) throw ExprError("malformed number", at);
            pos_ += static_cast<std::size_t>(end - start);
            Node n;
            n.kind = Kind::Number;
            n.value = v;
            n.pos = at;
            return add(e, n);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            std::string id = text_.substr(pos_, end - pos_);
            pos_ = end;

            if (peek('(')) {
                static const char* fns[] = {"sin", "cos", "exp", "sqrt", "abs", "tanh"};
                int fn = -1;
                for (int i = 0; i < 6; ++i)
                    if (id == fns[i]) fn = i;
                if (fn < 0) throw ExprError("unknown function '" + id + "'", at);
                expect('(');
                int arg = parse_expr(e);
                expect(')');
                Node n;
                n.kind = Kind::Call;
                n.fn = static_cast<Fn>(fn);
                n.a = arg;
                n.pos = at;
                return add(e, n);
            }
            if (id == "pi") {
                Node n;
                n.kind = Kind::Number;
                n.value = M_PI;
                n.pos = at;
                return add(e, n);
            }
            if (id == "x" || id == "y" || id == "r" || id == "t") {
                Node n;
                n.kind = Kind::Var;
                n.op = id[0];
                n.pos = at;
                return add(e, n);
            }
            throw ExprError("unknown identifier '" + id + "'", at);
        }
        throw ExprError("unexpected character", at);
    }
};

Expr Expr::parse(const std::string& text) { return ExprParser(text).run(); }

double Expr::eval(const EvalPoint& p) const {
    if (root_ < 0) throw ExprError("empty expression", 0);
    return eval_node(root_, p);
}

double Expr::eval_node(int idx, const EvalPoint& p) const {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.kind) {
        case Kind::Number: return n.value;
        case Kind::Var: {
            switch (n.op) {
                case 'x':
                    if (!p.has_x) throw ExprError("variable 'x' not bound", n.pos);
                    return p.x;
                case 'y':
                    if (!p.has_y) throw ExprError("variable 'y' not bound", n.pos);
                    return p.y;
                case 'r':
                    if (!p.has_r) throw ExprError("variable 'r' not bound", n.pos);
                    return p.r;
                default:
                    if (!p.has_t) throw ExprError("variable 't' not bound", n.pos);
                    return p.t;
            }
        }
        case Kind::Unary: return -eval_node(n.a, p);
        case Kind::Binary: {
            double a = eval_node(n.a, p);
            double b = eval_node(n.b, p);
            double v = 0;
            switch (n.op) {
                case '+': v = a + b; break;
                case '-': v = a - b; break;
                case '*': v = a * b; break;
                case '/':
                    if (b == 0.0) throw ExprError("division by zero", n.pos);
                    v = a / b;
                    break;
                case '^': v = std::pow(a, b); break;
            }
            if (!std::isfinite(v)) throw ExprError("non-finite result", n.pos);
            return v;
        }
        case Kind::Call: {
            double a = eval_node(n.a, p);
            double v = 0;
            switch (n.fn) {
                case Fn::Sin: v = std::sin(a); break;
                case Fn::Cos: v = std::cos(a); break;
                case Fn::Exp: v = std::exp(a); break;
                case Fn::Sqrt:
                    if (a < 0.0) throw ExprError("sqrt of negative value", n.pos);
                    v = std::sqrt(a);
                    break;
                case Fn::Abs: v = std::fabs(a); break;
                case Fn::Tanh: v = std::tanh(a); break;
            }
            if (!std::isfinite(v)) throw ExprError("non-finite result", n.pos);
            return v;
        }
    }
    return 0; // unreachable
}

std::string Expr::str() const {
    std::string out;
    if (root_ >= 0) print_node(root_, 0, false, out);
    return out;
}

void Expr::print_node(int idx, int parent_prec, bool right_child, std::string& out) const {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.kind) {
        case Kind::Number: out += fmt_double(n.value); return;
        case Kind::Var: out += n.op; return;
        case Kind::Unary: {
            // unary minus sits between */ and ^
            bool paren = parent_prec > 3 || (parent_prec == 2 && right_child) ||
                         (parent_prec == 1 && right_child);
            if (paren) out += '(';
            out += '-';
            print_node(n.a, 3, true, out);
            if (paren) out += ')';
            return;
        }
        case Kind::Binary: {
            int prec = prec_of(n.op);
            bool paren = prec < parent_prec ||
                         (prec == parent_prec && right_child && n.op != '^') ||
                         (n.op == '^' && parent_prec == 4 && !right_child);
            if (paren) out += '(';
            print_node(n.a, prec, false, out);
            out += n.op;
            print_node(n.b, prec, true, out);
            if (paren) out += ')';
            return;
        }
        case Kind::Call: {
            out += fn_name(static_cast<int>(n.fn));
            out += '(';
            print_node(n.a, 0, false, out);
            out += ')';
            return;
        }
    }
}

bool Expr::structurally_equal(const Expr& other) const {
    struct Cmp {
        const std::vector<Node>&a, &b;
        bool eq(int i, int j) const {
            if ((i < 0) != (j < 0)) return false;
            if (i < 0) return true;
            const Node& m = a[static_cast<std::size_t>(i)];
            const Node& n = b[static_cast<std::size_t>(j)];
            if (m.kind != n.kind) return false;
            switch (m.kind) {
                case Kind::Number: return std::memcmp(&m.value, &n.value, sizeof(double)) == 0;
                case Kind::Var: return m.op == n.op;
                case Kind::Unary: return eq(m.a, n.a);
                case Kind::Binary: return m.op == n.op && eq(m.a, n.a) && eq(m.b, n.b);
                case Kind::Call: return m.fn == n.fn && eq(m.a, n.a);
            }
            return false;
        }
    };
    return Cmp{nodes_, other.nodes_}.eq(root_, other.root_);
}

} // namespace mcvar
