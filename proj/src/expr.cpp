#include "fracdyn/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

namespace fracdyn::expr {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi_v<double>;
}

enum class Var { t, x };
enum class BinOp { add, sub, mul, div, pow };
enum class Fn { exp, sin, cos, abs };

struct Node {
    struct Num {
        double value;
    };
    struct VarRef {
        Var var;
    };
    struct Neg {
        Expr arg;
    };
    struct Bin {
        BinOp op;
        Expr lhs, rhs;
    };
    struct Call {
        Fn fn;
        Expr arg;
    };
    std::variant<Num, VarRef, Neg, Bin, Call> v;
};

namespace {

Expr make(Node::Num n) { return std::make_shared<Node>(Node{n}); }
Expr make(Node::VarRef n) { return std::make_shared<Node>(Node{n}); }
Expr make(Node::Neg n) { return std::make_shared<Node>(Node{std::move(n)}); }
Expr make(Node::Bin n) { return std::make_shared<Node>(Node{std::move(n)}); }
Expr make(Node::Call n) { return std::make_shared<Node>(Node{std::move(n)}); }

// ------------------------------------------------------------------ parser

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr run() {
        Expr e = expression();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected input", pos_);
        return e;
    }

private:
    Expr expression() {
        Expr e = term();
        for (;;) {
            skip_ws();
            if (accept('+')) e = make(Node::Bin{BinOp::add, e, term()});
            else if (accept('-')) e = make(Node::Bin{BinOp::sub, e, term()});
            else return e;
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            skip_ws();
            if (accept('*')) e = make(Node::Bin{BinOp::mul, e, unary()});
            else if (accept('/')) e = make(Node::Bin{BinOp::div, e, unary()});
            else return e;
        }
    }

    Expr unary() {
        skip_ws();
        if (accept('-')) return make(Node::Neg{unary()});
        return power();
    }

    Expr power() {
        Expr base = primary();
        skip_ws();
        if (accept('^')) return make(Node::Bin{BinOp::pow, base, unary()});
        return base;
    }

    Expr primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expression();
            skip_ws();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr number() {
        double value = 0.0;
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc()) throw ParseError("invalid number", pos_);
        pos_ = static_cast<std::size_t>(ptr - src_.data());
        return make(Node::Num{value});
    }

    Expr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               std::isalnum(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "t") return make(Node::VarRef{Var::t});
        if (name == "x") return make(Node::VarRef{Var::x});
        Fn fn;
        if (name == "exp") fn = Fn::exp;
        else if (name == "sin") fn = Fn::sin;
        else if (name == "cos") fn = Fn::cos;
        else if (name == "abs") fn = Fn::abs;
        else throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        skip_ws();
        if (!accept('(')) throw ParseError("expected '(' after function name", pos_);
        Expr arg = expression();
        skip_ws();
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        return make(Node::Call{fn, arg});
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

// ------------------------------------------------------------------- print

std::string format_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

Expr parse(std::string_view source) { return Parser(source).run(); }

double eval(const Expr& e, double t, double x) {
    struct V {
        double t, x;
        double operator()(const Node::Num& n) const { return n.value; }
        double operator()(const Node::VarRef& n) const { return n.var == Var::t ? t : x; }
        double operator()(const Node::Neg& n) const { return -eval(n.arg, t, x); }
        double operator()(const Node::Bin& n) const {
            const double a = eval(n.lhs, t, x);
            const double b = eval(n.rhs, t, x);
            switch (n.op) {
                case BinOp::add: return a + b;
                case BinOp::sub: return a - b;
                case BinOp::mul: return a * b;
                case BinOp::div:
                    if (b == 0.0) throw EvalError("division by zero");
                    return a / b;
                case BinOp::pow: {
                    if (a == 0.0 && b < 0.0) throw EvalError("0 raised to a negative power");
                    const double r = std::pow(a, b);
                    if (std::isnan(r))
                        throw EvalError("power with negative base and non-integer exponent");
                    return r;
                }
            }
            return 0.0;
        }
        double operator()(const Node::Call& n) const {
            const double a = eval(n.arg, t, x);
            switch (n.fn) {
                case Fn::exp: return std::exp(a);
                case Fn::sin: return std::sin(a);
                case Fn::cos: return std::cos(a);
                case Fn::abs: return std::abs(a);
            }
            return 0.0;
        }
    };
    return std::visit(V{t, x}, e->v);
}

std::string to_string(const Expr& e) {
    struct V {
        std::string operator()(const Node::Num& n) const { return format_number(n.value); }
        std::string operator()(const Node::VarRef& n) const {
            return n.var == Var::t ? "t" : "x";
        }
        std::string operator()(const Node::Neg& n) const {
            return "(-" + to_string(n.arg) + ")";
        }
        std::string operator()(const Node::Bin& n) const {
            const char* op = "+";
            switch (n.op) {
                case BinOp::add: op = "+"; break;
                case BinOp::sub: op = "-"; break;
                case BinOp::mul: op = "*"; break;
                case BinOp::div: op = "/"; break;
                case BinOp::pow: op = "^"; break;
            }
            return "(" + to_string(n.lhs) + op + to_string(n.rhs) + ")";
        }
        std::string operator()(const Node::Call& n) const {
            const char* fn = "exp";
            switch (n.fn) {
                case Fn::exp: fn = "exp"; break;
                case Fn::sin: fn = "sin"; break;
                case Fn::cos: fn = "cos"; break;
                case Fn::abs: fn = "abs"; break;
            }
            return std::string(fn) + "(" + to_string(n.arg) + ")";
        }
    };
    return std::visit(V{}, e->v);
}

// ----------------------------------------------------------------- bounds

bool Interval::finite() const { return std::isfinite(lo) && std::isfinite(hi); }

namespace {

Interval point(double v) { return {v, v}; }

double careful_mul(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;  // 0 * inf := 0, sound for set products
    return a * b;
}

Interval iadd(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval isub(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }

Interval imul(Interval a, Interval b) {
    const double c[4] = {careful_mul(a.lo, b.lo), careful_mul(a.lo, b.hi),
                         careful_mul(a.hi, b.lo), careful_mul(a.hi, b.hi)};
    Interval r{c[0], c[0]};
    for (double v : c) {
        r.lo = std::min(r.lo, v);
        r.hi = std::max(r.hi, v);
    }
    return r;
}

Interval idiv(Interval a, Interval b) {
    if (b.lo <= 0.0 && b.hi >= 0.0)
        throw BoundUnsupported("bound: divisor interval contains zero");
    return imul(a, Interval{1.0 / b.hi, 1.0 / b.lo});
}

Interval ipow(Interval base, Interval exponent) {
    if (exponent.lo != exponent.hi)
        throw BoundUnsupported("bound: only constant exponents are supported");
    const double k = exponent.lo;
    const bool integral = std::isfinite(k) && k == std::floor(k);
    if (integral && k >= 0.0) {
        const double plo = std::pow(base.lo, k), phi = std::pow(base.hi, k);
        Interval r{std::min(plo, phi), std::max(plo, phi)};
        const bool even = std::fmod(k, 2.0) == 0.0;
        if (even && base.lo < 0.0 && base.hi > 0.0) r.lo = 0.0;
        return r;
    }
    if (base.lo >= 0.0 && k >= 0.0) return {std::pow(base.lo, k), std::pow(base.hi, k)};
    if (base.lo > 0.0 && k < 0.0) return {std::pow(base.hi, k), std::pow(base.lo, k)};
    throw BoundUnsupported("bound: power outside the supported catalog");
}

Interval iexp(Interval a) { return {std::exp(a.lo), std::exp(a.hi)}; }

Interval iabs(Interval a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return {-a.hi, -a.lo};
    return {0.0, std::max(-a.lo, a.hi)};
}

// Range of sin over [lo, hi]: endpoint values plus any enclosed extrema.
Interval isin(Interval a) {
    if (!a.finite() || a.hi - a.lo >= 2.0 * kPi) return {-1.0, 1.0};
    Interval r{std::min(std::sin(a.lo), std::sin(a.hi)),
               std::max(std::sin(a.lo), std::sin(a.hi))};
    const double tau = 2.0 * kPi;
    const double kmax_hi = std::floor((a.hi - kPi / 2.0) / tau);
    if (kPi / 2.0 + kmax_hi * tau >= a.lo) r.hi = 1.0;
    const double kmax_lo = std::floor((a.hi + kPi / 2.0) / tau);
    if (-kPi / 2.0 + kmax_lo * tau >= a.lo) r.lo = -1.0;
    return r;
}

Interval icos(Interval a) {
    return isin(iadd(a, point(kPi / 2.0)));
}

}  // namespace

Interval bound(const Expr& e, Interval t_range, Interval x_range) {
    struct V {
        Interval t, x;
        Interval operator()(const Node::Num& n) const { return point(n.value); }
        Interval operator()(const Node::VarRef& n) const { return n.var == Var::t ? t : x; }
        Interval operator()(const Node::Neg& n) const {
            Interval a = bound(n.arg, t, x);
            return {-a.hi, -a.lo};
        }
        Interval operator()(const Node::Bin& n) const {
            Interval a = bound(n.lhs, t, x);
            Interval b = bound(n.rhs, t, x);
            switch (n.op) {
                case BinOp::add: return iadd(a, b);
                case BinOp::sub: return isub(a, b);
                case BinOp::mul: return imul(a, b);
                case BinOp::div: return idiv(a, b);
                case BinOp::pow: return ipow(a, b);
            }
            return {};
        }
        Interval operator()(const Node::Call& n) const {
            Interval a = bound(n.arg, t, x);
            switch (n.fn) {
                case Fn::exp: return iexp(a);
                case Fn::sin: return isin(a);
                case Fn::cos: return icos(a);
                case Fn::abs: return iabs(a);
            }
            return {};
        }
    };
    return std::visit(V{t_range, x_range}, e->v);
}

double sup_abs_bound(const Expr& e, Interval t_range, Interval x_range) {
    const Interval b = bound(e, t_range, x_range);
    const double m = std::max(std::abs(b.lo), std::abs(b.hi));
    if (!std::isfinite(m))
        throw BoundUnsupported("bound: expression is not provably bounded on the domain");
    return m;
}

// ------------------------------------------------------------------ decay

namespace {

bool mentions_var(const Expr& e) {
    struct V {
        bool operator()(const Node::Num&) const { return false; }
        bool operator()(const Node::VarRef&) const { return true; }
        bool operator()(const Node::Neg& n) const { return mentions_var(n.arg); }
        bool operator()(const Node::Bin& n) const {
            return mentions_var(n.lhs) || mentions_var(n.rhs);
        }
        bool operator()(const Node::Call& n) const { return mentions_var(n.arg); }
    };
    return std::visit(V{}, e->v);
}

// Folds variable-free subexpressions to their value.
std::optional<double> const_value(const Expr& e) {
    if (mentions_var(e)) return std::nullopt;
    try {
        return eval(e, 0.0, 0.0);
    } catch (const EvalError&) {
        return std::nullopt;
    }
}

// Slope of x when e is affine in x with constant coefficients; nullopt
// otherwise.
std::optional<double> x_slope(const Expr& e) {
    struct V {
        std::optional<double> operator()(const Node::Num&) const { return 0.0; }
        std::optional<double> operator()(const Node::VarRef& n) const {
            return n.var == Var::x ? std::optional<double>(1.0) : std::optional<double>(0.0);
        }
        std::optional<double> operator()(const Node::Neg& n) const {
            auto s = x_slope(n.arg);
            if (s) return -*s;
            return std::nullopt;
        }
        std::optional<double> operator()(const Node::Bin& n) const {
            auto a = x_slope(n.lhs);
            auto b = x_slope(n.rhs);
            switch (n.op) {
                case BinOp::add:
                    if (a && b) return *a + *b;
                    return std::nullopt;
                case BinOp::sub:
                    if (a && b) return *a - *b;
                    return std::nullopt;
                case BinOp::mul:
                    if (const auto c = const_value(n.lhs); c && b) return *c * *b;
                    if (const auto c = const_value(n.rhs); c && a) return *a * *c;
                    if (a && b && *a == 0.0 && *b == 0.0) return 0.0;
                    return std::nullopt;
                case BinOp::div:
                    if (const auto c = const_value(n.rhs); c && a && *c != 0.0)
                        return *a / *c;
                    return std::nullopt;
                case BinOp::pow:
                    if (a && b && *a == 0.0 && *b == 0.0) return 0.0;
                    return std::nullopt;
            }
            return std::nullopt;
        }
        std::optional<double> operator()(const Node::Call& n) const {
            auto s = x_slope(n.arg);
            if (s && *s == 0.0) return 0.0;  // x-free through any function
            return std::nullopt;
        }
    };
    return std::visit(V{}, e->v);
}

bool bounded_on(const Expr& e, double T) {
    try {
        sup_abs_bound(e, Interval{0.0, T}, Interval{0.0, kInf});
        return true;
    } catch (const BoundUnsupported&) {
        return false;
    }
}

// exp(g) -> 0 as x -> inf when g is affine in x with negative slope and a
// remainder bounded above over t in [0, T].
bool exp_arg_tends_minus_inf(const Expr& g, double T) {
    const auto slope = x_slope(g);
    if (!slope || !(*slope < 0.0)) return false;
    try {
        const Interval at0 = bound(g, Interval{0.0, T}, Interval{0.0, 0.0});
        return std::isfinite(at0.hi);
    } catch (const BoundUnsupported&) {
        return false;
    }
}

}  // namespace

bool decays_in_x(const Expr& e, double T) {
    struct V {
        double T;
        bool operator()(const Node::Num& n) const { return n.value == 0.0; }
        bool operator()(const Node::VarRef&) const { return false; }
        bool operator()(const Node::Neg& n) const { return decays_in_x(n.arg, T); }
        bool operator()(const Node::Bin& n) const {
            switch (n.op) {
                case BinOp::add:
                case BinOp::sub:
                    return decays_in_x(n.lhs, T) && decays_in_x(n.rhs, T);
                case BinOp::mul:
                    return (decays_in_x(n.lhs, T) && bounded_on(n.rhs, T)) ||
                           (bounded_on(n.lhs, T) && decays_in_x(n.rhs, T));
                case BinOp::div:
                    if (const auto c = const_value(n.rhs); c && *c != 0.0)
                        return decays_in_x(n.lhs, T);
                    return false;
                case BinOp::pow:
                    if (const auto c = const_value(n.rhs); c)
                        return *c > 0.0 && decays_in_x(n.lhs, T);
                    return false;
            }
            return false;
        }
        bool operator()(const Node::Call& n) const {
            switch (n.fn) {
                case Fn::exp: return exp_arg_tends_minus_inf(n.arg, T);
                case Fn::abs: return decays_in_x(n.arg, T);
                case Fn::sin:
                case Fn::cos: return false;
            }
            return false;
        }
    };
    return std::visit(V{T}, e->v);
}

}  // namespace fracdyn::expr
