#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fracdyn::expr {

struct Node;
using Expr = std::shared_ptr<const Node>;

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset(offset) {}
    std::size_t offset;
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when the symbolic bound machinery cannot certify an expression;
/// callers fall back to solve-only mode.
struct BoundUnsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grammar: numbers; variables t, x; + - * / ^; unary -; exp, sin, cos, abs;
/// parentheses. ^ is right-associative and binds tighter than unary minus.
Expr parse(std::string_view source);

double eval(const Expr& e, double t, double x);

/// Fully parenthesized rendering; parse(to_string(e)) evaluates identically.
std::string to_string(const Expr& e);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool finite() const;
};

/// Interval-style enclosure of e over t_range x x_range. Conservative on the
/// supported atoms; throws BoundUnsupported where no sound enclosure exists
/// (division by an interval containing zero, exotic powers).
Interval bound(const Expr& e, Interval t_range, Interval x_range);

/// Largest |e| over the domain; throws BoundUnsupported when not finite.
double sup_abs_bound(const Expr& e, Interval t_range, Interval x_range);

/// True when the catalog proves e(t, x) -> 0 as x -> infinity, uniformly in
/// t over [0, T]: products of a decaying factor (exponentials of affine
/// expressions with negative x-slope, or the zero constant) with bounded
/// factors, sums of such, and positive powers thereof.
bool decays_in_x(const Expr& e, double T);

}  // namespace fracdyn::expr
