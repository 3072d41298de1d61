#pragma once

#include "fracdyn/types.hpp"

namespace fracdyn {

/// Gamma function for x > 0. Relative error stays below 1e-12 on (0, 30].
double gamma(double x);

/// Fractional integral of order alpha on a uniform grid.
///
/// The kernel (t-s)^(alpha-1) is singular at s = t, so nodewise sampling is
/// useless; instead the piecewise-linear interpolant of f is integrated
/// against the kernel exactly. With m = n - j this gives
///
///   J_n = h^alpha / Gamma(alpha+2) * [ c0(n) f_0 + sum_{j=1}^{n-1} d(m) f_j + f_n ],
///   c0(n) = (n-1)^(a+1) - n^a (n-1-a),
///   d(m)  = (m+1)^(a+1) - 2 m^(a+1) + (m-1)^(a+1).
///
/// The value at the left endpoint is the limit for continuous f, which is 0
/// for alpha > 0. For alpha = 1 the weights reduce to the trapezoid rule.
SampledPath rl_integral(const SampledPath& f, FracOrder alpha);

/// Order-zero integral: the identity.
SampledPath rl_integral(const SampledPath& f, OrderZero);

/// Derivative of order alpha: numerical d/dt applied to the integral of
/// order 1-alpha. Centered differences at interior nodes, second-order
/// one-sided differences at the endpoints. Needs at least 3 nodes.
SampledPath rl_derivative(const SampledPath& f, FracOrder alpha);

/// Caputo derivative: rl_derivative applied to the shifted path f - f(a).
/// Vanishes identically on constants.
SampledPath caputo_derivative(const SampledPath& f, FracOrder alpha);

/// Alternative realization of the Caputo derivative through the L1 weight
/// scheme: first differences of f against w_k = (k+1)^(1-alpha) - k^(1-alpha).
/// Agrees with caputo_derivative within quadrature tolerance away from the
/// left endpoint.
SampledPath caputo_derivative_l1(const SampledPath& f, FracOrder alpha);

struct MittagLefflerResult {
    double value;
    double tail_bound;  // estimated magnitude of the truncated remainder
};

/// Truncated series E_alpha(z) = sum_{k=0}^{terms} z^k / Gamma(alpha*k + 1).
/// Only the regime |z| <= 5 with terms >= 50 is accepted.
MittagLefflerResult mittag_leffler(FracOrder alpha, double z, int terms);

}  // namespace fracdyn
