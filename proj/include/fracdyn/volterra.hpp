#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracdyn/frac_core.hpp"
#include "fracdyn/types.hpp"

namespace fracdyn::volterra {

using Rhs = std::function<StateVec(double, const StateVec&)>;

/// Initial value problem data on the ambient interval [a, a + bar_delta],
/// restricted to the ball of radius beta around u0. bound_M is the uniform
/// bound on the right-hand side over that cylinder; kappa, when present, is
/// its Lipschitz constant in the state argument.
struct IVProblem {
    double a = 0.0;
    double bar_delta = 1.0;
    StateVec u0;
    FracOrder alpha{1.0};
    Rhs rhs;
    double beta = 1.0;
    double bound_M = 1.0;
    std::optional<double> kappa;

    void validate() const;
};

struct SolveReport {
    SampledPath solution;
    int iterations = 0;
    double final_increment = 0.0;
    double observed_ratio = 0.0;  // max successive increment ratio
    double residual = 0.0;
    bool ball_escape = false;  // some iterate left B(u0, beta)
    std::vector<std::string> warnings;
};

struct NonConvergenceError : std::runtime_error {
    NonConvergenceError(std::string msg, double increment, int iters)
        : std::runtime_error(std::move(msg)), last_increment(increment), iterations(iters) {}
    double last_increment;
    int iterations;
};

/// Certified local-existence horizon: min{bar_delta, (beta*Gamma(alpha+1)/M)^(1/alpha)}.
double existence_delta(double bar_delta, double beta, double M, FracOrder alpha);

/// Uniqueness horizon: the existence horizon additionally capped by
/// (C*Gamma(alpha+1)/kappa)^(1/alpha), with 0 < C < 1. The returned delta
/// makes kappa*delta^alpha/Gamma(alpha+1) <= C, so the solve operator
/// contracts with constant C.
double uniqueness_delta(double bar_delta, double beta, double M, double kappa, double C,
                        FracOrder alpha);

/// Theoretical contraction constant kappa*delta^alpha/Gamma(alpha+1).
double contraction_estimate(const IVProblem& problem, double delta, FracOrder alpha);

/// Sup over nodes of ||u(t) - u0 - J^alpha[f(.,u(.))](t)||.
double volterra_residual(const SampledPath& u, const IVProblem& problem);

/// Fixed-point iteration u_{m+1} = u0 + J^alpha[f(., u_m(.))] starting from
/// the constant path u0. Terminates when the sup-norm increment drops below
/// tol and the reported residual does too; throws NonConvergenceError after
/// max_iter. An iterate leaving B(u0, beta) is recorded as a warning, not an
/// error.
SolveReport picard_solve(const IVProblem& problem, const TimeGrid& grid, double tol,
                         int max_iter);

}  // namespace fracdyn::volterra
