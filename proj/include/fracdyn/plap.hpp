#pragma once

#include <span>
#include <string>
#include <vector>

#include "fracdyn/expr.hpp"
#include "fracdyn/types.hpp"
#include "fracdyn/volterra.hpp"

namespace fracdyn::plap {

/// Semi-discrete p-Laplacian problem on [0, T] with unit spatial step:
/// N truncated components, coefficient r(t, x) sampled at half-integers,
/// forcing F(t, x) at integers, initial profile phi(x) and boundary path
/// psi(t).
struct PLapProblem {
    double p = 2.0;
    FracOrder alpha{0.5};
    double T = 1.0;
    int N = 32;
    expr::Expr r;
    expr::Expr F;
    expr::Expr phi;
    expr::Expr psi;
    double beta = 1.0;

    void validate() const;
};

/// Phi_p(x) = |x|^(p-2) * x; odd and strictly increasing, identity for p = 2.
double phi_p(double x, double p);

/// One stencil component r_{n+1/2} Phi_p(u_{n+1} - u_n) - r_{n-1/2} Phi_p(u_n - u_{n-1})
/// for 1 <= n <= N-1; u0_boundary supplies u_0(t) for the n = 1 stencil.
double lambda_np(double t, const StateVec& u, double u0_boundary, int n,
                 const PLapProblem& problem);

/// Right-hand-side evaluator of the truncated system over components
/// n = 1..N: the stencil plus forcing, with u_0(t) = psi(t) injected at
/// n = 1 and the truncation closed by u_{N+1} := 0.
volterra::Rhs assemble_rhs(const PLapProblem& problem);

struct Certificate {
    double lambda = 0.0;  // p - 1
    double P = 0.0;       // sup |F|
    double Q = 0.0;       // 2^p * sup r
    double M = 0.0;       // P + Q * (||phi|| + beta)^lambda
    double delta = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    std::string k_rule;
    bool psi_zero = true;
    std::string note;  // filled when psi is not identically zero
};

/// Existence certificate from the symbolic expression catalog. Refuses when
/// a supremum or a decay requirement cannot be certified, and when the
/// resulting bound M degenerates to zero.
Certificate certify(const PLapProblem& problem);

/// Initial value (phi(1), ..., phi(N)) as a StateVec.
StateVec initial_state(const PLapProblem& problem);

/// Picard solve of the truncated system. Certified runs keep the grid inside
/// [0, Certificate.delta]; longer grids and uncertifiable expressions are
/// permitted, with a warning recorded in the report.
volterra::SolveReport solve_semidiscrete(const PLapProblem& problem, const TimeGrid& grid,
                                         double tol, int max_iter = 200);

struct TruncationRow {
    int n_prev = 0;
    int n_next = 0;
    double sup_diff = 0.0;  // over time and shared components
};

/// Solves the problem at each truncation length and reports consecutive
/// solution differences.
std::vector<TruncationRow> truncation_study(const PLapProblem& problem,
                                            std::span<const int> N_list, const TimeGrid& grid,
                                            double tol);

}  // namespace fracdyn::plap
