#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fracdyn/types.hpp"
#include "fracdyn/volterra.hpp"

namespace fracdyn::kamke {

/// Comparison nonlinearity w(t, s) = H(t) * s^lambda with lambda >= 1 and a
/// non-negative coefficient, either constant or a sampled scalar path over
/// [a, b].
struct KamkeSpec {
    double H = 1.0;
    std::optional<SampledPath> h_path;
    double lambda = 1.0;
    FracOrder alpha{0.5};
    double a = 0.0;
    double b = 1.0;

    void validate() const;
    double coefficient(double t) const;  // linear interpolation for h_path
    double coefficient_sup() const;
};

/// w(t, s); rejects s < 0.
double eval_kamke(const KamkeSpec& spec, double t, double s);

struct ComparisonFamily {
    std::vector<double> eps;
    std::vector<SampledPath> members;  // one solution per eps, all on one grid
    double solved_delta = 0.0;         // length of the interval actually solved
    bool interval_shrunk = false;
};

/// Solves the comparison problem D^alpha y = w(t, y), y(a) = eps for each
/// eps. Superlinear coefficients can blow up, so for lambda > 1 the interval
/// is certified through the contraction estimate of the local Lipschitz
/// constant over [0, 2*(eps_max + beta)] and shrunk when that estimate
/// reaches 1; linear specs converge globally and run on the requested grid.
ComparisonFamily comparison_family(const KamkeSpec& spec, std::span<const double> eps_list,
                                   const TimeGrid& grid, double tol = 1e-10, int max_iter = 200);

struct StabilityScan {
    std::vector<double> ratios;  // sup_t |u_eps| / eps per eps
    double A_hat = 0.0;
    double solved_delta = 0.0;
    bool interval_shrunk = false;
};

/// Ratios sup|u_eps|/eps over a decreasing eps list. Each solve runs at
/// tolerance tol*eps so that the linear case scales exactly.
StabilityScan stability_scan(const KamkeSpec& spec, std::span<const double> eps_list,
                             const TimeGrid& grid, double tol = 1e-10, int max_iter = 200);

struct ViolationReport {
    double ineq_margin = 0.0;     // max over nodes of u - J^alpha[w(., u(.))]
    double limit_estimate = 0.0;  // extrapolated u(t)/(t-a)^alpha as t -> a+
    bool admissible = false;
};

/// Falsification check for a non-negative candidate u on its grid: u is
/// admissible only when it satisfies the comparison integral inequality and
/// the vanishing-quotient condition at the left endpoint, both within tol.
/// The quotient is evaluated at grid spacings h and 2h and extrapolated; a
/// quotient growing under refinement is reported as is (nonzero or
/// divergent limit).
ViolationReport candidate_violation(const KamkeSpec& spec, const SampledPath& u,
                                    double tol = 1e-6);

}  // namespace fracdyn::kamke
