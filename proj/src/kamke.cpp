#include "fracdyn/kamke.hpp"

#include <algorithm>
#include <cmath>

namespace fracdyn::kamke {

void KamkeSpec::validate() const {
    if (!(lambda >= 1.0)) throw std::invalid_argument("KamkeSpec: lambda must be >= 1");
    if (!(b > a)) throw std::invalid_argument("KamkeSpec: interval [a, b] must be non-empty");
    if (h_path) {
        for (std::size_t j = 0; j < h_path->n_nodes(); ++j)
            if (h_path->scalar_value(j) < 0.0)
                throw std::invalid_argument("KamkeSpec: coefficient path must be non-negative");
    } else if (!(H >= 0.0)) {
        throw std::invalid_argument("KamkeSpec: H must be >= 0");
    }
}

double KamkeSpec::coefficient(double t) const {
    if (!h_path) return H;
    const TimeGrid& g = h_path->grid();
    if (t <= g.a()) return h_path->scalar_value(0);
    if (t >= g.right()) return h_path->scalar_value(g.n_steps());
    const double s = (t - g.a()) / g.h();
    const std::size_t j = std::min(static_cast<std::size_t>(s), g.n_steps() - 1);
    const double w = s - static_cast<double>(j);
    return (1.0 - w) * h_path->scalar_value(j) + w * h_path->scalar_value(j + 1);
}

double KamkeSpec::coefficient_sup() const {
    if (!h_path) return H;
    double m = 0.0;
    for (std::size_t j = 0; j < h_path->n_nodes(); ++j)
        m = std::max(m, h_path->scalar_value(j));
    return m;
}

double eval_kamke(const KamkeSpec& spec, double t, double s) {
    spec.validate();
    if (s < 0.0) throw std::domain_error("eval_kamke: s must be >= 0");
    if (t < spec.a - 1e-12 || t > spec.b + 1e-12)
        throw std::domain_error("eval_kamke: t outside [a, b]");
    return spec.coefficient(t) * std::pow(s, spec.lambda);
}

namespace {

struct SolvePlan {
    TimeGrid grid;
    double beta;
    double bound_M;
    double kappa;
    bool shrunk;
};

// Picks the interval the family is solved on. Linear specs converge for any
// horizon; for lambda > 1 the local Lipschitz constant of H*s^lambda over
// [0, 2*(eps_max + beta)] must give a contraction estimate below 1, and the
// horizon shrinks until it does.
SolvePlan plan_solve(const KamkeSpec& spec, double eps_max, const TimeGrid& grid) {
    const double a = spec.alpha.value();
    const double hmax = spec.coefficient_sup();
    SolvePlan plan{grid, 0.0, 1.0, 0.0, false};

    if (spec.lambda == 1.0 || hmax == 0.0 || eps_max == 0.0) {
        plan.beta = 1e6 * (1.0 + eps_max);
        plan.bound_M = std::max(hmax * std::pow(eps_max + plan.beta, spec.lambda), 1.0);
        plan.kappa = hmax > 0.0 ? hmax : 1e-30;
        return plan;
    }

    plan.beta = std::max(eps_max, 1e-6);
    const double s_cap = 2.0 * (eps_max + plan.beta);
    plan.kappa = hmax * spec.lambda * std::pow(s_cap, spec.lambda - 1.0);
    plan.bound_M = hmax * std::pow(eps_max + plan.beta, spec.lambda);

    double horizon = grid.length();
    const double contraction = plan.kappa * std::pow(horizon, a) / gamma(a + 1.0);
    if (contraction >= 0.9)
        horizon = std::pow(0.9 * gamma(a + 1.0) / plan.kappa, 1.0 / a);
    horizon = std::min(horizon,
                       volterra::existence_delta(grid.length(), plan.beta, plan.bound_M,
                                                 spec.alpha));
    if (horizon < grid.length() - 1e-15) {
        auto steps = static_cast<std::size_t>(std::floor(horizon / grid.h()));
        if (steps < 2)
            throw std::domain_error(
                "comparison_family: certified interval shorter than two grid steps; "
                "reduce H, eps or the step size");
        plan.grid = TimeGrid(grid.a(), grid.h(), steps);
        plan.shrunk = true;
    }
    return plan;
}

volterra::IVProblem comparison_problem(const KamkeSpec& spec, double eps, const SolvePlan& plan) {
    volterra::IVProblem p;
    p.a = spec.a;
    p.bar_delta = spec.b - spec.a;
    p.u0 = StateVec::scalar(eps);
    p.alpha = spec.alpha;
    p.beta = plan.beta;
    p.bound_M = plan.bound_M;
    p.kappa = plan.kappa;
    p.rhs = [spec](double t, const StateVec& u) {
        return StateVec::scalar(eval_kamke(spec, t, std::max(u.as_scalar(), 0.0)));
    };
    return p;
}

}  // namespace

ComparisonFamily comparison_family(const KamkeSpec& spec, std::span<const double> eps_list,
                                   const TimeGrid& grid, double tol, int max_iter) {
    spec.validate();
    if (eps_list.empty()) throw std::invalid_argument("comparison_family: eps list is empty");
    for (double e : eps_list)
        if (e < 0.0) throw std::invalid_argument("comparison_family: eps must be >= 0");
    if (std::abs(grid.a() - spec.a) > 1e-12 || grid.right() > spec.b + 1e-12)
        throw std::invalid_argument("comparison_family: grid must lie inside [a, b]");

    const double eps_max = *std::max_element(eps_list.begin(), eps_list.end());
    const SolvePlan plan = plan_solve(spec, eps_max, grid);

    ComparisonFamily fam;
    fam.eps.assign(eps_list.begin(), eps_list.end());
    fam.solved_delta = plan.grid.length();
    fam.interval_shrunk = plan.shrunk;
    for (double e : eps_list) {
        try {
            fam.members.push_back(
                volterra::picard_solve(comparison_problem(spec, e, plan), plan.grid, tol,
                                       max_iter)
                    .solution);
        } catch (const volterra::NonConvergenceError& err) {
            throw volterra::NonConvergenceError(
                "comparison_family: solve for eps = " + std::to_string(e) +
                    " did not converge (" + err.what() + ")",
                err.last_increment, err.iterations);
        }
    }
    return fam;
}

StabilityScan stability_scan(const KamkeSpec& spec, std::span<const double> eps_list,
                             const TimeGrid& grid, double tol, int max_iter) {
    spec.validate();
    if (eps_list.empty()) throw std::invalid_argument("stability_scan: eps list is empty");
    for (double e : eps_list)
        if (!(e > 0.0)) throw std::invalid_argument("stability_scan: eps must be positive");

    const double eps_max = *std::max_element(eps_list.begin(), eps_list.end());
    const SolvePlan plan = plan_solve(spec, eps_max, grid);

    StabilityScan scan;
    scan.solved_delta = plan.grid.length();
    scan.interval_shrunk = plan.shrunk;
    for (double e : eps_list) {
        // Tolerance scales with eps so the linear case scales exactly.
        const SampledPath u =
            volterra::picard_solve(comparison_problem(spec, e, plan), plan.grid, tol * e,
                                   max_iter)
                .solution;
        scan.ratios.push_back(u.sup_norm() / e);
    }
    scan.A_hat = *std::max_element(scan.ratios.begin(), scan.ratios.end());
    return scan;
}

ViolationReport candidate_violation(const KamkeSpec& spec, const SampledPath& u, double tol) {
    spec.validate();
    if (u.dim() != 1) throw std::invalid_argument("candidate_violation: u must be scalar");
    const TimeGrid& g = u.grid();
    if (g.n_steps() < 2)
        throw std::invalid_argument("candidate_violation: need at least 3 nodes");
    if (std::abs(g.a() - spec.a) > 1e-12)
        throw std::invalid_argument(
            "candidate_violation: the candidate grid must start at the interval's left "
            "endpoint");
    for (std::size_t j = 0; j < u.n_nodes(); ++j)
        if (u.scalar_value(j) < 0.0)
            throw std::domain_error("candidate_violation: u must be non-negative");

    std::vector<double> w(u.n_nodes());
    for (std::size_t j = 0; j < u.n_nodes(); ++j)
        w[j] = eval_kamke(spec, g.node(j), u.scalar_value(j));
    const SampledPath jw = rl_integral(SampledPath::scalar(g, std::move(w)), spec.alpha);

    ViolationReport rep;
    for (std::size_t j = 0; j < u.n_nodes(); ++j)
        rep.ineq_margin = std::max(rep.ineq_margin,
                                   u.scalar_value(j) - jw.scalar_value(j));

    const double a = spec.alpha.value();
    const double q1 = u.scalar_value(1) / std::pow(g.h(), a);
    const double q2 = u.scalar_value(2) / std::pow(2.0 * g.h(), a);
    if (q1 > q2 * (1.0 + 1e-9))
        rep.limit_estimate = q1;  // growing under refinement: nonzero or divergent
    else
        rep.limit_estimate = std::max(0.0, 2.0 * q1 - q2);

    rep.admissible = rep.ineq_margin <= tol && rep.limit_estimate <= tol;
    return rep;
}

}  // namespace fracdyn::kamke
