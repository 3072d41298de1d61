#include "fracdyn/plap.hpp"

#include <cmath>
#include <limits>

namespace fracdyn::plap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_r(const PLapProblem& pb, double t, double x) {
    const double v = expr::eval(pb.r, t, x);
    if (v < 0.0)
        throw std::domain_error("PLapProblem: r(" + std::to_string(t) + ", " +
                                std::to_string(x) + ") = " + std::to_string(v) +
                                " is negative; r must be non-negative wherever evaluated");
    return v;
}
}  // namespace

void PLapProblem::validate() const {
    if (!(p >= 2.0)) throw std::domain_error("PLapProblem: p must be >= 2");
    if (!(T > 0.0)) throw std::invalid_argument("PLapProblem: T must be positive");
    if (N < 2) throw std::invalid_argument("PLapProblem: N must be >= 2");
    if (!(beta > 0.0)) throw std::invalid_argument("PLapProblem: beta must be positive");
    if (!r || !F || !phi || !psi)
        throw std::invalid_argument("PLapProblem: r, F, phi, psi expressions are required");
}

double phi_p(double x, double p) {
    if (!(p >= 2.0)) throw std::domain_error("phi_p: p must be >= 2");
    if (x == 0.0) return 0.0;
    return std::pow(std::abs(x), p - 2.0) * x;
}

double lambda_np(double t, const StateVec& u, double u0_boundary, int n,
                 const PLapProblem& problem) {
    problem.validate();
    if (n < 1 || n > problem.N - 1)
        throw std::out_of_range("lambda_np: n must lie in [1, N-1], got " + std::to_string(n));
    if (u.dim() != static_cast<std::size_t>(problem.N))
        throw std::invalid_argument("lambda_np: state dimension does not match N");
    const double um = (n == 1) ? u0_boundary : u[static_cast<std::size_t>(n) - 2];
    const double uc = u[static_cast<std::size_t>(n) - 1];
    const double up = u[static_cast<std::size_t>(n)];
    const double rp = eval_r(problem, t, n + 0.5);
    const double rm = eval_r(problem, t, n - 0.5);
    return rp * phi_p(up - uc, problem.p) - rm * phi_p(uc - um, problem.p);
}

volterra::Rhs assemble_rhs(const PLapProblem& problem) {
    problem.validate();
    const PLapProblem pb = problem;  // shared expression trees
    return [pb](double t, const StateVec& u) {
        const int N = pb.N;
        if (u.dim() != static_cast<std::size_t>(N))
            throw std::invalid_argument("plap rhs: state dimension does not match N");
        const double psi_t = expr::eval(pb.psi, t, 0.0);
        std::vector<double> out(static_cast<std::size_t>(N));
        double r_left = eval_r(pb, t, 0.5);
        double phi_left = phi_p(u[0] - psi_t, pb.p);
        for (int n = 1; n <= N; ++n) {
            const double uc = u[static_cast<std::size_t>(n) - 1];
            const double up = (n == N) ? 0.0 : u[static_cast<std::size_t>(n)];  // u_{N+1} := 0
            const double r_right = eval_r(pb, t, n + 0.5);
            const double phi_right = phi_p(up - uc, pb.p);
            out[static_cast<std::size_t>(n) - 1] =
                r_right * phi_right - r_left * phi_left + expr::eval(pb.F, t, n);
            r_left = r_right;
            phi_left = phi_right;  // flux continues across the cell face
        }
        return StateVec(std::move(out));
    };
}

Certificate certify(const PLapProblem& problem) {
    problem.validate();
    const expr::Interval t_range{0.0, problem.T};
    const expr::Interval x_half{0.5, kInf};
    const expr::Interval x_full{0.0, kInf};

    expr::Interval rb;
    try {
        rb = expr::bound(problem.r, t_range, x_half);
    } catch (const expr::BoundUnsupported& e) {
        throw expr::BoundUnsupported(std::string("certify: cannot bound r (") + e.what() + ")");
    }
    if (!std::isfinite(rb.hi))
        throw expr::BoundUnsupported("certify: r is not provably bounded");
    if (rb.lo < 0.0)
        throw expr::BoundUnsupported("certify: cannot prove r >= 0 on the domain");

    double P;
    try {
        P = expr::sup_abs_bound(problem.F, t_range, x_full);
    } catch (const expr::BoundUnsupported& e) {
        throw expr::BoundUnsupported(std::string("certify: cannot bound F (") + e.what() + ")");
    }
    if (!expr::decays_in_x(problem.F, problem.T))
        throw expr::BoundUnsupported(
            "certify: cannot prove F(t, x) -> 0 as x -> infinity within the expression catalog");

    if (!expr::decays_in_x(problem.phi, problem.T))
        throw expr::BoundUnsupported(
            "certify: cannot prove phi(x) -> 0 as x -> infinity within the expression catalog");
    double phi_norm;
    try {
        phi_norm = expr::sup_abs_bound(problem.phi, expr::Interval{0.0, 0.0},
                                       expr::Interval{1.0, kInf});
    } catch (const expr::BoundUnsupported& e) {
        throw expr::BoundUnsupported(std::string("certify: cannot bound phi (") + e.what() +
                                     ")");
    }

    Certificate cert;
    cert.lambda = problem.p - 1.0;
    cert.P = P;
    cert.Q = std::pow(2.0, problem.p) * rb.hi;
    const double radius = phi_norm + problem.beta;
    cert.M = cert.P + cert.Q * std::pow(radius, cert.lambda);
    if (!(cert.M > 0.0))
        throw std::domain_error(
            "certify: degenerate bound (M = 0); the certified horizon is undefined");
    cert.delta = volterra::existence_delta(problem.T, problem.beta, cert.M, problem.alpha);
    cert.C1 = rb.hi * std::pow(2.0, problem.p) * (problem.p - 1.0) *
              std::pow(radius, problem.p - 2.0);
    cert.C2 = std::pow(2.0, problem.p) * std::pow(radius, problem.p - 1.0);
    cert.k_rule = "k_1 = 1, k_n = n-1 for n >= 2";

    double psi_sup = kInf;
    try {
        psi_sup = expr::sup_abs_bound(problem.psi, t_range, expr::Interval{0.0, 0.0});
    } catch (const expr::BoundUnsupported&) {
    }
    cert.psi_zero = (psi_sup == 0.0);
    if (!cert.psi_zero)
        cert.note =
            "psi is not identically zero: the constants are certified for the zero-boundary "
            "case only, and possible extra contributions to P are not accounted for";
    return cert;
}

StateVec initial_state(const PLapProblem& problem) {
    problem.validate();
    std::vector<double> u0(static_cast<std::size_t>(problem.N));
    for (int n = 1; n <= problem.N; ++n)
        u0[static_cast<std::size_t>(n) - 1] = expr::eval(problem.phi, 0.0, n);
    return StateVec(std::move(u0));
}

volterra::SolveReport solve_semidiscrete(const PLapProblem& problem, const TimeGrid& grid,
                                         double tol, int max_iter) {
    problem.validate();
    if (std::abs(grid.a()) > 1e-12)
        throw std::invalid_argument("solve_semidiscrete: grid must start at t = 0");
    if (grid.right() > problem.T + 1e-12)
        throw std::invalid_argument("solve_semidiscrete: grid leaves [0, T]");

    std::vector<std::string> warnings;
    volterra::IVProblem ivp;
    ivp.a = 0.0;
    ivp.bar_delta = problem.T;
    ivp.u0 = initial_state(problem);
    ivp.alpha = problem.alpha;
    ivp.rhs = assemble_rhs(problem);
    ivp.beta = problem.beta;
    // Solve-only fallback: estimate a bound from the initial data.
    const auto fallback = [&](const char* reason) {
        double m = 1.0;
        for (std::size_t j = 0; j < grid.n_nodes(); ++j)
            m = std::max(m, ivp.rhs(grid.node(j), ivp.u0).sup_norm());
        ivp.bound_M = m + 1.0;
        warnings.push_back(std::string("uncertified run: ") + reason);
    };
    try {
        const Certificate cert = certify(problem);
        ivp.bound_M = cert.M;
        ivp.kappa = cert.C1 > 0.0 ? std::optional<double>(cert.C1) : std::nullopt;
        if (grid.length() > cert.delta + 1e-12)
            warnings.push_back("uncertified run: grid length " + std::to_string(grid.length()) +
                               " exceeds the certified horizon " + std::to_string(cert.delta));
    } catch (const expr::BoundUnsupported& e) {
        fallback(e.what());
    } catch (const std::domain_error& e) {
        // validate() already passed, so this is the degenerate-bound refusal
        fallback(e.what());
    }

    volterra::SolveReport rep = volterra::picard_solve(ivp, grid, tol, max_iter);
    rep.warnings.insert(rep.warnings.end(), warnings.begin(), warnings.end());
    return rep;
}

std::vector<TruncationRow> truncation_study(const PLapProblem& problem,
                                            std::span<const int> N_list, const TimeGrid& grid,
                                            double tol) {
    if (N_list.size() < 2)
        throw std::invalid_argument("truncation_study: need at least two truncation lengths");
    for (std::size_t i = 1; i < N_list.size(); ++i)
        if (N_list[i] < N_list[i - 1])
            throw std::invalid_argument("truncation_study: N_list must be non-decreasing");

    std::vector<volterra::SolveReport> runs;
    runs.reserve(N_list.size());
    for (int n : N_list) {
        PLapProblem pb = problem;
        pb.N = n;
        runs.push_back(solve_semidiscrete(pb, grid, tol));
    }

    std::vector<TruncationRow> rows;
    for (std::size_t i = 1; i < N_list.size(); ++i) {
        const SampledPath& a = runs[i - 1].solution;
        const SampledPath& b = runs[i].solution;
        const std::size_t shared = std::min(a.dim(), b.dim());
        double diff = 0.0;
        for (std::size_t j = 0; j < a.n_nodes(); ++j)
            for (std::size_t c = 0; c < shared; ++c)
                diff = std::max(diff, std::abs(a.value(j)[c] - b.value(j)[c]));
        rows.push_back({N_list[i - 1], N_list[i], diff});
    }
    return rows;
}

}  // namespace fracdyn::plap
