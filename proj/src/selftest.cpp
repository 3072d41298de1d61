#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "fracdyn/cli.hpp"
#include "fracdyn/expr.hpp"
#include "fracdyn/frac_core.hpp"
#include "fracdyn/kamke.hpp"
#include "fracdyn/mnc.hpp"
#include "fracdyn/plap.hpp"
#include "fracdyn/volterra.hpp"

// The acceptance battery. Derivative-based identities are measured on
// interior nodes with t >= a + 0.05: the product quadrature carries an
// h-independent boundary layer at the kernel singularity whenever f(a) != 0,
// so supremum norms are taken away from the left endpoint, matching the
// measurement window used for the closed-form derivative checks.

namespace fracdyn::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::string eng(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

struct Timer {
    Clock::time_point start = Clock::now();
    double seconds() const {
        return std::chrono::duration<double>(Clock::now() - start).count();
    }
};

CriterionResult finish(int id, std::string name, bool pass, std::string detail,
                       const Timer& timer, double budget) {
    const double secs = timer.seconds();
    if (secs >= budget) {
        pass = false;
        detail += (detail.empty() ? "" : "; ") + std::string("runtime budget exceeded");
    }
    return {id, std::move(name), pass, std::move(detail), secs};
}

double window_sup(const SampledPath& err, double t_min, bool interior) {
    const TimeGrid& g = err.grid();
    double m = 0.0;
    const std::size_t lo = interior ? 1 : 0;
    const std::size_t hi = interior ? g.n_steps() - 1 : g.n_steps();
    for (std::size_t j = lo; j <= hi; ++j)
        if (g.node(j) >= t_min - 1e-12) m = std::max(m, err.value(j).sup_norm());
    return m;
}

SampledPath difference(const SampledPath& a, const SampledPath& b) {
    std::vector<StateVec> v;
    v.reserve(a.n_nodes());
    for (std::size_t j = 0; j < a.n_nodes(); ++j) v.push_back(a.value(j) - b.value(j));
    return SampledPath(a.grid(), std::move(v));
}

SampledPath sample(const TimeGrid& g, double (*f)(double)) {
    return SampledPath::sample_scalar(g, f);
}

// ---------------------------------------------------------------------- C1

CriterionResult criterion_operator_identities() {
    Timer timer;
    const double window = 0.05;
    struct TestFn {
        const char* name;
        double (*f)(double);
    };
    const TestFn fns[] = {{"sin", [](double t) { return std::sin(t); }},
                          {"cos", [](double t) { return std::cos(t); }},
                          {"t^2", [](double t) { return t * t; }}};
    const double alphas[] = {0.25, 0.5, 0.75};
    const double hs[] = {1e-3, 5e-4};

    bool pass = true;
    double worst_err = 0.0, worst_shrink = 1e30;
    std::string what;
    for (const TestFn& fn : fns)
        for (double a : alphas) {
            double sg[2], inv[2], comp[2];
            for (int k = 0; k < 2; ++k) {
                const TimeGrid g(0.0, hs[k], static_cast<std::size_t>(std::llround(1.0 / hs[k])));
                const SampledPath f = sample(g, fn.f);
                const FracOrder a1(a);
                const double a2v = (2.0 * a <= 1.0) ? a : 1.0 - a;
                const FracOrder a2(a2v);
                sg[k] = window_sup(difference(rl_integral(rl_integral(f, a1), a2),
                                              rl_integral(f, FracOrder(a + a2v))),
                                   window, false);
                inv[k] = window_sup(difference(rl_derivative(rl_integral(f, a1), a1), f), window,
                                    true);
                comp[k] = window_sup(
                    difference(rl_derivative(rl_derivative(rl_integral(f, FracOrder(1.0)), a1),
                                             FracOrder(1.0 - a)),
                               f),
                    window, true);
            }
            const double checks[3][2] = {{sg[0], sg[1]}, {inv[0], inv[1]}, {comp[0], comp[1]}};
            const char* names[3] = {"semigroup", "inversion", "composite"};
            for (int c = 0; c < 3; ++c) {
                worst_err = std::max(worst_err, checks[c][0]);
                const bool tol_ok = checks[c][0] <= 5e-3;
                const bool shrink_ok = checks[c][1] <= checks[c][0] / 1.5 + 1e-12;
                if (checks[c][0] > 1e-12)
                    worst_shrink = std::min(worst_shrink, checks[c][0] / checks[c][1]);
                if (!tol_ok || !shrink_ok) {
                    pass = false;
                    what = std::string(names[c]) + " f=" + fn.name + " alpha=" + eng(a);
                }
            }
        }
    std::string detail = "max sup err " + eng(worst_err) + ", min shrink " + eng(worst_shrink);
    if (!pass) detail += "; first failure: " + what;
    return finish(1, "operator identities (semigroup, inversion, composite)", pass, detail,
                  timer, 10.0);
}

// ---------------------------------------------------------------------- C2

CriterionResult criterion_closed_forms() {
    Timer timer;
    bool pass = true;
    double worst = 0.0;
    const double a0 = 0.25;  // offset interval [0.25, 1.25]
    for (double a : {0.25, 0.5, 0.75}) {
        {
            const TimeGrid g(0.0, 1e-3, 1000);
            const SampledPath one = SampledPath::sample_scalar(g, [](double) { return 1.0; });
            const SampledPath ja = rl_integral(one, FracOrder(a));
            const SampledPath ref = SampledPath::sample_scalar(
                g, [&](double t) { return std::pow(t, a) / gamma(a + 1.0); });
            const double err = window_sup(difference(ja, ref), 0.0, false);
            worst = std::max(worst, err);
            pass = pass && err <= 1e-3;
        }
        {
            const TimeGrid g(a0, 1e-3, 1000);
            const SampledPath lin =
                SampledPath::sample_scalar(g, [&](double t) { return t - a0; });
            const SampledPath da = caputo_derivative(lin, FracOrder(a));
            const SampledPath ref = SampledPath::sample_scalar(g, [&](double t) {
                return std::pow(t - a0, 1.0 - a) / gamma(2.0 - a);
            });
            const double err = window_sup(difference(da, ref), a0 + 0.05, true);
            worst = std::max(worst, err);
            pass = pass && err <= 1e-3;
        }
    }
    return finish(2, "closed-form fractional calculus", pass, "max sup err " + eng(worst), timer,
                  5.0);
}

// ---------------------------------------------------------------------- C3

volterra::IVProblem scalar_problem(double a, double bar_delta, double u0, double alpha,
                                   volterra::Rhs rhs, double beta, double M,
                                   std::optional<double> kappa = {}) {
    volterra::IVProblem p;
    p.a = a;
    p.bar_delta = bar_delta;
    p.u0 = StateVec::scalar(u0);
    p.alpha = FracOrder(alpha);
    p.rhs = std::move(rhs);
    p.beta = beta;
    p.bound_M = M;
    p.kappa = kappa;
    return p;
}

CriterionResult criterion_equivalence() {
    Timer timer;
    struct Problem {
        const char* name;
        double alpha;
        double u0;
        volterra::Rhs rhs;
    };
    const Problem problems[] = {
        {"D^0.5 u = -u", 0.5, 1.0,
         [](double, const StateVec& u) { return StateVec::scalar(-u.as_scalar()); }},
        {"D^0.75 u = cos t - u", 0.75, 0.5,
         [](double t, const StateVec& u) { return StateVec::scalar(std::cos(t) - u.as_scalar()); }},
        {"u' = u", 1.0, 1.0,
         [](double, const StateVec& u) { return StateVec::scalar(u.as_scalar()); }},
    };
    const double tol = 1e-10;
    bool pass = true;
    double worst_res = 0.0, worst_order = 1e30;
    std::string what;
    for (const Problem& pr : problems) {
        double errs[2];
        for (int k = 0; k < 2; ++k) {
            const double h = (k == 0) ? 1e-3 : 5e-4;
            const TimeGrid g(0.0, h, static_cast<std::size_t>(std::llround(1.0 / h)));
            auto problem = scalar_problem(0.0, 1.0, pr.u0, pr.alpha, pr.rhs, 10.0, 10.0);
            const volterra::SolveReport rep = volterra::picard_solve(problem, g, tol, 300);
            worst_res = std::max(worst_res, rep.residual);
            if (rep.residual > tol) {
                pass = false;
                what = std::string(pr.name) + ": residual " + eng(rep.residual);
            }
            const SampledPath dc = caputo_derivative(rep.solution, FracOrder(pr.alpha));
            std::vector<double> rhs_vals(g.n_nodes());
            for (std::size_t j = 0; j < g.n_nodes(); ++j)
                rhs_vals[j] = pr.rhs(g.node(j), rep.solution.value(j)).as_scalar();
            errs[k] = window_sup(difference(dc, SampledPath::scalar(g, std::move(rhs_vals))),
                                 0.05, true);
        }
        const double order = std::log2(errs[0] / errs[1]);
        worst_order = std::min(worst_order, order);
        if (!(order >= 0.5)) {
            pass = false;
            what = std::string(pr.name) + ": order " + eng(order);
        }
    }
    std::string detail =
        "max residual " + eng(worst_res) + ", min equivalence order " + eng(worst_order);
    if (!pass) detail += "; " + what;
    return finish(3, "Volterra equivalence", pass, detail, timer, 30.0);
}

// ---------------------------------------------------------------------- C4

CriterionResult criterion_contraction() {
    Timer timer;
    const FracOrder alpha(0.5);
    const double delta = volterra::uniqueness_delta(10.0, 1.0, 2.0, 1.0, 0.5, alpha);
    auto problem = scalar_problem(
        0.0, 10.0, 1.0, 0.5,
        [](double, const StateVec& u) { return StateVec::scalar(u.as_scalar()); }, 1.0, 2.0,
        1.0);
    const double cstar = volterra::contraction_estimate(problem, delta, alpha);
    const TimeGrid g(0.0, delta / 400.0, 400);
    const volterra::SolveReport rep = volterra::picard_solve(problem, g, 1e-12, 200);
    const bool pass = std::abs(cstar - 0.5) <= 1e-12 && rep.observed_ratio <= 0.55;
    return finish(4, "contraction certificate",
                  pass, "C* = " + eng(cstar) + ", observed ratio " + eng(rep.observed_ratio),
                  timer, 5.0);
}

// ---------------------------------------------------------------------- C5

CriterionResult criterion_mittag_leffler() {
    Timer timer;
    const TimeGrid g(0.0, 1e-3, 1000);
    auto problem = scalar_problem(
        0.0, 1.0, 1.0, 0.5,
        [](double, const StateVec& u) { return StateVec::scalar(-u.as_scalar()); }, 2.0, 3.0);
    const volterra::SolveReport rep = volterra::picard_solve(problem, g, 1e-10, 300);
    double err = 0.0;
    for (std::size_t j = 0; j < g.n_nodes(); ++j) {
        const double ref =
            mittag_leffler(FracOrder(0.5), -std::sqrt(g.node(j)), 100).value;
        err = std::max(err, std::abs(rep.solution.scalar_value(j) - ref));
    }
    return finish(5, "Mittag-Leffler oracle", err <= 1e-3, "sup err " + eng(err), timer, 5.0);
}

// ---------------------------------------------------------------------- C6

CriterionResult criterion_interval_arithmetic() {
    Timer timer;
    const double pi = std::numbers::pi;
    bool pass = true;
    std::string what;

    const double d = volterra::existence_delta(10.0, 1.0, 2.0, FracOrder(0.5));
    if (std::abs(d - pi / 16.0) > 1e-12) {
        pass = false;
        what = "existence_delta off by " + eng(std::abs(d - pi / 16.0));
    }

    plap::PLapProblem pb;
    pb.p = 2.0;
    pb.alpha = FracOrder(0.5);
    pb.T = 1.0;
    pb.N = 32;
    pb.beta = 1.0;
    pb.r = expr::parse("1");
    pb.F = expr::parse("0");
    pb.phi = expr::parse("exp(1-x)");  // c0 profile with ||phi|| = 1
    pb.psi = expr::parse("0");
    const plap::Certificate cert = plap::certify(pb);
    const double expect[][2] = {{cert.lambda, 1.0},       {cert.P, 0.0},  {cert.Q, 4.0},
                                {cert.M, 8.0},            {cert.delta, pi / 256.0},
                                {cert.C1, 4.0},           {cert.C2, 8.0}};
    for (const auto& e : expect)
        if (std::abs(e[0] - e[1]) > 1e-12) {
            pass = false;
            what = "certificate field off by " + eng(std::abs(e[0] - e[1]));
        }
    return finish(6, "existence/uniqueness interval arithmetic", pass,
                  pass ? "delta = " + eng(d) + ", certificate exact" : what, timer, 1.0);
}

// ---------------------------------------------------------------------- C7

CriterionResult criterion_mnc_suite() {
    Timer timer;
    const std::vector<mnc::SetFamily> fams = mnc::stock_families();
    bool pass = true;
    std::string what;

    const mnc::AxiomReport hrep = mnc::axiom_suite(mnc::Measure::hausdorff, fams);
    if (!hrep.all_pass()) {
        pass = false;
        what = "hausdorff axiom battery failed";
    }
    const mnc::AxiomReport srep = mnc::axiom_suite(mnc::Measure::sup_norm, fams);
    for (const mnc::AxiomCheck& c : srep.checks) {
        if (c.axiom == "singleton") {
            if (c.pass || c.witness.empty()) {
                pass = false;
                what = "sup-norm singleton check should fail with a witness";
            }
        } else if (!c.pass) {
            pass = false;
            what = "sup-norm " + c.axiom + " unexpectedly failed";
        }
    }

    const double chi_e = mnc::hausdorff_c0(mnc::scaled_basis(mnc::BasisCoef::constant(1.0))).value;
    const double chi_ej =
        mnc::hausdorff_c0(mnc::scaled_basis(mnc::BasisCoef::power_decay(1.0, 1.0))).value;
    if (chi_e != 1.0 || chi_ej != 0.0) {
        pass = false;
        what = "chi values not exact";
    }
    return finish(7, "MNC axiom battery and chi values", pass,
                  pass ? "hausdorff passes, sup-norm fails only singleton" : what, timer, 1.0);
}

// ---------------------------------------------------------------------- C8

CriterionResult criterion_kernel_inequality() {
    Timer timer;
    const TimeGrid g(0.0, 1e-3, 1000);
    bool pass = true;
    std::string what;
    int checked = 0;
    for (const mnc::KernelCorpusEntry& entry : mnc::kernel_corpus())
        for (double a : {0.25, 0.5, 0.75, 1.0}) {
            const auto fam = mnc::PathFamily::parametric(
                SampledPath::sample_scalar(g, entry.g),
                mnc::scaled_basis(mnc::BasisCoef::constant(1.0)));
            const mnc::KernelCheck chk =
                mnc::kernel_integral_check(fam, FracOrder(a), g.n_steps());
            ++checked;
            if (!chk.holds) {
                pass = false;
                what = std::string("fails for g=") + entry.name + " alpha=" + eng(a);
            }
            if (entry.sign_changing && !(chk.rhs - chk.lhs > 1e-9)) {
                pass = false;
                what = std::string("not strict for g=") + entry.name + " alpha=" + eng(a);
            }
        }
    return finish(8, "singular-kernel inequality", pass,
                  pass ? std::to_string(checked) + " combinations hold" : what, timer, 10.0);
}

// ---------------------------------------------------------------------- C9

CriterionResult criterion_kamke() {
    Timer timer;
    bool pass = true;
    std::string what;

    kamke::KamkeSpec spec;
    spec.H = 1.0;
    spec.lambda = 1.0;
    spec.alpha = FracOrder(0.5);
    spec.a = 0.0;
    spec.b = 1.0;
    const TimeGrid g(0.0, 1e-3, 1000);

    {
        const double eps[] = {1.0};
        const kamke::ComparisonFamily fam = kamke::comparison_family(spec, eps, g);
        double err = 0.0;
        for (std::size_t j = 0; j < g.n_nodes(); ++j) {
            const double ref =
                mittag_leffler(FracOrder(0.5), std::sqrt(g.node(j)), 100).value;
            err = std::max(err, std::abs(fam.members[0].scalar_value(j) - ref));
        }
        if (err > 1e-3) {
            pass = false;
            what = "linear comparison vs oracle err " + eng(err);
        }
    }
    {
        const double eps[] = {1e-2, 1e-3, 1e-4, 1e-5};
        const kamke::StabilityScan scan = kamke::stability_scan(spec, eps, g);
        const auto [lo, hi] = std::minmax_element(scan.ratios.begin(), scan.ratios.end());
        if (*hi - *lo > 1e-8) {
            pass = false;
            what = "ratios vary by " + eng(*hi - *lo);
        }
    }
    {
        kamke::KamkeSpec super = spec;
        super.lambda = 2.0;
        super.H = 0.5;
        const SampledPath zero = SampledPath::sample_scalar(g, [](double) { return 0.0; });
        if (!kamke::candidate_violation(super, zero).admissible) {
            pass = false;
            what = "u = 0 should be admissible";
        }
        const SampledPath cands[] = {
            SampledPath::sample_scalar(g, [](double t) { return std::pow(t, 0.25); }),
            SampledPath::sample_scalar(g, [](double) { return 0.5; }),
            SampledPath::sample_scalar(g, [](double t) { return t; }),
            SampledPath::sample_scalar(g, [](double t) { return t * t; }),
        };
        for (const SampledPath& u : cands)
            if (kamke::candidate_violation(super, u).admissible) {
                pass = false;
                what = "nonzero candidate accepted";
            }
    }
    return finish(9, "Kamke comparison machinery", pass, pass ? "oracle, scan and corpus agree" : what,
                  timer, 30.0);
}

// --------------------------------------------------------------------- C10

std::vector<StateVec> rk4_oracle(const volterra::Rhs& rhs, const StateVec& u0, double h,
                                 std::size_t steps) {
    std::vector<StateVec> out;
    out.reserve(steps + 1);
    out.push_back(u0);
    StateVec y = u0;
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = h * static_cast<double>(s);
        const StateVec k1 = rhs(t, y);
        const StateVec k2 = rhs(t + h / 2, y + k1 * (h / 2));
        const StateVec k3 = rhs(t + h / 2, y + k2 * (h / 2));
        const StateVec k4 = rhs(t + h, y + k3 * h);
        y = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        out.push_back(y);
    }
    return out;
}

CriterionResult criterion_plap_reductions() {
    Timer timer;
    bool pass = true;
    std::string what;
    std::mt19937 rng(20240817);

    plap::PLapProblem pb;
    pb.p = 2.0;
    pb.alpha = FracOrder(1.0);
    pb.T = 1.0;
    pb.N = 16;
    pb.beta = 1.0;
    pb.r = expr::parse("1");
    pb.F = expr::parse("0");
    pb.phi = expr::parse("0");
    pb.psi = expr::parse("0");

    {
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        for (int trial = 0; trial < 200 && pass; ++trial) {
            std::vector<double> vals(16);
            for (double& v : vals) v = dist(rng);
            const StateVec u(vals);
            for (int n = 2; n <= pb.N - 1; ++n) {
                const double got = plap::lambda_np(0.3, u, 0.0, n, pb);
                const double want = vals[n] - 2.0 * vals[n - 1] + vals[n - 2];
                if (std::abs(got - want) > 1e-15 * std::max(1.0, std::abs(want))) {
                    pass = false;
                    what = "stencil deviates from the discrete Laplacian";
                }
            }
        }
    }
    {
        const volterra::Rhs rhs = plap::assemble_rhs(pb);
        std::vector<double> e1(16, 0.0);
        e1[0] = 1.0;
        const StateVec u0(e1);
        // [0, 0.125]: the existence horizon of the worked p = 2 bound at alpha = 1
        const TimeGrid g(0.0, 1e-3, 125);
        volterra::IVProblem ivp;
        ivp.a = 0.0;
        ivp.bar_delta = 1.0;
        ivp.u0 = u0;
        ivp.alpha = FracOrder(1.0);
        ivp.rhs = rhs;
        ivp.beta = 1.0;
        ivp.bound_M = 8.0;
        const volterra::SolveReport rep = volterra::picard_solve(ivp, g, 1e-12, 200);
        const std::size_t refine = 20;
        const auto ref = rk4_oracle(rhs, u0, g.h() / static_cast<double>(refine),
                                    g.n_steps() * refine);
        double err = 0.0;
        for (std::size_t j = 0; j <= g.n_steps(); ++j)
            err = std::max(err, (rep.solution.value(j) - ref[j * refine]).sup_norm());
        if (err > 1e-3) {
            pass = false;
            what = "alpha=1 trajectory vs classical integrator err " + eng(err);
        }
    }
    {
        std::uniform_real_distribution<double> xdist(-10.0, 10.0);
        std::uniform_real_distribution<double> pdist(2.0, 5.0);
        std::uniform_real_distribution<double> zpad(0.0, 3.0);
        for (int trial = 0; trial < 10000; ++trial) {
            const double x = xdist(rng), y = xdist(rng), p = pdist(rng);
            const double z = std::max(std::abs(x), std::abs(y)) + zpad(rng);
            const double lhs = std::abs(plap::phi_p(x - y, p));
            const double rhs = std::pow(2.0, p - 1.0) * std::pow(z, p - 1.0);
            if (lhs > rhs * (1.0 + 1e-12)) {
                pass = false;
                what = "growth bound violated";
            }
        }
    }
    return finish(10, "p-Laplacian reductions", pass,
                  pass ? "stencil, classical-oracle and growth checks hold" : what, timer, 60.0);
}

// --------------------------------------------------------------------- C11

CriterionResult criterion_truncation() {
    Timer timer;
    plap::PLapProblem pb;
    pb.p = 2.0;
    pb.alpha = FracOrder(0.5);
    pb.T = 1.0;
    pb.N = 8;
    pb.beta = 1.0;
    pb.r = expr::parse("1");
    pb.F = expr::parse("0");
    pb.phi = expr::parse("exp(-0.6931471805599453*x)");  // 2^(-x)
    pb.psi = expr::parse("0");

    const double delta = plap::certify(pb).delta;
    const TimeGrid g(0.0, 1e-3, static_cast<std::size_t>(std::floor(delta / 1e-3)));
    const int ns[] = {8, 16, 32};
    const auto rows = plap::truncation_study(pb, ns, g, 1e-10);
    const bool monotone = rows.size() == 2 && rows[1].sup_diff <= rows[0].sup_diff * (1.0 + 1e-9);
    const bool meaningful = rows.size() == 2 && rows[0].sup_diff > 0.0;
    return finish(11, "truncation behavior", monotone && meaningful,
                  "d(8,16) = " + eng(rows[0].sup_diff) + ", d(16,32) = " + eng(rows[1].sup_diff),
                  timer, 60.0);
}

CriterionResult guarded(CriterionResult (*fn)(), int id, const char* name) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return {id, name, false, std::string("exception: ") + e.what(), 0.0};
    }
}

}  // namespace

std::vector<CriterionResult> run_acceptance() {
    std::vector<CriterionResult> out;
    out.push_back(guarded(criterion_operator_identities, 1, "operator identities"));
    out.push_back(guarded(criterion_closed_forms, 2, "closed-form fractional calculus"));
    out.push_back(guarded(criterion_equivalence, 3, "Volterra equivalence"));
    out.push_back(guarded(criterion_contraction, 4, "contraction certificate"));
    out.push_back(guarded(criterion_mittag_leffler, 5, "Mittag-Leffler oracle"));
    out.push_back(guarded(criterion_interval_arithmetic, 6, "interval arithmetic"));
    out.push_back(guarded(criterion_mnc_suite, 7, "MNC suite"));
    out.push_back(guarded(criterion_kernel_inequality, 8, "kernel inequality"));
    out.push_back(guarded(criterion_kamke, 9, "Kamke machinery"));
    out.push_back(guarded(criterion_plap_reductions, 10, "p-Laplacian reductions"));
    out.push_back(guarded(criterion_truncation, 11, "truncation behavior"));
    return out;
}

}  // namespace fracdyn::cli
