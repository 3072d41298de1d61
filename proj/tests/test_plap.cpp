#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fracdyn/plap.hpp"

using namespace fracdyn;
using namespace fracdyn::plap;

namespace {

constexpr double kPi = std::numbers::pi;

PLapProblem heat_problem(double p = 2.0, double alpha = 0.5, int N = 32,
                         const std::string& phi = "exp(1-x)", const std::string& r = "1") {
    PLapProblem pb;
    pb.p = p;
    pb.alpha = FracOrder(alpha);
    pb.T = 1.0;
    pb.N = N;
    pb.beta = 1.0;
    pb.r = expr::parse(r);
    pb.F = expr::parse("0");
    pb.phi = expr::parse(phi);
    pb.psi = expr::parse("0");
    return pb;
}

}  // namespace

TEST_CASE("phi_p: identity at p = 2, odd powers beyond") {
    for (double x : {-3.0, 0.0, 7.0}) CHECK(phi_p(x, 2.0) == x);
    CHECK(phi_p(-2.0, 3.0) == -4.0);
    CHECK(phi_p(0.0, 4.7) == 0.0);
    CHECK(phi_p(2.0, 3.0) == 4.0);
    CHECK_THROWS_AS(phi_p(1.0, 1.5), std::domain_error);
}

TEST_CASE("lambda_np: discrete Laplacian at p = 2 and cubic stencil at p = 3") {
    PLapProblem pb = heat_problem();
    pb.N = 4;
    const StateVec u(std::vector<double>{1.0, 2.0, 4.0, 0.0});
    CHECK(lambda_np(0.1, u, 0.0, 2, pb) == doctest::Approx(1.0).epsilon(1e-15));

    const StateVec flat(std::vector<double>{2.0, 2.0, 2.0, 2.0});
    CHECK(lambda_np(0.1, flat, 2.0, 1, pb) == 0.0);
    CHECK(lambda_np(0.1, flat, 2.0, 2, pb) == 0.0);

    PLapProblem pb3 = heat_problem(3.0);
    pb3.N = 4;
    CHECK(lambda_np(0.1, u, 0.0, 2, pb3) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("lambda_np: truncation range is enforced") {
    PLapProblem pb = heat_problem();
    pb.N = 4;
    const StateVec u(std::vector<double>{1.0, 2.0, 4.0, 0.0});
    CHECK_THROWS_AS(lambda_np(0.1, u, 0.0, 0, pb), std::out_of_range);
    CHECK_THROWS_AS(lambda_np(0.1, u, 0.0, 4, pb), std::out_of_range);
}

TEST_CASE("assemble_rhs: zero data is a fixed point of the stencil") {
    const PLapProblem pb = heat_problem();
    const volterra::Rhs rhs = assemble_rhs(pb);
    const StateVec zero(std::vector<double>(32, 0.0));
    CHECK(rhs(0.3, zero).sup_norm() == 0.0);
}

TEST_CASE("assemble_rhs: p = 2 gives the classical semi-discrete heat stencil") {
    const PLapProblem pb = heat_problem(2.0, 0.5, 8);
    const volterra::Rhs rhs = assemble_rhs(pb);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(8);
    for (double& x : v) x = dist(rng);
    const StateVec u(v);
    const StateVec f = rhs(0.2, u);
    for (int n = 1; n <= 8; ++n) {
        const double um = (n == 1) ? 0.0 : v[n - 2];
        const double up = (n == 8) ? 0.0 : v[n];
        CHECK(f[n - 1] == doctest::Approx(up - 2.0 * v[n - 1] + um).epsilon(1e-14));
    }
}

TEST_CASE("assemble_rhs: a unit entry excites exactly its stencil neighbours") {
    const PLapProblem pb = heat_problem(2.0, 0.5, 8);
    const volterra::Rhs rhs = assemble_rhs(pb);
    std::vector<double> v(8, 0.0);
    v[3] = 1.0;  // component k = 4
    const StateVec f = rhs(0.0, StateVec(v));
    for (int n = 1; n <= 8; ++n) {
        const double expect = (n == 3 || n == 5) ? 1.0 : (n == 4 ? -2.0 : 0.0);
        CHECK(f[n - 1] == expect);
    }
}

TEST_CASE("assemble_rhs: negative coefficient values are rejected at evaluation") {
    PLapProblem pb = heat_problem();
    pb.r = expr::parse("0-1");  // r = -1 < 0
    const volterra::Rhs rhs = assemble_rhs(pb);
    CHECK_THROWS_AS(rhs(0.0, StateVec(std::vector<double>(32, 0.0))), std::domain_error);
}

TEST_CASE("certify: worked p = 2 example") {
    const Certificate c = certify(heat_problem());
    CHECK(c.lambda == 1.0);
    CHECK(c.P == 0.0);
    CHECK(c.Q == 4.0);
    CHECK(c.M == 8.0);
    CHECK(std::abs(c.delta - kPi / 256.0) <= 1e-12);
    CHECK(c.C1 == 4.0);
    CHECK(c.C2 == 8.0);
    CHECK(c.k_rule == "k_1 = 1, k_n = n-1 for n >= 2");
    CHECK(c.psi_zero);
}

TEST_CASE("certify: worked p = 3 example") {
    const Certificate c = certify(heat_problem(3.0, 0.5, 32, "exp(1-x)", "1/2"));
    CHECK(c.lambda == 2.0);
    CHECK(c.Q == 4.0);
    CHECK(c.M == 16.0);
    CHECK(c.C1 == 16.0);
    CHECK(c.C2 == 32.0);
}

TEST_CASE("certify: refusals") {
    // r = 0 and F = 0 degenerate the bound M
    CHECK_THROWS_WITH_AS(certify(heat_problem(2.0, 0.5, 32, "0", "0")),
                         doctest::Contains("degenerate bound"), std::domain_error);
    // phi without certified decay
    CHECK_THROWS_AS(certify(heat_problem(2.0, 0.5, 32, "1")), expr::BoundUnsupported);
    CHECK_THROWS_AS(certify(heat_problem(2.0, 0.5, 32, "sin(x)")), expr::BoundUnsupported);
    // r not provably non-negative
    CHECK_THROWS_AS(certify(heat_problem(2.0, 0.5, 32, "exp(1-x)", "sin(x)")),
                    expr::BoundUnsupported);
}

TEST_CASE("certify: nonzero psi keeps the field set but flags the note") {
    PLapProblem pb = heat_problem();
    pb.psi = expr::parse("sin(t)");
    const Certificate c = certify(pb);
    CHECK_FALSE(c.psi_zero);
    CHECK_FALSE(c.note.empty());
    CHECK(c.M == 8.0);  // constants unchanged from the zero-boundary case
}

TEST_CASE("componentwise growth bound with the certificate data") {
    const PLapProblem pb = heat_problem(3.0, 0.5, 12);
    const Certificate cert = certify(pb);
    const volterra::Rhs rhs = assemble_rhs(pb);
    const StateVec u0 = initial_state(pb);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ball(-1.0, 1.0);
    std::uniform_real_distribution<double> tdist(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(12);
        for (int i = 0; i < 12; ++i) v[i] = u0[i] + ball(rng);  // inside B(u0, beta)
        const StateVec u(v);
        const double t = tdist(rng);
        const StateVec f = rhs(t, u);
        for (int n = 1; n <= 12; ++n) {
            const std::size_t k_n = (n == 1) ? 1 : static_cast<std::size_t>(n - 1);
            double tail_sup = 0.0;
            for (std::size_t i = k_n; i <= 12; ++i)
                tail_sup = std::max(tail_sup, std::abs(u[i - 1]));
            const double q_n = std::pow(2.0, pb.p);  // r = 1 on both half-integers
            const double bound = 0.0 + q_n * std::pow(tail_sup, pb.p - 1.0);
            CHECK(std::abs(f[n - 1]) <= bound * (1.0 + 1e-12) + 1e-12);
        }
    }
    CHECK(cert.Q == 8.0);
}

TEST_CASE("solve_semidiscrete: zero data stays exactly zero") {
    const PLapProblem pb = heat_problem(2.0, 0.5, 8, "0");
    const TimeGrid g(0.0, 1e-3, 20);
    const volterra::SolveReport rep = solve_semidiscrete(pb, g, 1e-10);
    for (std::size_t j = 0; j < rep.solution.n_nodes(); ++j)
        CHECK(rep.solution.value(j).sup_norm() == 0.0);
    CHECK(rep.iterations == 1);
}

TEST_CASE("solve_semidiscrete: certified containment on [0, delta]") {
    const PLapProblem pb = heat_problem();
    const Certificate cert = certify(pb);
    const TimeGrid g(0.0, 1e-3, static_cast<std::size_t>(std::floor(cert.delta / 1e-3)));
    const volterra::SolveReport rep = solve_semidiscrete(pb, g, 1e-10);
    CHECK_FALSE(rep.ball_escape);
    CHECK(rep.warnings.empty());
    CHECK(rep.residual <= 1e-10);
}

TEST_CASE("solve_semidiscrete: warning on uncertified horizon") {
    const PLapProblem pb = heat_problem();
    const TimeGrid g(0.0, 1e-2, 100);  // [0, 1] far beyond delta = pi/256
    const volterra::SolveReport rep = solve_semidiscrete(pb, g, 1e-8, 400);
    REQUIRE_FALSE(rep.warnings.empty());
    CHECK(rep.warnings.back().find("uncertified") != std::string::npos);
}

TEST_CASE("solve_semidiscrete: mass changes only through boundary flux") {
    // summation by parts: sum_n f_n telescopes to the two boundary fluxes
    const PLapProblem pb = heat_problem(2.0, 0.5, 12, "0");
    const volterra::Rhs rhs = assemble_rhs(pb);
    std::vector<double> e4(12, 0.0);
    e4[3] = 1.0;
    const StateVec u0(e4);

    volterra::IVProblem ivp;
    ivp.a = 0.0;
    ivp.bar_delta = 1.0;
    ivp.u0 = u0;
    ivp.alpha = FracOrder(0.5);
    ivp.rhs = rhs;
    ivp.beta = 1.0;
    ivp.bound_M = 8.0;
    const TimeGrid g(0.0, 1e-3, 100);
    const volterra::SolveReport rep = volterra::picard_solve(ivp, g, 1e-10, 200);

    std::vector<double> flux(g.n_nodes());
    std::vector<double> mass(g.n_nodes());
    for (std::size_t j = 0; j < g.n_nodes(); ++j) {
        const StateVec& u = rep.solution.value(j);
        double s = 0.0;
        for (std::size_t c = 0; c < u.dim(); ++c) s += u[c];
        mass[j] = s;
        flux[j] = phi_p(0.0 - u[11], pb.p) - phi_p(u[0] - 0.0, pb.p);
    }
    const SampledPath jflux =
        rl_integral(SampledPath::scalar(g, std::move(flux)), FracOrder(0.5));
    double err = 0.0;
    for (std::size_t j = 0; j < g.n_nodes(); ++j)
        err = std::max(err, std::abs(mass[j] - mass[0] - jflux.scalar_value(j)));
    CHECK(err <= 1e-6);
}

TEST_CASE("truncation_study: decaying profile gives shrinking differences") {
    const PLapProblem pb = heat_problem(2.0, 0.5, 8, "exp(-0.6931471805599453*x)");
    const double delta = certify(pb).delta;
    const TimeGrid g(0.0, 1e-3, static_cast<std::size_t>(std::floor(delta / 1e-3)));
    const int ns[] = {8, 16, 32, 64};  // N = 64 run doubles as the reference
    const auto rows = truncation_study(pb, ns, g, 1e-10);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].sup_diff > 0.0);
    CHECK(rows[1].sup_diff <= rows[0].sup_diff);
    CHECK(rows[2].sup_diff <= rows[1].sup_diff);
}

TEST_CASE("truncation_study: strongly localized profile converges below 1e-6") {
    const PLapProblem pb = heat_problem(2.0, 0.5, 8, "exp(8-4*x)");  // e^-4 at the 3rd site
    const TimeGrid g(0.0, 1e-3, 10);
    const int ns[] = {8, 16};
    const auto rows = truncation_study(pb, ns, g, 1e-10);
    CHECK(rows[0].sup_diff <= 1e-6);
}

TEST_CASE("truncation_study: identical truncations differ by exactly zero") {
    const PLapProblem pb = heat_problem(2.0, 0.5, 8);
    const TimeGrid g(0.0, 1e-3, 10);
    const int ns[] = {8, 8};
    const auto rows = truncation_study(pb, ns, g, 1e-10);
    CHECK(rows[0].sup_diff == 0.0);
}

TEST_CASE("PLapProblem validation") {
    PLapProblem pb = heat_problem();
    pb.p = 1.5;
    CHECK_THROWS_AS(pb.validate(), std::domain_error);
    pb = heat_problem();
    pb.N = 1;
    CHECK_THROWS_AS(pb.validate(), std::invalid_argument);
}

TEST_CASE("solve_semidiscrete: degenerate certificate still solves with a warning") {
    const PLapProblem pb = heat_problem(2.0, 0.5, 8, "0", "0");  // r = F = 0
    const TimeGrid g(0.0, 1e-3, 10);
    const volterra::SolveReport rep = solve_semidiscrete(pb, g, 1e-10);
    REQUIRE_FALSE(rep.warnings.empty());
    CHECK(rep.warnings.back().find("degenerate") != std::string::npos);
    for (std::size_t j = 0; j < rep.solution.n_nodes(); ++j)
        CHECK(rep.solution.value(j).sup_norm() == 0.0);
}
