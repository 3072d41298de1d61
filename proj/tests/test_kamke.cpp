#include <doctest.h>

#include <cmath>

#include "fracdyn/kamke.hpp"

using namespace fracdyn;
using namespace fracdyn::kamke;

namespace {

KamkeSpec make_spec(double H, double lambda, double alpha, double b = 1.0) {
    KamkeSpec s;
    s.H = H;
    s.lambda = lambda;
    s.alpha = FracOrder(alpha);
    s.a = 0.0;
    s.b = b;
    return s;
}

}  // namespace

TEST_CASE("eval_kamke: anchors and domain checks") {
    CHECK(eval_kamke(make_spec(3.0, 2.0, 0.5), 0.3, 0.0) == 0.0);
    CHECK(eval_kamke(make_spec(3.0, 2.0, 0.5), 0.3, 2.0) == 12.0);
    CHECK(eval_kamke(make_spec(1.0, 1.0, 0.5), 0.7, 0.42) == 0.42);
    CHECK_THROWS_AS(eval_kamke(make_spec(1.0, 2.0, 0.5), 0.5, -0.1), std::domain_error);
    CHECK_THROWS_AS(eval_kamke(make_spec(1.0, 2.0, 0.5), 2.0, 0.1), std::domain_error);
}

TEST_CASE("eval_kamke: time-varying coefficient interpolates the path") {
    KamkeSpec s = make_spec(0.0, 1.0, 0.5);
    const TimeGrid g(0.0, 0.25, 4);
    s.h_path = SampledPath::sample_scalar(g, [](double t) { return 1.0 + t; });
    CHECK(eval_kamke(s, 0.25, 1.0) == doctest::Approx(1.25));
    CHECK(eval_kamke(s, 0.375, 1.0) == doctest::Approx(1.375));
}

TEST_CASE("comparison_family: eps = 0 gives the zero path") {
    const double eps[] = {0.0};
    const TimeGrid g(0.0, 0.01, 100);
    const ComparisonFamily fam = comparison_family(make_spec(1.0, 2.0, 0.5), eps, g);
    for (std::size_t j = 0; j < fam.members[0].n_nodes(); ++j)
        CHECK(fam.members[0].scalar_value(j) == 0.0);
}

TEST_CASE("comparison_family: exponential oracle for the linear spec at alpha = 1") {
    const double eps[] = {1.0};
    const TimeGrid g(0.0, 1e-3, 1000);
    const ComparisonFamily fam = comparison_family(make_spec(1.0, 1.0, 1.0), eps, g);
    CHECK_FALSE(fam.interval_shrunk);
    double err = 0.0;
    for (std::size_t j = 0; j < g.n_nodes(); ++j)
        err = std::max(err, std::abs(fam.members[0].scalar_value(j) - std::exp(g.node(j))));
    CHECK(err <= 1e-3);
}

TEST_CASE("comparison_family: Mittag-Leffler oracle for the linear spec at alpha = 1/2") {
    const double eps[] = {1.0};
    const TimeGrid g(0.0, 1e-3, 1000);
    const ComparisonFamily fam = comparison_family(make_spec(1.0, 1.0, 0.5), eps, g);
    double err = 0.0;
    for (std::size_t j = 0; j < g.n_nodes(); ++j) {
        const double ref = mittag_leffler(FracOrder(0.5), std::sqrt(g.node(j)), 100).value;
        err = std::max(err, std::abs(fam.members[0].scalar_value(j) - ref));
    }
    CHECK(err <= 1e-3);
}

TEST_CASE("comparison_family: members are ordered in eps and pinned at the start") {
    const double eps[] = {1e-3, 1e-2, 1e-1};
    const TimeGrid g(0.0, 1e-3, 1000);
    const ComparisonFamily fam = comparison_family(make_spec(1.0, 1.0, 0.5), eps, g);
    for (std::size_t i = 0; i < 3; ++i) CHECK(fam.members[i].scalar_value(0) == eps[i]);
    for (std::size_t j = 0; j < fam.members[0].n_nodes(); ++j) {
        CHECK(fam.members[0].scalar_value(j) <=
              fam.members[1].scalar_value(j) + 1e-9);
        CHECK(fam.members[1].scalar_value(j) <=
              fam.members[2].scalar_value(j) + 1e-9);
    }
}

TEST_CASE("comparison_family: members satisfy the integral identity") {
    const double eps[] = {0.5};
    const TimeGrid g(0.0, 1e-3, 1000);
    const KamkeSpec spec = make_spec(1.0, 1.0, 0.5);
    const ComparisonFamily fam = comparison_family(spec, eps, g, 1e-10);

    volterra::IVProblem p;
    p.a = 0.0;
    p.bar_delta = 1.0;
    p.u0 = StateVec::scalar(0.5);
    p.alpha = FracOrder(0.5);
    p.beta = 100.0;
    p.bound_M = 100.0;
    p.rhs = [spec](double t, const StateVec& u) {
        return StateVec::scalar(eval_kamke(spec, t, u.as_scalar()));
    };
    CHECK(volterra::volterra_residual(fam.members[0], p) <= 1e-9);
}

TEST_CASE("stability_scan: linear equation scales exactly") {
    const double eps[] = {1e-2, 1e-3, 1e-4, 1e-5};
    const TimeGrid g(0.0, 1e-3, 1000);
    const StabilityScan scan = stability_scan(make_spec(1.0, 1.0, 0.5), eps, g);
    REQUIRE(scan.ratios.size() == 4);
    const double expected = mittag_leffler(FracOrder(0.5), 1.0, 150).value;
    for (double r : scan.ratios) {
        CHECK(std::abs(r - scan.ratios[0]) <= 1e-8);
        CHECK(r == doctest::Approx(expected).epsilon(1e-3));
    }
    CHECK(scan.A_hat == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("stability_scan: vanishing coefficient keeps every ratio at one") {
    const double eps[] = {1e-2, 1e-3, 1e-4};
    const TimeGrid g(0.0, 0.01, 100);
    const StabilityScan scan = stability_scan(make_spec(0.0, 1.0, 0.5), eps, g);
    for (double r : scan.ratios) CHECK(r == 1.0);
    CHECK(scan.A_hat == 1.0);
}

TEST_CASE("stability_scan: superlinear ratios stay bounded and decrease toward one") {
    const double eps[] = {1e-2, 1e-3, 1e-4, 1e-5};
    const TimeGrid g(0.0, 1e-3, 100);  // [0, 0.1]
    const StabilityScan scan = stability_scan(make_spec(1.0, 2.0, 0.5), eps, g);
    REQUIRE(scan.ratios.size() == 4);
    for (std::size_t i = 1; i < scan.ratios.size(); ++i)
        CHECK(scan.ratios[i] <= scan.ratios[i - 1] + 1e-12);
    CHECK(scan.ratios.back() >= 1.0 - 1e-12);
    CHECK(scan.A_hat <= 2.0);
}

TEST_CASE("superlinear solve agrees with a fine-grid reference") {
    const double eps[] = {1e-2};
    const TimeGrid coarse(0.0, 1e-3, 100);
    const TimeGrid fine(0.0, 1e-4, 1000);
    const KamkeSpec spec = make_spec(1.0, 2.0, 0.5);
    const ComparisonFamily a = comparison_family(spec, eps, coarse, 1e-12);
    const ComparisonFamily b = comparison_family(spec, eps, fine, 1e-12);
    double err = 0.0;
    for (std::size_t j = 0; j <= coarse.n_steps(); ++j)
        err = std::max(err, std::abs(a.members[0].scalar_value(j) -
                                     b.members[0].scalar_value(10 * j)));
    CHECK(err <= 1e-6);
}

TEST_CASE("comparison_family: long superlinear horizons shrink with a report") {
    const double eps[] = {1.0};
    const TimeGrid g(0.0, 1e-3, 1000);  // [0, 1] with eps = 1 and H = 1, lambda = 2
    const ComparisonFamily fam = comparison_family(make_spec(1.0, 2.0, 0.5), eps, g);
    CHECK(fam.interval_shrunk);
    CHECK(fam.solved_delta < 1.0);
    CHECK(fam.members[0].grid().length() == doctest::Approx(fam.solved_delta));
}

TEST_CASE("candidate_violation: zero is admissible, corpus candidates are not") {
    const TimeGrid g(0.0, 1e-3, 1000);
    const KamkeSpec spec = make_spec(0.5, 2.0, 0.5);

    const ViolationReport zero = candidate_violation(
        spec, SampledPath::sample_scalar(g, [](double) { return 0.0; }));
    CHECK(zero.admissible);
    CHECK(zero.ineq_margin == 0.0);
    CHECK(zero.limit_estimate == 0.0);

    const ViolationReport constant = candidate_violation(
        spec, SampledPath::sample_scalar(g, [](double) { return 0.5; }));
    CHECK_FALSE(constant.admissible);
    CHECK(constant.ineq_margin > 0.0);  // the integral term vanishes near t = a

    const ViolationReport spike = candidate_violation(
        spec, SampledPath::sample_scalar(g, [](double t) { return std::pow(t, 0.25); }));
    CHECK_FALSE(spike.admissible);
    CHECK(spike.limit_estimate > 1.0);

    CHECK_THROWS_AS(candidate_violation(
                        spec, SampledPath::sample_scalar(g, [](double t) { return t - 0.5; })),
                    std::domain_error);
}

TEST_CASE("candidate_violation: quotient estimate grows under grid refinement") {
    const KamkeSpec spec = make_spec(0.1, 2.0, 0.5);
    double estimates[2];
    for (int k = 0; k < 2; ++k) {
        const double h = (k == 0) ? 1e-2 : 5e-3;
        const TimeGrid g(0.0, h, static_cast<std::size_t>(std::llround(1.0 / h)));
        estimates[k] = candidate_violation(
                           spec, SampledPath::sample_scalar(
                                     g, [](double t) { return std::pow(t, 0.25); }))
                           .limit_estimate;
    }
    CHECK(estimates[1] > estimates[0]);
}

TEST_CASE("KamkeSpec validation") {
    CHECK_THROWS_AS(make_spec(1.0, 0.5, 0.5).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_spec(-1.0, 1.0, 0.5).validate(), std::invalid_argument);
}
