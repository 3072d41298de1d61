#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fracdyn/config.hpp"
#include "fracdyn/expr.hpp"

using namespace fracdyn;
using namespace fracdyn::expr;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("parse and evaluate basic expressions") {
    CHECK(eval(parse("2*t + exp(-x)"), 1.0, 0.0) == doctest::Approx(3.0));
    CHECK(eval(parse("sin(0)"), 0.0, 0.0) == 0.0);
    CHECK(eval(parse("abs(0-3)"), 0.0, 0.0) == 3.0);
    CHECK(eval(parse("(1+2)*(3-x)"), 0.0, 1.0) == 6.0);
    CHECK(eval(parse("cos(t)^2 + sin(t)^2"), 0.7, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("operator precedence and associativity") {
    CHECK(eval(parse("-2^2"), 0.0, 0.0) == -4.0);       // ^ binds tighter than unary -
    CHECK(eval(parse("2^-2"), 0.0, 0.0) == 0.25);       // unary - allowed in the exponent
    CHECK(eval(parse("2^3^2"), 0.0, 0.0) == 512.0);     // right-associative
    CHECK(eval(parse("2+3*4"), 0.0, 0.0) == 14.0);
    CHECK(eval(parse("2-3-4"), 0.0, 0.0) == -5.0);      // left-associative
    CHECK(eval(parse("12/3/2"), 0.0, 0.0) == 2.0);
}

TEST_CASE("syntax errors carry a position") {
    try {
        parse("t +");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 3);
    }
    CHECK_THROWS_AS(parse("2*(t"), ParseError);
    CHECK_THROWS_AS(parse("foo(1)"), ParseError);
    CHECK_THROWS_AS(parse("1 2"), ParseError);
    CHECK_THROWS_AS(parse("exp 3"), ParseError);
}

TEST_CASE("evaluation errors") {
    CHECK_THROWS_AS(eval(parse("1/(t-1)"), 1.0, 0.0), EvalError);
    CHECK_THROWS_AS(eval(parse("t^(0-1)"), 0.0, 0.0), EvalError);
    CHECK_THROWS_AS(eval(parse("(0-2)^0.5"), 0.0, 0.0), EvalError);
}

TEST_CASE("round trip: printing preserves evaluation") {
    const char* sources[] = {
        "2*t + exp(-x)", "sin(2*t)*cos(x/3)", "-t^2 + 4*x - 1", "abs(t-0.5)^1.5",
        "exp(1-x)*(2+sin(t))", "1/(x+2)", "t^2^2", "-(t*x)",
    };
    for (const char* src : sources) {
        const Expr e = parse(src);
        const Expr back = parse(to_string(e));
        for (int i = 0; i < 100; ++i) {
            const double t = 0.01 * i + 0.001;
            const double x = 0.07 * i;
            const double a = eval(e, t, x);
            const double b = eval(back, t, x);
            CHECK(b == doctest::Approx(a).epsilon(1e-15));
        }
    }
}

namespace {

// Random source generator over the total-on-R subset of the grammar (no
// division, no powers), so every generated expression evaluates everywhere.
std::string random_source(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 7);
    std::uniform_real_distribution<double> num(-4.0, 4.0);
    switch (pick(rng)) {
        case 0: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.3f", std::abs(num(rng)));
            return buf;
        }
        case 1: return "t";
        case 2: return "x";
        case 3: return "(" + random_source(rng, depth - 1) + "+" + random_source(rng, depth - 1) + ")";
        case 4: return "(" + random_source(rng, depth - 1) + "-" + random_source(rng, depth - 1) + ")";
        case 5: return "(" + random_source(rng, depth - 1) + "*" + random_source(rng, depth - 1) + ")";
        case 6: return "-" + random_source(rng, depth - 1);
        default: {
            const char* fns[] = {"sin", "cos", "abs"};
            std::uniform_int_distribution<int> f(0, 2);
            return std::string(fns[f(rng)]) + "(" + random_source(rng, depth - 1) + ")";
        }
    }
}

}  // namespace

TEST_CASE("round trip holds on randomly generated expressions") {
    std::mt19937 rng(991);
    for (int trial = 0; trial < 200; ++trial) {
        const std::string src = random_source(rng, 4);
        CAPTURE(src);
        const Expr e = parse(src);
        const Expr back = parse(to_string(e));
        for (int i = 0; i < 20; ++i) {
            const double t = 0.05 * i;
            const double x = 0.13 * i - 1.0;
            CHECK(eval(back, t, x) == doctest::Approx(eval(e, t, x)).epsilon(1e-15));
        }
    }
}

TEST_CASE("interval bounds on the catalog atoms") {
    const Interval tr{0.0, 1.0};
    const Interval xr{1.0, kInf};

    const Interval b1 = bound(parse("exp(1-x)"), tr, xr);
    CHECK(b1.lo == 0.0);
    CHECK(b1.hi == 1.0);

    const Interval b2 = bound(parse("sin(x)"), tr, xr);
    CHECK(b2.lo == -1.0);
    CHECK(b2.hi == 1.0);

    const Interval b3 = bound(parse("sin(t)"), tr, Interval{0.0, 0.0});
    CHECK(b3.lo == 0.0);
    CHECK(b3.hi == doctest::Approx(std::sin(1.0)));

    const Interval b4 = bound(parse("2+cos(t)"), tr, xr);
    CHECK(b4.lo >= 2.0);
    CHECK(b4.hi <= 3.0);

    CHECK(sup_abs_bound(parse("1/2"), tr, xr) == 0.5);
    CHECK_THROWS_AS(sup_abs_bound(parse("x"), tr, xr), BoundUnsupported);
    CHECK_THROWS_AS(bound(parse("1/x"), tr, Interval{0.0, kInf}), BoundUnsupported);
    CHECK_THROWS_AS(bound(parse("t^x"), tr, xr), BoundUnsupported);
}

TEST_CASE("x-decay certification") {
    CHECK(decays_in_x(parse("0"), 1.0));
    CHECK(decays_in_x(parse("exp(1-x)"), 1.0));
    CHECK(decays_in_x(parse("exp(-0.6931471805599453*x)"), 1.0));
    CHECK(decays_in_x(parse("exp(-x)*sin(t)"), 1.0));
    CHECK(decays_in_x(parse("exp(-2*x)*(1+cos(t))"), 1.0));
    CHECK(decays_in_x(parse("exp(-x) + 0"), 1.0));
    CHECK(decays_in_x(parse("exp(-x)^2"), 1.0));
    CHECK(decays_in_x(parse("0*sin(x)"), 1.0));

    CHECK_FALSE(decays_in_x(parse("1"), 1.0));
    CHECK_FALSE(decays_in_x(parse("sin(x)"), 1.0));
    CHECK_FALSE(decays_in_x(parse("exp(x)"), 1.0));
    CHECK_FALSE(decays_in_x(parse("exp(-x)+1"), 1.0));
    CHECK_FALSE(decays_in_x(parse("exp(t-x^2)"), 1.0));  // slope analysis is affine only
}

TEST_CASE("config: minimal file fills the documented defaults") {
    const cli::RunConfig c = cli::parse_config(
        R"json({"alpha": 0.5, "p": 2, "T": 1, "N": 32, "phi": "exp(-0.6931471805599453*x)"})json");
    CHECK(c.alpha == 0.5);
    CHECK(c.h == 1e-3);
    CHECK(c.tol == 1e-8);
    CHECK(c.max_iter == 200);
    CHECK(c.beta == 1.0);
    CHECK(c.r == "1");
    CHECK(c.psi == "0");
}

TEST_CASE("config: validation errors name the field") {
    CHECK_THROWS_WITH_AS(cli::parse_config(R"json({"alpha": 1.5})json"),
                         doctest::Contains("alpha must lie in (0,1]"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(cli::parse_config(R"json({"alpha": 0.5, "p": 1.5})json"),
                         doctest::Contains("p must be >= 2"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(cli::parse_config(R"json({"p": 2})json"),
                         doctest::Contains("config.alpha"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_config("not json"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(cli::parse_config(R"json({"alpha": 0.5, "h": -1})json"),
                         doctest::Contains("config.h"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(cli::parse_config(R"json({"alpha": 0.5, "N": "many"})json"),
                         doctest::Contains("config.N"), std::invalid_argument);
}
