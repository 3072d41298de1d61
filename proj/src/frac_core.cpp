#include "fracdyn/frac_core.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace fracdyn {

double gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("gamma: argument must be positive, got " + std::to_string(x));
    return std::tgamma(x);
}

namespace {

// Convolution weights d(m), m = 1..n, plus the head weight c0(n).
// The second differences of m^(alpha+1) cancel badly in double for large m,
// so everything is evaluated in long double.
std::vector<double> conv_weights(std::size_t n, double alpha) {
    const long double ap1 = static_cast<long double>(alpha) + 1.0L;
    std::vector<double> d(n + 1, 0.0);
    long double pm1 = 0.0L;                // (m-1)^(a+1)
    long double p0 = 1.0L;                 // m^(a+1) at m=1
    for (std::size_t m = 1; m <= n; ++m) {
        const long double pp1 = powl(static_cast<long double>(m + 1), ap1);
        d[m] = static_cast<double>(pp1 - 2.0L * p0 + pm1);
        pm1 = p0;
        p0 = pp1;
    }
    return d;
}

double head_weight(std::size_t n, double alpha) {
    const long double a = alpha;
    const long double nn = static_cast<long double>(n);
    return static_cast<double>(powl(nn - 1.0L, a + 1.0L) -
                               powl(nn, a) * (nn - 1.0L - a));
}

SampledPath apply_weights(const SampledPath& f, double alpha) {
    const TimeGrid& g = f.grid();
    const std::size_t n = g.n_steps();
    const std::size_t dim = f.dim();
    const std::vector<double> d = conv_weights(n, alpha);
    const double scale = std::pow(g.h(), alpha) / gamma(alpha + 2.0);

    std::vector<double> heads(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) heads[j] = head_weight(j, alpha);

    // One channel per component plus one for the tail envelope; the weights
    // are non-negative, so the envelope transports as the integral of the
    // nodewise bound.
    std::vector<std::vector<double>> in(dim + 1), out(dim + 1);
    for (std::size_t c = 0; c < dim; ++c) in[c] = f.component(c);
    in[dim].resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) in[dim][j] = f.value(j).tail_env();

    for (std::size_t c = 0; c <= dim; ++c) {
        const std::vector<double>& v = in[c];
        std::vector<double> w(n + 1, 0.0);
        for (std::size_t j = 1; j <= n; ++j) {
            long double s = static_cast<long double>(heads[j]) * v[0] + v[j];
            for (std::size_t k = 1; k < j; ++k)
                s += static_cast<long double>(d[j - k]) * v[k];
            w[j] = static_cast<double>(s * scale);
        }
        out[c] = std::move(w);
    }

    bool vanishes = true;
    for (std::size_t j = 0; j <= n; ++j) vanishes = vanishes && f.value(j).tail_vanishes();

    std::vector<StateVec> vals;
    vals.reserve(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        std::vector<double> e(dim);
        for (std::size_t c = 0; c < dim; ++c) e[c] = out[c][j];
        vals.emplace_back(std::move(e), out[dim][j], vanishes);
    }
    return SampledPath(g, std::move(vals));
}

SampledPath numeric_derivative(const SampledPath& g) {
    const TimeGrid& grid = g.grid();
    if (grid.n_steps() < 2)
        throw std::invalid_argument("rl_derivative: grid too small, need at least 3 nodes");
    const std::size_t n = grid.n_steps();
    const double h2 = 2.0 * grid.h();
    std::vector<StateVec> vals;
    vals.reserve(n + 1);
    vals.push_back((g.value(0) * -3.0 + g.value(1) * 4.0 - g.value(2)) / h2);
    for (std::size_t j = 1; j < n; ++j)
        vals.push_back((g.value(j + 1) - g.value(j - 1)) / h2);
    vals.push_back((g.value(n) * 3.0 - g.value(n - 1) * 4.0 + g.value(n - 2)) / h2);
    return SampledPath(grid, std::move(vals));
}

}  // namespace

SampledPath rl_integral(const SampledPath& f, FracOrder alpha) {
    return apply_weights(f, alpha.value());
}

SampledPath rl_integral(const SampledPath& f, OrderZero) { return f; }

SampledPath rl_derivative(const SampledPath& f, FracOrder alpha) {
    if (f.grid().n_steps() < 2)
        throw std::invalid_argument("rl_derivative: grid too small, need at least 3 nodes");
    if (alpha.value() == 1.0) return numeric_derivative(f);
    return numeric_derivative(rl_integral(f, FracOrder(1.0 - alpha.value())));
}

SampledPath caputo_derivative(const SampledPath& f, FracOrder alpha) {
    const StateVec& f0 = f.value(0);
    std::vector<StateVec> shifted;
    shifted.reserve(f.n_nodes());
    for (std::size_t j = 0; j < f.n_nodes(); ++j) shifted.push_back(f.value(j) - f0);
    return rl_derivative(SampledPath(f.grid(), std::move(shifted)), alpha);
}

SampledPath caputo_derivative_l1(const SampledPath& f, FracOrder alpha) {
    const TimeGrid& g = f.grid();
    if (g.n_steps() < 2)
        throw std::invalid_argument("caputo_derivative_l1: grid too small, need at least 3 nodes");
    const std::size_t n = g.n_steps();
    const double a = alpha.value();
    const double scale = std::pow(g.h(), -a) / gamma(2.0 - a);

    // w[k] = (k+1)^(1-a) - k^(1-a); for a == 1 only w[0] = 1 survives.
    std::vector<double> w(n, 0.0);
    if (a == 1.0) {
        w[0] = 1.0;
    } else {
        const long double e = 1.0L - static_cast<long double>(a);
        long double prev = 0.0L;
        for (std::size_t k = 0; k < n; ++k) {
            const long double next = powl(static_cast<long double>(k + 1), e);
            w[k] = static_cast<double>(next - prev);
            prev = next;
        }
    }

    const std::size_t dim = f.dim();
    std::vector<std::vector<double>> comp(dim);
    for (std::size_t c = 0; c < dim; ++c) comp[c] = f.component(c);

    std::vector<StateVec> vals;
    vals.reserve(n + 1);
    vals.push_back(StateVec(std::vector<double>(dim, 0.0)));
    for (std::size_t j = 1; j <= n; ++j) {
        std::vector<double> e(dim);
        for (std::size_t c = 0; c < dim; ++c) {
            long double s = 0.0L;
            for (std::size_t k = 0; k < j; ++k)
                s += static_cast<long double>(w[k]) * (comp[c][j - k] - comp[c][j - k - 1]);
            e[c] = static_cast<double>(s * scale);
        }
        vals.emplace_back(std::move(e));
    }
    return SampledPath(g, std::move(vals));
}

MittagLefflerResult mittag_leffler(FracOrder alpha, double z, int terms) {
    if (!(std::abs(z) <= 5.0))
        throw std::domain_error(
            "mittag_leffler: |z| <= 5 required for the series regime, got z = " +
            std::to_string(z));
    if (terms < 50)
        throw std::domain_error("mittag_leffler: at least 50 terms required, got " +
                                std::to_string(terms));

    const double a = alpha.value();
    const double logz = (z == 0.0) ? 0.0 : std::log(std::abs(z));
    long double sum = 1.0L;  // k = 0 term
    double last_mag = 1.0;
    double max_ratio = 0.0;
    for (int k = 1; k <= terms; ++k) {
        if (z == 0.0) break;
        const double mag = std::exp(static_cast<double>(k) * logz - std::lgamma(a * k + 1.0));
        const double term = (z < 0.0 && (k % 2 == 1)) ? -mag : mag;
        sum += static_cast<long double>(term);
        if (k > terms - 5 && last_mag > 0.0) max_ratio = std::max(max_ratio, mag / last_mag);
        last_mag = mag;
    }

    const double next_mag =
        (z == 0.0) ? 0.0
                   : std::exp(static_cast<double>(terms + 1) * logz -
                              std::lgamma(a * (terms + 1) + 1.0));
    // Geometric bound on the remainder from the observed late-term ratio,
    // floored at 1/2; an undecayed series reports an infinite tail.
    const double tail = (max_ratio < 1.0)
                            ? next_mag / (1.0 - std::max(max_ratio, 0.5))
                            : std::numeric_limits<double>::infinity();
    return {static_cast<double>(sum), tail};
}

}  // namespace fracdyn
