#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fracdyn {

/// Fractional order alpha, restricted to (0, 1].
class FracOrder {
public:
    explicit FracOrder(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0) || !(alpha <= 1.0) || !std::isfinite(alpha))
            throw std::domain_error("FracOrder: alpha must lie in (0, 1], got " +
                                    std::to_string(alpha));
    }

    double value() const { return alpha_; }

    friend bool operator==(FracOrder a, FracOrder b) { return a.alpha_ == b.alpha_; }

private:
    double alpha_;
};

/// Tag for the order-zero integral operator (the identity).
struct OrderZero {};
inline constexpr OrderZero order_zero{};

/// Uniform grid t_j = a + j*h, j = 0..n_steps.
class TimeGrid {
public:
    TimeGrid(double a, double h, std::size_t n_steps) : a_(a), h_(h), n_steps_(n_steps) {
        if (!std::isfinite(a)) throw std::invalid_argument("TimeGrid: a must be finite");
        if (!(h > 0.0) || !std::isfinite(h))
            throw std::invalid_argument("TimeGrid: step h must be positive");
        if (n_steps < 1) throw std::invalid_argument("TimeGrid: n_steps must be >= 1");
    }

    double a() const { return a_; }
    double h() const { return h_; }
    std::size_t n_steps() const { return n_steps_; }
    std::size_t n_nodes() const { return n_steps_ + 1; }
    double node(std::size_t j) const { return a_ + h_ * static_cast<double>(j); }
    double length() const { return h_ * static_cast<double>(n_steps_); }
    double right() const { return node(n_steps_); }

    friend bool operator==(const TimeGrid& x, const TimeGrid& y) {
        return x.a_ == y.a_ && x.h_ == y.h_ && x.n_steps_ == y.n_steps_;
    }

private:
    double a_;
    double h_;
    std::size_t n_steps_;
};

/// Truncated c0 element: N explicit components u_1..u_N plus a declared
/// envelope bound on every component beyond N. tail_vanishes asserts the
/// tail supremum tends to 0, which is what membership in c0 requires.
class StateVec {
public:
    StateVec() : entries_(1, 0.0) {}

    explicit StateVec(std::vector<double> entries, double tail_env = 0.0,
                      bool tail_vanishes = true)
        : entries_(std::move(entries)), tail_env_(tail_env), tail_vanishes_(tail_vanishes) {
        if (entries_.empty()) throw std::invalid_argument("StateVec: needs at least one entry");
        if (!(tail_env >= 0.0) || !std::isfinite(tail_env))
            throw std::invalid_argument("StateVec: tail_env must be finite and >= 0");
        for (double v : entries_)
            if (!std::isfinite(v)) throw std::invalid_argument("StateVec: entries must be finite");
    }

    static StateVec scalar(double v) { return StateVec(std::vector<double>{v}); }

    std::size_t dim() const { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<double>& entries() const { return entries_; }
    double tail_env() const { return tail_env_; }
    bool tail_vanishes() const { return tail_vanishes_; }

    bool in_c0() const { return tail_vanishes_; }

    double as_scalar() const {
        if (entries_.size() != 1)
            throw std::logic_error("StateVec: as_scalar on a vector of dimension " +
                                   std::to_string(entries_.size()));
        return entries_[0];
    }

    double sup_norm() const {
        double m = tail_env_;
        for (double v : entries_) m = std::max(m, std::abs(v));
        return m;
    }

    StateVec operator+(const StateVec& o) const { return combine(o, +1.0); }
    StateVec operator-(const StateVec& o) const { return combine(o, -1.0); }

    StateVec operator*(double c) const {
        StateVec r = *this;
        for (double& v : r.entries_) v *= c;
        r.tail_env_ *= std::abs(c);
        return r;
    }

    StateVec operator/(double c) const {
        StateVec r = *this;
        for (double& v : r.entries_) v /= c;
        r.tail_env_ /= std::abs(c);
        return r;
    }

    friend StateVec operator*(double c, const StateVec& v) { return v * c; }

private:
    StateVec combine(const StateVec& o, double sign) const {
        if (o.entries_.size() != entries_.size())
            throw std::invalid_argument("StateVec: dimension mismatch (" +
                                        std::to_string(entries_.size()) + " vs " +
                                        std::to_string(o.entries_.size()) + ")");
        StateVec r = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] += sign * o.entries_[i];
        r.tail_env_ += o.tail_env_;  // envelope bound for the sum
        r.tail_vanishes_ = tail_vanishes_ && o.tail_vanishes_;
        return r;
    }

    std::vector<double> entries_;
    double tail_env_ = 0.0;
    bool tail_vanishes_ = true;
};

/// Values of a function on a uniform time grid, one StateVec per node.
/// All values share the same truncation length.
class SampledPath {
public:
    SampledPath(TimeGrid grid, std::vector<StateVec> values)
        : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.n_nodes())
            throw std::invalid_argument("SampledPath: expected " +
                                        std::to_string(grid_.n_nodes()) + " values, got " +
                                        std::to_string(values_.size()));
        for (const StateVec& v : values_)
            if (v.dim() != values_.front().dim())
                throw std::invalid_argument("SampledPath: values must share one dimension");
    }

    static SampledPath scalar(TimeGrid grid, std::vector<double> vals) {
        std::vector<StateVec> vs;
        vs.reserve(vals.size());
        for (double v : vals) vs.push_back(StateVec::scalar(v));
        return SampledPath(grid, std::move(vs));
    }

    template <class F>
    static SampledPath sample_scalar(TimeGrid grid, F&& f) {
        std::vector<double> vals(grid.n_nodes());
        for (std::size_t j = 0; j < vals.size(); ++j) vals[j] = f(grid.node(j));
        return scalar(grid, std::move(vals));
    }

    const TimeGrid& grid() const { return grid_; }
    std::size_t n_nodes() const { return values_.size(); }
    std::size_t dim() const { return values_.front().dim(); }
    const StateVec& value(std::size_t j) const { return values_[j]; }
    double scalar_value(std::size_t j) const { return values_[j].as_scalar(); }

    std::vector<double> component(std::size_t c) const {
        std::vector<double> out(values_.size());
        for (std::size_t j = 0; j < values_.size(); ++j) out[j] = values_[j][c];
        return out;
    }

    double sup_norm() const {
        double m = 0.0;
        for (const StateVec& v : values_) m = std::max(m, v.sup_norm());
        return m;
    }

    /// Largest nodewise sup-norm distance to another path on the same grid.
    double sup_distance(const SampledPath& o) const {
        require_same_grid(o);
        double m = 0.0;
        for (std::size_t j = 0; j < values_.size(); ++j)
            m = std::max(m, (values_[j] - o.values_[j]).sup_norm());
        return m;
    }

    void require_same_grid(const SampledPath& o) const {
        if (!(grid_ == o.grid_))
            throw std::invalid_argument("SampledPath: grids do not match");
    }

private:
    TimeGrid grid_;
    std::vector<StateVec> values_;
};

}  // namespace fracdyn
