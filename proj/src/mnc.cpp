#include "fracdyn/mnc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracdyn/frac_core.hpp"

namespace fracdyn::mnc {

// ---------------------------------------------------------------- BasisCoef

BasisCoef BasisCoef::constant(double amplitude) {
    return BasisCoef(Kind::constant, amplitude, 0.0);
}

BasisCoef BasisCoef::alternating(double amplitude) {
    return BasisCoef(Kind::alternating, amplitude, 0.0);
}

BasisCoef BasisCoef::power_decay(double amplitude, double exponent) {
    if (!(exponent > 0.0)) throw std::invalid_argument("BasisCoef: decay exponent must be > 0");
    return BasisCoef(Kind::power, amplitude, exponent);
}

BasisCoef BasisCoef::geometric(double amplitude, double ratio) {
    if (!(ratio > 0.0) || !(ratio < 1.0))
        throw std::invalid_argument("BasisCoef: geometric ratio must lie in (0, 1)");
    return BasisCoef(Kind::geometric, amplitude, ratio);
}

double BasisCoef::at(std::size_t j) const {
    switch (kind_) {
        case Kind::constant: return amplitude_;
        case Kind::alternating: return (j % 2 == 0) ? amplitude_ : -amplitude_;
        case Kind::power: return amplitude_ / std::pow(static_cast<double>(j), param_);
        case Kind::geometric: return amplitude_ * std::pow(param_, static_cast<double>(j));
    }
    return 0.0;
}

double BasisCoef::limsup_abs() const {
    switch (kind_) {
        case Kind::constant:
        case Kind::alternating: return std::abs(amplitude_);
        case Kind::power:
        case Kind::geometric: return 0.0;
    }
    return 0.0;
}

double BasisCoef::sup_abs() const {
    switch (kind_) {
        case Kind::constant:
        case Kind::alternating: return std::abs(amplitude_);
        case Kind::power: return std::abs(amplitude_);              // attained at j = 1
        case Kind::geometric: return std::abs(amplitude_) * param_;  // attained at j = 1
    }
    return 0.0;
}

std::string BasisCoef::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::constant: os << "c_j = " << amplitude_; break;
        case Kind::alternating: os << "c_j = " << amplitude_ << "*(-1)^j"; break;
        case Kind::power: os << "c_j = " << amplitude_ << "/j^" << param_; break;
        case Kind::geometric: os << "c_j = " << amplitude_ << "*" << param_ << "^j"; break;
    }
    return os.str();
}

// ---------------------------------------------------------------- factories

SetFamily singleton(StateVec x) { return SetFamily(SetFamily::Singleton{std::move(x)}); }

SetFamily finite_set(std::vector<StateVec> members) {
    if (members.empty()) throw std::invalid_argument("finite_set: family must be non-empty");
    return SetFamily(SetFamily::FiniteSet{std::move(members)});
}

SetFamily scaled_basis(BasisCoef coef) { return SetFamily(SetFamily::ScaledBasis{coef}); }

SetFamily translate(SetFamily base, StateVec offset) {
    return SetFamily(SetFamily::Translate{std::make_shared<SetFamily>(std::move(base)),
                                          std::move(offset)});
}

SetFamily scale(SetFamily base, double factor) {
    return SetFamily(SetFamily::Scale{std::make_shared<SetFamily>(std::move(base)), factor});
}

SetFamily minkowski_sum(SetFamily left, SetFamily right) {
    return SetFamily(SetFamily::MinkowskiSum{std::make_shared<SetFamily>(std::move(left)),
                                             std::make_shared<SetFamily>(std::move(right))});
}

SetFamily convex_pair(double lambda, SetFamily left, SetFamily right) {
    if (!(lambda >= 0.0) || !(lambda <= 1.0))
        throw std::invalid_argument("convex_pair: lambda must lie in [0, 1]");
    return SetFamily(SetFamily::ConvexPair{lambda,
                                           std::make_shared<SetFamily>(std::move(left)),
                                           std::make_shared<SetFamily>(std::move(right))});
}

std::string SetFamily::describe() const {
    struct V {
        std::string operator()(const Singleton& s) const {
            return "Singleton(norm=" + std::to_string(s.x.sup_norm()) + ")";
        }
        std::string operator()(const FiniteSet& s) const {
            return "FiniteSet(" + std::to_string(s.members.size()) + " members)";
        }
        std::string operator()(const ScaledBasis& s) const {
            return "ScaledBasis(" + s.coef.describe() + ")";
        }
        std::string operator()(const Translate& t) const {
            return "Translate(" + t.base->describe() + ")";
        }
        std::string operator()(const Scale& s) const {
            return "Scale(" + s.base->describe() + ", " + std::to_string(s.factor) + ")";
        }
        std::string operator()(const MinkowskiSum& s) const {
            return "Sum(" + s.left->describe() + ", " + s.right->describe() + ")";
        }
        std::string operator()(const ConvexPair& s) const {
            return "Convex(" + std::to_string(s.lambda) + ", " + s.left->describe() + ", " +
                   s.right->describe() + ")";
        }
    };
    return std::visit(V{}, node_);
}

// ---------------------------------------------------------------- measures

namespace {

void require_c0(const StateVec& x, const char* what) {
    if (!x.in_c0())
        throw std::domain_error(std::string(what) +
                                ": member with tail_vanishes = false is not in c0");
}

MeasureValue chi(const SetFamily& X);

// Exact chi of the other summand when one side is a point (a pure translate).
const StateVec* as_point(const SetFamily& X) {
    if (const auto* s = std::get_if<SetFamily::Singleton>(&X.node())) return &s->x;
    if (const auto* f = std::get_if<SetFamily::FiniteSet>(&X.node()))
        if (f->members.size() == 1) return &f->members.front();
    return nullptr;
}

MeasureValue chi(const SetFamily& X) {
    struct V {
        MeasureValue operator()(const SetFamily::Singleton& s) const {
            require_c0(s.x, "hausdorff_c0");
            return {0.0, false};
        }
        MeasureValue operator()(const SetFamily::FiniteSet& s) const {
            for (const StateVec& m : s.members) require_c0(m, "hausdorff_c0");
            return {0.0, false};
        }
        MeasureValue operator()(const SetFamily::ScaledBasis& s) const {
            return {s.coef.limsup_abs(), false};
        }
        MeasureValue operator()(const SetFamily::Translate& t) const {
            require_c0(t.offset, "hausdorff_c0");
            return chi(*t.base);  // translation invariance
        }
        MeasureValue operator()(const SetFamily::Scale& s) const {
            MeasureValue b = chi(*s.base);
            return {std::abs(s.factor) * b.value, b.upper_bound};
        }
        MeasureValue operator()(const SetFamily::MinkowskiSum& s) const {
            if (const StateVec* p = as_point(*s.left)) {
                require_c0(*p, "hausdorff_c0");
                return chi(*s.right);
            }
            if (const StateVec* p = as_point(*s.right)) {
                require_c0(*p, "hausdorff_c0");
                return chi(*s.left);
            }
            MeasureValue l = chi(*s.left), r = chi(*s.right);
            return {l.value + r.value, true};  // subadditive bound only
        }
        MeasureValue operator()(const SetFamily::ConvexPair& c) const {
            if (c.lambda == 1.0) return chi(*c.left);
            if (c.lambda == 0.0) return chi(*c.right);
            if (as_point(*c.right)) {
                MeasureValue l = chi(*c.left);
                return {c.lambda * l.value, l.upper_bound};
            }
            if (as_point(*c.left)) {
                MeasureValue r = chi(*c.right);
                return {(1.0 - c.lambda) * r.value, r.upper_bound};
            }
            MeasureValue l = chi(*c.left), r = chi(*c.right);
            return {c.lambda * l.value + (1.0 - c.lambda) * r.value, true};
        }
    };
    return std::visit(V{}, X.node());
}

// Enumerates the family when it is a finite composition of explicit sets.
std::optional<std::vector<StateVec>> try_enumerate(const SetFamily& X) {
    using Out = std::optional<std::vector<StateVec>>;
    constexpr std::size_t kMaxMembers = 4096;
    struct V {
        Out operator()(const SetFamily::Singleton& s) const {
            return std::vector<StateVec>{s.x};
        }
        Out operator()(const SetFamily::FiniteSet& s) const { return s.members; }
        Out operator()(const SetFamily::ScaledBasis&) const { return std::nullopt; }
        Out operator()(const SetFamily::Translate& t) const {
            Out b = try_enumerate(*t.base);
            if (!b) return std::nullopt;
            for (StateVec& m : *b) m = m + t.offset;
            return b;
        }
        Out operator()(const SetFamily::Scale& s) const {
            Out b = try_enumerate(*s.base);
            if (!b) return std::nullopt;
            for (StateVec& m : *b) m = m * s.factor;
            return b;
        }
        Out operator()(const SetFamily::MinkowskiSum& s) const {
            return combine(*s.left, *s.right, 1.0, 1.0);
        }
        Out operator()(const SetFamily::ConvexPair& c) const {
            return combine(*c.left, *c.right, c.lambda, 1.0 - c.lambda);
        }
        static Out combine(const SetFamily& l, const SetFamily& r, double cl, double cr) {
            Out a = try_enumerate(l), b = try_enumerate(r);
            if (!a || !b || a->size() * b->size() > kMaxMembers) return std::nullopt;
            std::vector<StateVec> out;
            out.reserve(a->size() * b->size());
            for (const StateVec& x : *a)
                for (const StateVec& y : *b) out.push_back(x * cl + y * cr);
            return out;
        }
    };
    return std::visit(V{}, X.node());
}

MeasureValue mu_sup(const SetFamily& X) {
    if (auto members = try_enumerate(X)) {
        double m = 0.0;
        for (const StateVec& x : *members) m = std::max(m, x.sup_norm());
        return {m, false};
    }
    struct V {
        MeasureValue operator()(const SetFamily::Singleton& s) const {
            return {s.x.sup_norm(), false};
        }
        MeasureValue operator()(const SetFamily::FiniteSet& s) const {
            double m = 0.0;
            for (const StateVec& x : s.members) m = std::max(m, x.sup_norm());
            return {m, false};
        }
        MeasureValue operator()(const SetFamily::ScaledBasis& s) const {
            return {s.coef.sup_abs(), false};
        }
        MeasureValue operator()(const SetFamily::Translate& t) const {
            MeasureValue b = mu_sup(*t.base);
            return {b.value + t.offset.sup_norm(), true};  // triangle bound
        }
        MeasureValue operator()(const SetFamily::Scale& s) const {
            MeasureValue b = mu_sup(*s.base);
            return {std::abs(s.factor) * b.value, b.upper_bound};
        }
        MeasureValue operator()(const SetFamily::MinkowskiSum& s) const {
            MeasureValue l = mu_sup(*s.left), r = mu_sup(*s.right);
            return {l.value + r.value, true};
        }
        MeasureValue operator()(const SetFamily::ConvexPair& c) const {
            if (c.lambda == 1.0) return mu_sup(*c.left);
            if (c.lambda == 0.0) return mu_sup(*c.right);
            MeasureValue l = mu_sup(*c.left), r = mu_sup(*c.right);
            return {c.lambda * l.value + (1.0 - c.lambda) * r.value, true};
        }
    };
    return std::visit(V{}, X.node());
}

}  // namespace

MeasureValue hausdorff_c0(const SetFamily& X) { return chi(X); }

MeasureValue sup_norm_measure(const SetFamily& X) { return mu_sup(X); }

MeasureValue evaluate(Measure m, const SetFamily& X) {
    return m == Measure::hausdorff ? hausdorff_c0(X) : sup_norm_measure(X);
}

// ------------------------------------------------------------- axiom suite

namespace {

bool same_vec(const StateVec& a, const StateVec& b) {
    return a.dim() == b.dim() && (a - b).sup_norm() == 0.0 && a.tail_env() == b.tail_env();
}

// Structural inclusion, decidable only for explicit sets.
bool included(const SetFamily& X, const SetFamily& Y) {
    auto xm = try_enumerate(X);
    auto ym = try_enumerate(Y);
    if (!xm || !ym) return false;
    for (const StateVec& x : *xm) {
        bool found = false;
        for (const StateVec& y : *ym) found = found || same_vec(x, y);
        if (!found) return false;
    }
    return true;
}

std::vector<StateVec> collect_points(const std::vector<SetFamily>& families) {
    std::vector<StateVec> pts;
    for (const SetFamily& f : families) {
        if (const auto* s = std::get_if<SetFamily::Singleton>(&f.node())) pts.push_back(s->x);
        if (const auto* fs = std::get_if<SetFamily::FiniteSet>(&f.node()))
            for (const StateVec& m : fs->members) pts.push_back(m);
    }
    return pts;
}

}  // namespace

bool AxiomReport::all_pass() const {
    for (const AxiomCheck& c : checks)
        if (!c.pass) return false;
    return true;
}

const AxiomCheck* AxiomReport::find(const std::string& axiom) const {
    for (const AxiomCheck& c : checks)
        if (c.axiom == axiom) return &c;
    return nullptr;
}

AxiomReport axiom_suite(Measure m, const std::vector<SetFamily>& families) {
    if (families.empty()) throw std::invalid_argument("axiom_suite: families must be non-empty");
    constexpr double kTol = 1e-12;
    AxiomReport rep;

    AxiomCheck mono{"monotonicity", true, ""};
    for (const SetFamily& X : families)
        for (const SetFamily& Y : families) {
            if (!included(X, Y)) continue;
            MeasureValue vx = evaluate(m, X), vy = evaluate(m, Y);
            if (vx.upper_bound) continue;  // a bound on the small side proves nothing
            if (vx.value > vy.value + kTol) {
                mono.pass = false;
                mono.witness = X.describe() + " subset of " + Y.describe();
            }
        }
    rep.checks.push_back(mono);

    AxiomCheck conv{"convexity", true, ""};
    const double lambdas[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (std::size_t i = 0; i < families.size(); ++i)
        for (std::size_t j = 0; j < families.size(); ++j)
            for (double lam : lambdas) {
                MeasureValue lhs = evaluate(m, convex_pair(lam, families[i], families[j]));
                double rhs = lam * evaluate(m, families[i]).value +
                             (1.0 - lam) * evaluate(m, families[j]).value;
                if (lhs.value > rhs + kTol) {
                    conv.pass = false;
                    conv.witness = "lambda=" + std::to_string(lam) + ", " +
                                   families[i].describe() + ", " + families[j].describe();
                }
            }
    rep.checks.push_back(conv);

    AxiomCheck hom{"homogeneity", true, ""};
    const double factors[] = {-2.0, -1.0, 0.5, 3.0};
    for (const SetFamily& X : families)
        for (double c : factors) {
            MeasureValue lhs = evaluate(m, scale(X, c));
            double rhs = std::abs(c) * evaluate(m, X).value;
            if (std::abs(lhs.value - rhs) > kTol * std::max(1.0, std::abs(rhs))) {
                hom.pass = false;
                hom.witness = "factor=" + std::to_string(c) + ", " + X.describe();
            }
        }
    rep.checks.push_back(hom);

    AxiomCheck sub{"subadditivity", true, ""};
    for (std::size_t i = 0; i < families.size(); ++i)
        for (std::size_t j = 0; j < families.size(); ++j) {
            MeasureValue lhs = evaluate(m, minkowski_sum(families[i], families[j]));
            double rhs = evaluate(m, families[i]).value + evaluate(m, families[j]).value;
            if (lhs.value > rhs + kTol) {
                sub.pass = false;
                sub.witness = families[i].describe() + " + " + families[j].describe();
            }
        }
    rep.checks.push_back(sub);

    AxiomCheck single{"singleton", true, ""};
    for (const StateVec& x : collect_points(families)) {
        MeasureValue v = evaluate(m, singleton(x));
        if (v.value > kTol) {
            single.pass = false;
            single.witness =
                "Singleton with norm " + std::to_string(x.sup_norm()) + " measures " +
                std::to_string(v.value);
        }
    }
    rep.checks.push_back(single);

    return rep;
}

std::vector<SetFamily> stock_families() {
    const StateVec zero(std::vector<double>{0.0, 0.0});
    const StateVec x3(std::vector<double>{3.0, 1.0});
    const StateVec y(std::vector<double>{0.5, -2.0});
    const StateVec v(std::vector<double>{0.25, 0.1});

    std::vector<SetFamily> fams;
    fams.push_back(singleton(zero));
    fams.push_back(singleton(x3));
    fams.push_back(finite_set({zero}));
    fams.push_back(finite_set({x3, y}));
    fams.push_back(scaled_basis(BasisCoef::constant(1.0)));          // {e_j}
    fams.push_back(scaled_basis(BasisCoef::power_decay(1.0, 1.0)));  // {e_j / j}
    fams.push_back(scaled_basis(BasisCoef::alternating(0.7)));
    fams.push_back(translate(scaled_basis(BasisCoef::constant(1.0)), v));
    fams.push_back(scale(scaled_basis(BasisCoef::power_decay(1.0, 1.0)), -2.0));
    fams.push_back(minkowski_sum(scaled_basis(BasisCoef::constant(1.0)),
                                 scaled_basis(BasisCoef::power_decay(1.0, 1.0))));
    return fams;
}

std::vector<KernelCorpusEntry> kernel_corpus() {
    return {
        {"1", false, [](double) { return 1.0; }},
        {"t", false, [](double t) { return t; }},
        {"t^2", false, [](double t) { return t * t; }},
        {"1-t", false, [](double t) { return 1.0 - t; }},
        {"exp(-t)", false, [](double t) { return std::exp(-t); }},
        {"0", false, [](double) { return 0.0; }},
        {"t-1/2", true, [](double t) { return t - 0.5; }},
        {"1/4-t", true, [](double t) { return 0.25 - t; }},
        {"sin(2*pi*t)", true, [](double t) { return std::sin(2.0 * std::numbers::pi * t); }},
        {"cos(pi*t)", true, [](double t) { return std::cos(std::numbers::pi * t); }},
    };
}

// -------------------------------------------------------------- PathFamily

PathFamily PathFamily::parametric(SampledPath g, SetFamily factor) {
    if (g.dim() != 1)
        throw std::invalid_argument("PathFamily: the parametric coefficient must be scalar");
    PathFamily p;
    p.parametric_.emplace(Parametric{std::move(g), std::move(factor)});
    return p;
}

PathFamily PathFamily::list(std::vector<SampledPath> members) {
    if (members.empty()) throw std::invalid_argument("PathFamily: member list must be non-empty");
    for (const SampledPath& m : members) members.front().require_same_grid(m);
    PathFamily p;
    p.members_ = std::move(members);
    return p;
}

const SampledPath& PathFamily::g() const {
    if (!parametric_) throw std::logic_error("PathFamily: not parametric");
    return parametric_->g;
}

const SetFamily& PathFamily::factor() const {
    if (!parametric_) throw std::logic_error("PathFamily: not parametric");
    return parametric_->factor;
}

const TimeGrid& PathFamily::grid() const {
    return parametric_ ? parametric_->g.grid() : members_.front().grid();
}

KernelCheck kernel_integral_check(const PathFamily& X, FracOrder alpha, std::size_t node) {
    if (!X.is_parametric())
        throw std::domain_error(
            "kernel_integral_check: only parametric families g(t)*SetFamily are structurally "
            "computable");
    if (node >= X.grid().n_nodes())
        throw std::out_of_range("kernel_integral_check: node index out of range");
    const MeasureValue chi_f = hausdorff_c0(X.factor());
    if (chi_f.upper_bound)
        throw std::domain_error(
            "kernel_integral_check: the factor family has no exact structural measure");

    const SampledPath& g = X.g();
    std::vector<double> abs_vals(g.n_nodes());
    for (std::size_t j = 0; j < g.n_nodes(); ++j) abs_vals[j] = std::abs(g.scalar_value(j));
    const SampledPath jg = rl_integral(g, alpha);
    const SampledPath jabs = rl_integral(SampledPath::scalar(g.grid(), std::move(abs_vals)), alpha);

    KernelCheck out;
    out.lhs = std::abs(jg.scalar_value(node)) * chi_f.value;
    out.rhs = jabs.scalar_value(node) * chi_f.value;
    out.holds = out.lhs <= out.rhs + 1e-9;
    return out;
}

double path_mnc(const PathFamily& X, Measure base) {
    const TimeGrid& grid = X.grid();
    const std::size_t n = grid.n_steps();

    double mod1 = 0.0, mod2 = 0.0, sup_t = 0.0;
    if (X.is_parametric()) {
        const SampledPath& g = X.g();
        const double norm_scale = sup_norm_measure(X.factor()).value;
        for (std::size_t j = 0; j < n; ++j)
            mod1 = std::max(mod1,
                            std::abs(g.scalar_value(j + 1) - g.scalar_value(j)) * norm_scale);
        for (std::size_t j = 0; j + 2 <= n; ++j)
            mod2 = std::max(mod2,
                            std::abs(g.scalar_value(j + 2) - g.scalar_value(j)) * norm_scale);
        const double base_val = evaluate(base, X.factor()).value;
        for (std::size_t j = 0; j <= n; ++j)
            sup_t = std::max(sup_t, std::abs(g.scalar_value(j)) * base_val);
    } else {
        for (const SampledPath& u : X.members()) {
            for (std::size_t j = 0; j < n; ++j)
                mod1 = std::max(mod1, (u.value(j + 1) - u.value(j)).sup_norm());
            for (std::size_t j = 0; j + 2 <= n; ++j)
                mod2 = std::max(mod2, (u.value(j + 2) - u.value(j)).sup_norm());
        }
        for (std::size_t j = 0; j <= n; ++j) {
            std::vector<StateVec> slice;
            slice.reserve(X.members().size());
            for (const SampledPath& u : X.members()) slice.push_back(u.value(j));
            sup_t = std::max(sup_t, evaluate(base, finite_set(std::move(slice))).value);
        }
    }
    // Linear extrapolation of the modulus to spacing 0; a Lipschitz family
    // extrapolates to 0 exactly.
    const double modulus = std::max(0.0, 2.0 * mod1 - mod2);
    return modulus + sup_t;
}

}  // namespace fracdyn::mnc
