#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fracdyn/types.hpp"

namespace fracdyn::mnc {

/// Closed-form coefficient rule c_j, j = 1, 2, ..., with exact limsup and
/// sup of |c_j| available from the descriptor.
class BasisCoef {
public:
    static BasisCoef constant(double amplitude);          // c_j = A
    static BasisCoef alternating(double amplitude);       // c_j = A * (-1)^j
    static BasisCoef power_decay(double amplitude, double exponent);  // A / j^q, q > 0
    static BasisCoef geometric(double amplitude, double ratio);       // A * rho^j, 0 < rho < 1

    double at(std::size_t j) const;  // j >= 1
    double limsup_abs() const;
    double sup_abs() const;
    std::string describe() const;

private:
    enum class Kind { constant, alternating, power, geometric };
    BasisCoef(Kind k, double amp, double par) : kind_(k), amplitude_(amp), param_(par) {}
    Kind kind_;
    double amplitude_;
    double param_;
};

class SetFamily;
using SetFamilyPtr = std::shared_ptr<const SetFamily>;

/// A representable non-empty bounded subset of c0, given by a descriptor
/// tree. Finite explicit sets carry genuine members; ScaledBasis denotes
/// the infinite family {c_j e_j : j >= 1}.
class SetFamily {
public:
    struct Singleton {
        StateVec x;
    };
    struct FiniteSet {
        std::vector<StateVec> members;
    };
    struct ScaledBasis {
        BasisCoef coef;
    };
    struct Translate {
        SetFamilyPtr base;
        StateVec offset;
    };
    struct Scale {
        SetFamilyPtr base;
        double factor;
    };
    struct MinkowskiSum {
        SetFamilyPtr left, right;
    };
    struct ConvexPair {  // lambda*X + (1-lambda)*Y, lambda in [0, 1]
        double lambda;
        SetFamilyPtr left, right;
    };
    using Node =
        std::variant<Singleton, FiniteSet, ScaledBasis, Translate, Scale, MinkowskiSum, ConvexPair>;

    explicit SetFamily(Node n) : node_(std::move(n)) {}
    const Node& node() const { return node_; }
    std::string describe() const;

private:
    Node node_;
};

SetFamily singleton(StateVec x);
SetFamily finite_set(std::vector<StateVec> members);
SetFamily scaled_basis(BasisCoef coef);
SetFamily translate(SetFamily base, StateVec offset);
SetFamily scale(SetFamily base, double factor);
SetFamily minkowski_sum(SetFamily left, SetFamily right);
SetFamily convex_pair(double lambda, SetFamily left, SetFamily right);

/// A measure value; upper_bound marks results where the exact value is not
/// structurally available (Minkowski-type combinations) and the subadditive
/// bound is returned instead.
struct MeasureValue {
    double value = 0.0;
    bool upper_bound = false;
};

enum class Measure { hausdorff, sup_norm };

/// Hausdorff measure of non-compactness in c0, evaluated structurally:
/// the asymptotic joint tail size lim_k sup_{x in X} sup_{l >= k} |x_l|.
/// Members with tail_vanishes = false are rejected (not in c0).
MeasureValue hausdorff_c0(const SetFamily& X);

/// sup_{x in X} ||x||. A sublinear measure of non-compactness without the
/// singleton property; it vanishes only on {0}.
MeasureValue sup_norm_measure(const SetFamily& X);

MeasureValue evaluate(Measure m, const SetFamily& X);

struct AxiomCheck {
    std::string axiom;
    bool pass = true;
    std::string witness;  // filled on failure
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;
    bool all_pass() const;
    const AxiomCheck* find(const std::string& axiom) const;
};

/// Checks monotonicity under structural inclusion, the convexity inequality,
/// homogeneity, subadditivity and the singleton property over the supplied
/// families. Failures are data, not errors.
AxiomReport axiom_suite(Measure m, const std::vector<SetFamily>& families);

/// Ten families exercising every descriptor variant; used by the axiom
/// battery and the CLI report.
std::vector<SetFamily> stock_families();

struct KernelCorpusEntry {
    std::string name;
    bool sign_changing = false;
    double (*g)(double) = nullptr;
};

/// Ten coefficient functions on [0, 1] for the kernel-inequality battery;
/// sign_changing marks the ones where the inequality must be strict.
std::vector<KernelCorpusEntry> kernel_corpus();

/// A bounded family of paths: either the parametric bundle
/// {g(.) * x : x in factor} for a scalar path g, or a finite explicit list
/// of paths on one grid.
class PathFamily {
public:
    static PathFamily parametric(SampledPath g, SetFamily factor);
    static PathFamily list(std::vector<SampledPath> members);

    bool is_parametric() const { return parametric_.has_value(); }
    const SampledPath& g() const;
    const SetFamily& factor() const;
    const std::vector<SampledPath>& members() const { return members_; }
    const TimeGrid& grid() const;

private:
    PathFamily() = default;
    struct Parametric {
        SampledPath g;
        SetFamily factor;
    };
    std::optional<Parametric> parametric_;
    std::vector<SampledPath> members_;
};

struct KernelCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Singular-kernel inequality: the measure of the set of kernel integrals
/// against the nodewise integral of the measure, both normalized by
/// 1/Gamma(alpha) and evaluated at grid node `node`. Only parametric
/// families are structurally computable; anything else is refused.
KernelCheck kernel_integral_check(const PathFamily& X, FracOrder alpha, std::size_t node);

/// Discrete path-space measure: grid-scale modulus of continuity of the
/// family (extrapolated from spacings h and 2h) plus the sup over nodes of
/// the base measure of the value sets X(t).
double path_mnc(const PathFamily& X, Measure base);

}  // namespace fracdyn::mnc
