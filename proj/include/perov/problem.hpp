#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "perov/cone_space.hpp"
#include "perov/operator_matrix.hpp"
#include "perov/sampling.hpp"
#include "perov/spectral.hpp"

namespace perov {

/// Polynomial with special-cased points:
/// m(x) = exceptions[i].poly(x) if |x - exceptions[i].at| <= match_eps, else default_poly(x).
/// Coefficients are in ascending degree.
class PiecewisePolyMap {
public:
    struct Exception {
        double at;
        std::vector<double> poly;
        bool operator==(const Exception&) const = default;
    };

    /// Throws InvalidArgument for empty or non-finite coefficient lists and
    /// for repeated exception points.
    explicit PiecewisePolyMap(std::vector<double> default_poly, std::vector<Exception> exceptions = {});

    const std::vector<double>& default_poly() const noexcept { return default_poly_; }
    const std::vector<Exception>& exceptions() const noexcept { return exceptions_; }
    std::vector<double> exception_points() const;

    bool operator==(const PiecewisePolyMap&) const = default;

private:
    std::vector<double> default_poly_;
    std::vector<Exception> exceptions_;
};

inline constexpr double kDefaultMatchEps = 1e-12;

double eval_map(const PiecewisePolyMap& m, double x, double match_eps = kDefaultMatchEps);

/// Evaluates `m` on many points; the default branch goes through the batched
/// Horner kernel.
std::vector<double> eval_map_batch(const PiecewisePolyMap& m, std::span<const double> xs,
                                   double match_eps = kDefaultMatchEps);

/// The auxiliary map T applied inside every c-distance evaluation.
struct TransformSpec {
    enum class Kind { Identity, Scaling, Piecewise };

    Kind kind = Kind::Identity;
    double lambda = 1.0;
    std::optional<PiecewisePolyMap> map;
    bool declared_injective = true;
    bool declared_continuous = true;
    bool declared_seq_convergent = true;

    static TransformSpec identity();
    /// Throws ValidationError unless lambda in (0, 1].
    static TransformSpec scaling(double lambda);
    /// Injectivity is probed (strict monotonicity on a fine grid of `domain`);
    /// continuity holds iff every exception agrees with the default branch.
    static TransformSpec piecewise(PiecewisePolyMap map, const Interval& domain);

    double apply(double x, double match_eps = kDefaultMatchEps) const;
    bool operator==(const TransformSpec&) const = default;
};

std::string_view transform_kind_name(TransformSpec::Kind kind);

/// Single-operator hypothesis: q(Tfx1, Tfx2) ⪯ A U_T(x1, x2).
struct Thr1 {
    OperatorMatrix a;
    bool operator==(const Thr1&) const = default;
};

/// Three-operator hypothesis:
/// q(Tfx1, Tfx2) ⪯ A1 q(Tx1, Tx2) + A2 q(Tx1, Tfx1) + A3 q(Tx2, Tfx2).
struct Thr2 {
    OperatorMatrix a1;
    OperatorMatrix a2;
    OperatorMatrix a3;
    bool operator==(const Thr2&) const = default;
};

using ContractionHypothesis = std::variant<Thr1, Thr2>;

struct ProblemInstance {
    Interval domain;
    /// Cone dimension; the built-in families live in R^2.
    std::size_t n = 2;
    BMetricSpec d;
    CDistanceSpec q;
    PiecewisePolyMap f{{0.0}};
    TransformSpec t;
    ContractionHypothesis hypothesis{Thr1{OperatorMatrix::zero(2)}};
    ConeOrderConfig order;
    double match_eps = kDefaultMatchEps;

    double eval_f(double x) const { return eval_map(f, x, match_eps); }
    double eval_t(double x) const { return t.apply(x, match_eps); }
    /// q(Tx, Ty).
    ConeVector qt(double x, double y) const { return q_eval(q, eval_t(x), eval_t(y)); }

    bool operator==(const ProblemInstance& other) const;
};

/// Result of checking the contraction hypothesis of an instance.
struct HypothesisCheck {
    /// Operator whose powers drive the step recurrence q_n ⪯ A_eff q_{n-1}:
    /// A for THR1, (I - A3)^{-1}(A1 + A2) for THR2.
    OperatorMatrix effective{OperatorMatrix::zero(2)};
    /// Evidence for b * effective.
    ZeroConvergenceEvidence evidence;
    /// THR2 only: r(b (A1 + A2)(I - A3)^{-1}), the other multiplication order.
    std::optional<double> alternate_order_radius;
    /// THR2 only: ||A1|| + ||A2|| + ||A3|| and whether b times it is below 1.
    std::optional<double> norm_sum;
    std::optional<bool> scaled_norm_sum_below_one;
};

/// Zero-convergence evidence for b A (THR1) or b (I - A3)^{-1}(A1 + A2) (THR2).
/// Throws ValidationError for negative operators or a singular I - A3.
HypothesisCheck validate_hypothesis(const ProblemInstance& p);

/// Every structural and mathematical check run at load time: parameter
/// ranges, f and T map the domain into itself (sampled), T injective, and the
/// hypothesis evidence verdict. Throws ValidationError with the field path.
void validate_problem(const ProblemInstance& p);

/// Parses the JSON problem-definition document and validates it.
/// Throws SyntaxError for malformed documents, ValidationError otherwise.
ProblemInstance parse_problem(std::string_view text);

/// Structural parse only (SyntaxError); the caller runs validate_problem.
ProblemInstance parse_problem_document(std::string_view text);

/// Inverse of parse_problem; parse_problem(serialize_problem(p)) == p.
std::string serialize_problem(const ProblemInstance& p);

struct BuiltinOptions {
    /// Weight alpha of the "2.4" and "2.8" families (q uses eta = alpha).
    double alpha = 1.0;
};

/// Known ids: "2.2", "2.4", "2.8". Throws UnknownExample otherwise.
ProblemInstance builtin_example(std::string_view id, const BuiltinOptions& opts = {});
std::vector<std::string> builtin_example_ids();

/// Constants of example "2.2" and the admissible bound on beta derived from
/// beta^p <= a11 + eta a12 and eta beta^p <= a21 + eta a22.
struct Example22Constants {
    double beta;
    double lambda;
    double gamma;
    double row1_lhs, row1_rhs;
    double row2_lhs, row2_rhs;
};
Example22Constants example_22_constants();

}  // namespace perov
