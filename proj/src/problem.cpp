#include "perov/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "perov/errors.hpp"
#include "perov/kernels.hpp"

namespace perov {

namespace {

void require_poly(const std::vector<double>& poly, const char* what) {
    if (poly.empty()) throw InvalidArgument(std::string(what) + ": coefficient list is empty");
    for (double c : poly)
        if (!std::isfinite(c)) throw InvalidArgument(std::string(what) + ": coefficients must be finite");
}

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

/// Points used for the sampled "maps the domain into itself" checks.
std::vector<double> probe_points(const Interval& domain, std::span<const double> extra) {
    auto pts = grid_points(domain, 1025);
    const auto rnd = uniform_points(domain, 256, 0);
    pts.insert(pts.end(), rnd.begin(), rnd.end());
    for (double c : extra)
        if (domain.contains(c)) pts.push_back(c);
    return pts;
}

// Rounding in (I - A3)^{-1} can leave -1e-17 where the exact product is 0.
OperatorMatrix clamp_rounding_negatives(const OperatorMatrix& m, const std::string& path) {
    const double scale = std::max(1.0, operator_norm_inf(m));
    std::vector<double> e(m.entries().begin(), m.entries().end());
    for (double& x : e) {
        if (x < 0.0) {
            if (x < -1e-12 * scale) throw ValidationError(path, "effective operator has a negative entry " + fmt_double(x));
            x = 0.0;
        }
    }
    return OperatorMatrix(m.size(), std::move(e));
}

void require_operator(const OperatorMatrix& m, std::size_t n, const std::string& path) {
    if (m.size() != n) throw ValidationError(path, "operator must be " + std::to_string(n) + "x" + std::to_string(n));
    if (!m.is_nonnegative()) throw ValidationError(path, "operator must be entrywise nonnegative");
}

}  // namespace

PiecewisePolyMap::PiecewisePolyMap(std::vector<double> default_poly, std::vector<Exception> exceptions)
    : default_poly_(std::move(default_poly)), exceptions_(std::move(exceptions)) {
    require_poly(default_poly_, "default polynomial");
    for (std::size_t i = 0; i < exceptions_.size(); ++i) {
        if (!std::isfinite(exceptions_[i].at)) throw InvalidArgument("exception point must be finite");
        require_poly(exceptions_[i].poly, "exception polynomial");
        for (std::size_t j = 0; j < i; ++j) {
            if (exceptions_[j].at == exceptions_[i].at) {
                throw InvalidArgument("exception points must be distinct, " + fmt_double(exceptions_[i].at) + " repeats");
            }
        }
    }
}

std::vector<double> PiecewisePolyMap::exception_points() const {
    std::vector<double> out;
    for (const auto& e : exceptions_) out.push_back(e.at);
    return out;
}

double eval_map(const PiecewisePolyMap& m, double x, double match_eps) {
    for (const auto& e : m.exceptions()) {
        if (std::abs(x - e.at) <= match_eps) return kernels::horner(e.poly, x);
    }
    return kernels::horner(m.default_poly(), x);
}

std::vector<double> eval_map_batch(const PiecewisePolyMap& m, std::span<const double> xs, double match_eps) {
    std::vector<double> out(xs.size());
    kernels::horner_batch(m.default_poly(), xs, out);
    if (!m.exceptions().empty()) {
        for (std::size_t k = 0; k < xs.size(); ++k) {
            for (const auto& e : m.exceptions()) {
                if (std::abs(xs[k] - e.at) <= match_eps) {
                    out[k] = kernels::horner(e.poly, xs[k]);
                    break;
                }
            }
        }
    }
    return out;
}

TransformSpec TransformSpec::identity() { return TransformSpec{}; }

TransformSpec TransformSpec::scaling(double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw ValidationError("T.lambda", "scaling factor must lie in (0, 1], got " + fmt_double(lambda));
    }
    TransformSpec t;
    t.kind = Kind::Scaling;
    t.lambda = lambda;
    return t;
}

TransformSpec TransformSpec::piecewise(PiecewisePolyMap map, const Interval& domain) {
    TransformSpec t;
    t.kind = Kind::Piecewise;
    const auto pts = grid_points(domain, 4097);
    const auto vals = eval_map_batch(map, pts);
    bool increasing = true, decreasing = true;
    for (std::size_t i = 1; i < vals.size(); ++i) {
        if (!(vals[i] > vals[i - 1])) increasing = false;
        if (!(vals[i] < vals[i - 1])) decreasing = false;
    }
    t.declared_injective = increasing || decreasing;
    t.declared_continuous = std::all_of(map.exceptions().begin(), map.exceptions().end(), [&](const auto& e) {
        return std::abs(kernels::horner(e.poly, e.at) - kernels::horner(map.default_poly(), e.at)) <= 1e-12;
    });
    // A continuous strictly monotone map on a compact interval has a continuous inverse.
    t.declared_seq_convergent = t.declared_injective && t.declared_continuous;
    t.map = std::move(map);
    return t;
}

double TransformSpec::apply(double x, double match_eps) const {
    switch (kind) {
        case Kind::Identity: return x;
        case Kind::Scaling: return lambda * x;
        case Kind::Piecewise: return eval_map(*map, x, match_eps);
    }
    return x;
}

std::string_view transform_kind_name(TransformSpec::Kind kind) {
    switch (kind) {
        case TransformSpec::Kind::Identity: return "identity";
        case TransformSpec::Kind::Scaling: return "scaling";
        case TransformSpec::Kind::Piecewise: return "piecewise";
    }
    return "?";
}

bool ProblemInstance::operator==(const ProblemInstance& o) const {
    return domain == o.domain && n == o.n && d == o.d && q == o.q && f == o.f && t == o.t &&
           hypothesis == o.hypothesis && order.epsilon == o.order.epsilon && match_eps == o.match_eps;
}

HypothesisCheck validate_hypothesis(const ProblemInstance& p) {
    const double b = p.d.b;
    HypothesisCheck out;
    if (const auto* h1 = std::get_if<Thr1>(&p.hypothesis)) {
        require_operator(h1->a, p.n, "hypothesis.A");
        out.effective = h1->a;
        out.evidence = is_zero_convergent(b * h1->a);
        return out;
    }
    const auto& h2 = std::get<Thr2>(p.hypothesis);
    require_operator(h2.a1, p.n, "hypothesis.A1");
    require_operator(h2.a2, p.n, "hypothesis.A2");
    require_operator(h2.a3, p.n, "hypothesis.A3");
    const auto inv3 = inverse_of_identity_minus(h2.a3);
    if (!inv3) throw ValidationError("hypothesis.A3", "I - A3 is singular");
    const OperatorMatrix sum12 = h2.a1 + h2.a2;
    out.effective = clamp_rounding_negatives(*inv3 * sum12, "hypothesis.A3");
    out.evidence = is_zero_convergent(b * out.effective);
    const OperatorMatrix alternate = clamp_rounding_negatives(sum12 * *inv3, "hypothesis.A3");
    out.alternate_order_radius = spectral_radius(b * alternate).value;
    out.norm_sum = operator_norm_inf(h2.a1) + operator_norm_inf(h2.a2) + operator_norm_inf(h2.a3);
    out.scaled_norm_sum_below_one = b * *out.norm_sum < 1.0;
    return out;
}

void validate_problem(const ProblemInstance& p) {
    if (!std::isfinite(p.domain.lo) || !std::isfinite(p.domain.hi) || !(p.domain.lo < p.domain.hi)) {
        throw ValidationError("domain", "need finite lo < hi");
    }
    if (p.n != 2) throw ValidationError("n", "the built-in distance families are two-dimensional");
    try {
        p.d.validate();
    } catch (const InvalidArgument& e) {
        throw ValidationError("d", e.what());
    }
    try {
        p.q.validate();
    } catch (const InvalidArgument& e) {
        throw ValidationError("q", e.what());
    }
    if (!(p.order.epsilon >= 0.0)) throw ValidationError("tolerances.order_eps", "must be >= 0");
    if (!(p.match_eps >= 0.0)) throw ValidationError("tolerances.match_eps", "must be >= 0");

    const auto pts = probe_points(p.domain, p.f.exception_points());
    for (double x : pts) {
        const double fx = p.eval_f(x);
        if (!std::isfinite(fx) || !p.domain.contains(fx, p.match_eps)) {
            throw ValidationError("f", "f(" + fmt_double(x) + ") = " + fmt_double(fx) + " leaves the domain");
        }
    }

    if (p.t.kind == TransformSpec::Kind::Scaling && !(p.t.lambda > 0.0 && p.t.lambda <= 1.0)) {
        throw ValidationError("T.lambda", "scaling factor must lie in (0, 1], got " + fmt_double(p.t.lambda));
    }
    if (p.t.kind == TransformSpec::Kind::Piecewise && !p.t.map) throw ValidationError("T", "piecewise T needs a map");
    if (!p.t.declared_injective) throw ValidationError("T", "T must be one to one");
    if (!p.t.declared_continuous) throw ValidationError("T", "T must be continuous");
    if (!p.t.declared_seq_convergent) throw ValidationError("T", "T must be sequentially convergent");
    for (double x : pts) {
        const double tx = p.eval_t(x);
        if (!std::isfinite(tx) || !p.domain.contains(tx, p.match_eps)) {
            throw ValidationError("T", "T(" + fmt_double(x) + ") = " + fmt_double(tx) + " leaves the domain");
        }
    }

    const HypothesisCheck check = validate_hypothesis(p);
    if (!check.evidence.verdict) {
        const bool thr1 = std::holds_alternative<Thr1>(p.hypothesis);
        throw ValidationError("hypothesis", std::string(thr1 ? "r(bA)" : "r(b(I - A3)^-1(A1 + A2))") + " = " +
                                                fmt_double(check.evidence.radius.value) + " is not below 1");
    }
}

// ---------------------------------------------------------------------------
// Built-in examples

Example22Constants example_22_constants() {
    const double beta = 0.1, lambda = 0.5, p = 2.0, eta = 1.0;
    const double a11 = 0.01, a12 = 0.01, a21 = 0.01, a22 = 0.01;
    Example22Constants c{};
    c.beta = beta;
    c.lambda = lambda;
    c.row1_lhs = std::pow(beta, p);
    c.row1_rhs = a11 + eta * a12;
    c.row2_lhs = eta * std::pow(beta, p);
    c.row2_rhs = a21 + eta * a22;
    c.gamma = std::min(std::pow(c.row1_rhs, 1.0 / p), std::pow(c.row2_rhs / eta, 1.0 / p));
    return c;
}

std::vector<std::string> builtin_example_ids() { return {"2.2", "2.4", "2.8"}; }

ProblemInstance builtin_example(std::string_view id, const BuiltinOptions& opts) {
    ProblemInstance p;
    p.domain = {0.0, 1.0};
    if (id == "2.2") {
        const auto c = example_22_constants();
        p.d = {2.0, 1.0, 2.0};
        p.q = {2.0, 1.0, 1.0};
        p.f = PiecewisePolyMap({0.0, 0.0, c.beta}, {{1.0, {0.0, c.beta}}});
        p.t = TransformSpec::scaling(c.lambda);
        p.hypothesis = Thr1{OperatorMatrix{{0.01, 0.01}, {0.01, 0.01}}};
    } else if (id == "2.4") {
        p.d = {2.0, opts.alpha, 2.0};
        p.q = {2.0, 1.0, opts.alpha};
        p.f = PiecewisePolyMap({0.0, 0.0, 1.0 / 10.0}, {{1.0, {0.0, 1.0 / 10.0}}});
        p.t = TransformSpec::identity();
        p.hypothesis = Thr1{OperatorMatrix{{2.0 / 10.0, 1.0 / 10.0}, {3.0 / 10.0, 1.0 / 10.0}}};
    } else if (id == "2.8") {
        p.d = {2.0, opts.alpha, 2.0};
        p.q = {2.0, 1.0, opts.alpha};
        p.f = PiecewisePolyMap({0.0, 0.0, 1.0 / 4.0}, {{1.0, {1.0 / 4.0}}});
        p.t = TransformSpec::identity();
        p.hypothesis = Thr2{OperatorMatrix{{1.0 / 5.0, 1.0 / 6.0}, {0.0, 3.0 / 13.0}},
                            OperatorMatrix{{1.0 / 7.0, 0.0}, {0.0, 1.0 / 8.0}},
                            OperatorMatrix{{1.0 / 6.0, 0.0}, {0.0, 2.0 / 9.0}}};
    } else {
        throw UnknownExample("unknown example id '" + std::string(id) + "' (known: 2.2, 2.4, 2.8)");
    }
    validate_problem(p);
    return p;
}

}  // namespace perov
