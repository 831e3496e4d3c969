#include "perov/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "perov/errors.hpp"

namespace perov {

namespace {

using Dense = Eigen::MatrixXd;

Dense to_dense(const OperatorMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Dense m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return m;
}

OperatorMatrix from_dense(const Dense& m) {
    const auto n = static_cast<std::size_t>(m.rows());
    std::vector<double> e(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e[i * n + j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return OperatorMatrix(n, std::move(e));
}

/// Max absolute row sum; tolerates infinities.
double norm_inf(const Dense& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

void require_nonnegative(const OperatorMatrix& a, const char* who) {
    if (!a.is_nonnegative()) throw InvalidArgument(std::string(who) + " requires a nonnegative matrix");
}

// Gelfand values are only trusted while ||A^k|| is a normal, finite number;
// an underflowed power would otherwise report an upper bound of zero.
double gelfand_value(const Dense& power, double k) {
    const double nrm = norm_inf(power);
    if (!std::isfinite(nrm) || nrm < 1e-280) return std::numeric_limits<double>::infinity();
    return std::pow(nrm, 1.0 / k);
}

struct SeriesResult {
    bool converged = false;
    Dense sum;
};

// Partial sums of I + A + A^2 + ... by doubling: S_{j+1} = S_j (I + A^{2^j}).
// For nonnegative A every product is cancellation free.
SeriesResult neumann_series(const Dense& a, unsigned max_doublings, double rel_tol) {
    const auto n = a.rows();
    SeriesResult out;
    out.sum = Dense::Identity(n, n);
    Dense power = a;
    for (unsigned j = 0; j <= max_doublings; ++j) {
        const Dense increment = out.sum * power;
        const double inc = norm_inf(increment);
        if (!std::isfinite(inc)) return out;
        out.sum += increment;
        if (inc <= rel_tol * norm_inf(out.sum)) {
            out.converged = true;
            return out;
        }
        power = power * power;
    }
    return out;
}

}  // namespace

SpectralRadius spectral_radius(const OperatorMatrix& a, const SpectralRadiusOptions& opts) {
    require_nonnegative(a, "spectral_radius");
    const Dense m = to_dense(a);
    const auto n = m.rows();
    SpectralRadius out;

    // Gelfand bracket: r(A) <= ||A^k||^{1/k} for every k.
    Dense p = m;
    for (int s = 1; s <= 6; ++s) {
        p = p * p;
        if (s == 4) out.gelfand16 = gelfand_value(p, 16.0);
        if (s == 5) out.gelfand32 = gelfand_value(p, 32.0);
        if (s == 6) out.gelfand64 = gelfand_value(p, 64.0);
    }
    double upper = std::min({norm_inf(m), out.gelfand16, out.gelfand32, out.gelfand64});

    // Nilpotent matrices: A^n = 0 exactly (no cancellation in nonnegative products).
    Dense pn = Dense::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) pn = pn * m;
    if (pn.isZero(0.0)) {
        out.converged = true;
        return out;
    }

    const Dense shifted = m + Dense::Identity(n, n);
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    double lower = 0.0;
    double estimate = 0.0;
    double previous = -1.0;
    double previous_delta = 0.0;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        const Eigen::VectorXd y = shifted * x;
        const double lambda = y.maxCoeff();  // ||x||_inf == 1 and y >= x > 0
        double min_ratio = std::numeric_limits<double>::infinity();
        double max_ratio = 0.0;
        bool strictly_positive = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (x(i) > 0.0) {
                const double ratio = y(i) / x(i);
                min_ratio = std::min(min_ratio, ratio);
                max_ratio = std::max(max_ratio, ratio);
            } else {
                strictly_positive = false;
            }
        }
        lower = std::max(lower, min_ratio - 1.0);
        if (strictly_positive) upper = std::min(upper, max_ratio - 1.0);
        estimate = lambda - 1.0;
        out.iterations = it;

        const double scale = std::max(1.0, std::abs(estimate));
        const bool bracket_closed = upper - lower <= opts.tolerance * scale;
        // Geometric convergence: the remaining error is about delta * rho / (1 - rho).
        const double delta = std::abs(lambda - previous);
        const double rho = previous_delta > 0.0 ? delta / previous_delta : 0.0;
        const double remaining = rho < 1.0 ? delta * rho / (1.0 - rho) : std::numeric_limits<double>::infinity();
        const bool stationary = delta <= opts.tolerance * scale && remaining <= opts.tolerance * scale;
        if (bracket_closed || stationary) {
            out.converged = true;
            break;
        }
        previous_delta = it > 1 ? delta : 0.0;
        previous = lambda;
        x = y / lambda;
    }

    lower = std::max(lower, 0.0);
    out.lower = lower;
    out.upper = std::max(upper, lower);
    // The estimate must sit inside the certified bracket; a stationary
    // estimate far outside it is not trusted.
    const double slack = 1e-9 * std::max(1.0, std::abs(estimate));
    if (estimate > out.upper + slack || estimate < out.lower - slack) out.converged = false;
    out.value = std::clamp(estimate, out.lower, out.upper);
    return out;
}

bool spectral_radius_below_one(const OperatorMatrix& a) {
    const SpectralRadius r = spectral_radius(a);
    return r.converged ? r.value < 1.0 : r.upper < 1.0;
}

std::optional<OperatorMatrix> inverse_of_identity_minus(const OperatorMatrix& a) {
    const Dense m = Dense::Identity(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(a.size())) - to_dense(a);
    Eigen::FullPivLU<Dense> lu(m);
    if (!lu.isInvertible()) return std::nullopt;
    const Dense inv = lu.inverse();
    if (!inv.allFinite()) return std::nullopt;
    return from_dense(inv);
}

OperatorMatrix neumann_inverse(const OperatorMatrix& a, const NeumannOptions& opts) {
    require_nonnegative(a, "neumann_inverse");
    const SpectralRadius r = spectral_radius(a);
    const double radius = r.converged ? r.value : r.upper;
    if (radius >= 1.0 - opts.margin) {
        std::ostringstream os;
        os << "neumann_inverse needs r(A) < 1, got r(A) = " << radius;
        throw SpectralRadiusTooLarge(os.str(), radius);
    }
    auto inv = inverse_of_identity_minus(a);
    if (!inv) throw SingularSystem("I - A is singular");

    const SeriesResult series = neumann_series(to_dense(a), 64, 1e-17);
    const OperatorMatrix sum = from_dense(series.sum);
    const double scale = std::max(1.0, operator_norm_inf(*inv));
    if (max_abs_diff(sum, *inv) > opts.series_tolerance * scale) {
        throw SingularSystem("direct inverse of I - A disagrees with its Neumann series");
    }
    return *inv;
}

ZeroConvergenceEvidence is_zero_convergent(const OperatorMatrix& a, const ZeroConvergenceOptions& opts) {
    require_nonnegative(a, "is_zero_convergent");
    ZeroConvergenceEvidence ev;
    const Dense m = to_dense(a);

    // (i) ||A^k|| -> 0, probed at k = 1, 2, 4, ..., 2^max_doublings.
    {
        Dense power = m;
        std::uint64_t k = 1;
        for (unsigned j = 0; j <= opts.max_doublings; ++j) {
            const double nrm = norm_inf(power);
            if (nrm < opts.decay_threshold) {
                ev.power_decay = true;
                ev.decay_exponent = k;
                break;
            }
            if (!std::isfinite(nrm) || nrm > 1e300) break;
            power = power * power;
            k *= 2;
        }
    }

    // (ii) every eigenvalue in the open unit disc, i.e. r(A) < 1.
    ev.radius = spectral_radius(a);
    ev.eigenvalue_criterion = ev.radius.value < 1.0;
    ev.near_critical = std::abs(ev.radius.value - 1.0) < opts.critical_band ||
                       (!ev.radius.converged && ev.radius.lower < 1.0 && ev.radius.upper >= 1.0);

    // (iii) I - A invertible and equal to the convergent series I + A + A^2 + ...
    // (iv) (I - A)^{-1} entrywise nonnegative.
    if (auto inv = inverse_of_identity_minus(a)) {
        const double scale = std::max(1.0, operator_norm_inf(*inv));
        const SeriesResult series = neumann_series(m, opts.max_doublings, 1e-16);
        if (series.converged && series.sum.allFinite()) {
            ev.neumann_invertible = max_abs_diff(from_dense(series.sum), *inv) <= opts.series_tolerance * scale;
        }
        const auto e = inv->entries();
        ev.inverse_nonnegative =
            std::all_of(e.begin(), e.end(), [&](double x) { return x >= -opts.epsilon * scale; });
    }

    const bool c[4] = {ev.power_decay, ev.eigenvalue_criterion, ev.neumann_invertible, ev.inverse_nonnegative};
    ev.criteria_agree = c[0] == c[1] && c[1] == c[2] && c[2] == c[3];
    if (!ev.criteria_agree && !ev.near_critical) {
        std::ostringstream os;
        os << "zero-convergence criteria disagree (power decay " << c[0] << ", r(A) < 1 " << c[1]
           << " [r = " << ev.radius.value << "], Neumann series " << c[2] << ", nonnegative inverse " << c[3] << ")";
        throw CriteriaDisagreement(os.str());
    }
    ev.verdict = ev.criteria_agree && c[0];
    return ev;
}

}  // namespace perov
