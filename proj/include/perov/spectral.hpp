#pragma once

#include <cstdint>
#include <optional>

#include "perov/operator_matrix.hpp"

namespace perov {

struct SpectralRadiusOptions {
    std::size_t max_iterations = 10'000;
    double tolerance = 1e-10;
};

/// Spectral radius of a nonnegative matrix with a certified bracket.
///
/// `lower`/`upper` always enclose r(A): the lower end comes from
/// Collatz-Wielandt ratios (A x >= mu x, x >= 0 implies r >= mu), the upper
/// end from Collatz-Wielandt ratios on a strictly positive x and from the
/// Gelfand values ||A^k||^{1/k}, k in {1, 16, 32, 64}.
struct SpectralRadius {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    /// ||A^k||^{1/k} for k = 16, 32, 64.
    double gelfand16 = 0.0;
    double gelfand32 = 0.0;
    double gelfand64 = 0.0;
};

/// Power iteration on A + I from the all-ones vector (Perron-Frobenius makes
/// r(A + I) = r(A) + 1 for nonnegative A, and the shift removes periodicity).
/// Throws InvalidArgument if A has a negative entry.
SpectralRadius spectral_radius(const OperatorMatrix& a, const SpectralRadiusOptions& opts = {});

/// Strict upper bound used where r(A) < 1 is a precondition.
bool spectral_radius_below_one(const OperatorMatrix& a);

struct NeumannOptions {
    /// Inputs with r(A) >= 1 - margin are rejected.
    double margin = 1e-12;
    /// Relative agreement demanded between the direct inverse and the series.
    double series_tolerance = 1e-8;
};

/// (I - A)^{-1} by a pivoted LU solve, cross-checked against the partial sums
/// of I + A + A^2 + ... (evaluated by doubling as (I + A)(I + A^2)(I + A^4)...).
/// Throws SpectralRadiusTooLarge when r(A) >= 1 - margin, SingularSystem if the
/// solve fails or disagrees with the series.
OperatorMatrix neumann_inverse(const OperatorMatrix& a, const NeumannOptions& opts = {});

/// Unchecked (I - A)^{-1}; nullopt if I - A is numerically singular.
std::optional<OperatorMatrix> inverse_of_identity_minus(const OperatorMatrix& a);

struct ZeroConvergenceOptions {
    /// ||A^k|| below this counts as decayed.
    double decay_threshold = 1e-8;
    /// Largest exponent probed is 2^max_doublings.
    unsigned max_doublings = 48;
    /// |r - 1| below this is near-critical and never raises a disagreement.
    double critical_band = 1e-6;
    /// Slack for the entrywise nonnegativity of (I - A)^{-1}.
    double epsilon = 1e-12;
    double series_tolerance = 1e-6;
};

/// Evidence for the four equivalent characterizations of A^k -> 0.
struct ZeroConvergenceEvidence {
    bool power_decay = false;
    /// Exponent at which ||A^k|| first fell below the threshold (0 if never).
    std::uint64_t decay_exponent = 0;
    bool eigenvalue_criterion = false;
    SpectralRadius radius;
    bool neumann_invertible = false;
    bool inverse_nonnegative = false;
    /// True iff all four criteria hold.
    bool verdict = false;
    /// |r - 1| inside the critical band; criteria may legitimately disagree.
    bool near_critical = false;
    bool criteria_agree = true;
};

/// Evaluates the four criteria independently. Requires a nonnegative matrix.
/// Throws CriteriaDisagreement when they disagree outside the critical band.
ZeroConvergenceEvidence is_zero_convergent(const OperatorMatrix& a, const ZeroConvergenceOptions& opts = {});

}  // namespace perov
