#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "perov/errors.hpp"
#include "perov/problem.hpp"

namespace perov {

/// Members of U_T(x1, x2) for the single-operator hypothesis.
enum class UtMember { Qxy, Qxfx, Qyfy };
std::string_view ut_member_name(UtMember m);

struct ContractionViolation {
    double x1;
    double x2;
    ConeVector lhs;
    /// THR1: the candidate A(.) with the smallest excess; THR2: the full sum.
    ConeVector best_rhs;
};

struct ContractionReport {
    static constexpr std::size_t kMaxViolations = 64;

    bool thr2 = false;
    std::size_t pairs = 0;
    std::size_t violation_count = 0;
    /// Smallest (x1, x2) violations in lexicographic order.
    std::vector<ContractionViolation> violations;
    /// THR1 only: certifying member per sampled pair, aligned with `pair_points`
    /// (nullopt for a violating pair).
    std::vector<std::optional<UtMember>> members;
    std::vector<std::pair<double, double>> pair_points;
    std::array<std::size_t, 3> member_counts{};
    bool pass = true;
};

/// Pairs come from make_pairs(samples.domain, samples.config) plus the
/// exception points of f. Throws InvalidArgument if the hypothesis is THR2.
ContractionReport check_thr1(const ProblemInstance& p, const SampleSet& samples);
/// Throws InvalidArgument if the hypothesis is THR1.
ContractionReport check_thr2(const ProblemInstance& p, const SampleSet& samples);
ContractionReport check_contraction(const ProblemInstance& p, const SampleSet& samples);

enum class StopReason { BoundMet, StepMet, MaxIters };
std::string_view stop_reason_name(StopReason r);

struct StopConfig {
    /// Components of the tolerance vector (tol, ..., tol).
    double tol = 1e-10;
    std::size_t max_iters = 10'000;
    /// When false the iteration always runs to max_iters.
    bool early_stop = true;
};

/// x_0..x_N with step_q[n] = q(Tx_n, T f(x_n)) and tail[n] the a priori bound
/// at n. All three lists have the same length.
struct Trajectory {
    std::vector<double> iterates;
    std::vector<ConeVector> step_q;
    std::vector<ConeVector> tail;
    StopReason reason = StopReason::MaxIters;
    /// f(x_N), computed for the exit checks.
    double next = 0.0;
};

/// Iterates x_{n+1} = f(x_n). Stops at the first n where x_{n+1} == x_n with
/// step_q[n] ⪯ tol (step-met), else where tail[n] ⪯ tol (bound-met), else at
/// max_iters iterates. Throws IterateEscapedDomain if an iterate leaves the
/// domain and InvalidArgument if x0 is outside it.
Trajectory picard_iterate(const ProblemInstance& p, double x0, const StopConfig& stop = {});
Trajectory picard_iterate(const ProblemInstance& p, const OperatorMatrix& a_eff, double x0, const StopConfig& stop);

/// A_eff^n q0.
ConeVector step_bound(const OperatorMatrix& a_eff, const ConeVector& q0, unsigned long long n);

/// b A_eff^n (I - b A_eff)^{-1} q0. Throws SpectralRadiusTooLarge if r(b A_eff) >= 1.
ConeVector apriori_tail_bound(const OperatorMatrix& a_eff, double b, const ConeVector& q0, unsigned long long n);

/// A^n (I - A)^{-1} d0. Throws SpectralRadiusTooLarge if r(A) >= 1.
ConeVector perov_error_bound(const OperatorMatrix& a, const ConeVector& d0, unsigned long long n);

/// (I - A)^{-1} a + A^n (I - A)^{-1} d0. Throws InvalidArgument unless a ⪰ θ.
ConeVector perturbation_bound(const OperatorMatrix& a, const ConeVector& perturbation, const ConeVector& d0,
                              unsigned long long n);

struct CauchyConfig {
    double slack = 1e-12;
    /// Pairwise tail checks only look at the first `pair_window` iterates.
    std::size_t pair_window = 512;
};

/// True iff q(Tx_n, Tx_{n+1}) ⪯ A_eff^n q0 + slack for every recorded n and
/// q(Tx_n, Tx_m) ⪯ tail(n) + slack for recorded n < m. The a priori bound is
/// then a decreasing sequence a_n -> θ dominating the trajectory.
bool cauchy_certificate(const ProblemInstance& p, const Trajectory& t, const OperatorMatrix& a_eff,
                        const CauchyConfig& cfg = {});

struct SolveConfig {
    StopConfig stop;
    /// Used when `starts` is empty: lo, hi and this many seeded points.
    std::size_t random_starts = 8;
    std::uint64_t seed = 42;
    std::vector<double> starts;
    /// Limits must agree pairwise within this; defaults to 2 * stop.tol.
    std::optional<double> uniqueness_tol;
};

struct ProbeEntry {
    double start;
    double limit;
    std::size_t iterations;
    StopReason reason;
};

enum class SolveStatus { Converged, MaxIters };
std::string_view solve_status_name(SolveStatus s);

struct SolveReport {
    SolveStatus status = SolveStatus::Converged;
    double fixed_point = 0.0;
    std::size_t iterations = 0;
    StopReason reason = StopReason::MaxIters;
    /// d(x_N, f(x_N)).
    ConeVector final_step_distance{0.0};
    /// q(Tu*, Tu*).
    ConeVector residual{0.0};
    ConeVector tail_bound{0.0};
    /// |f(u*) - u*|.
    double fixed_point_gap = 0.0;
    /// residual and final step distance ⪯ tol.
    bool residual_within_tolerance = false;
    bool cauchy_certified = false;
    std::vector<ProbeEntry> probe;
    HypothesisCheck hypothesis;
};

/// The uniqueness probe found two converged starts with different limits.
class LimitsDisagree : public Error {
public:
    LimitsDisagree(const std::string& what, SolveReport report) : Error(what), report_(std::move(report)) {}
    const SolveReport& report() const noexcept { return report_; }

private:
    SolveReport report_;
};

/// Picard iteration from every start; u* is the limit from the first start.
/// Throws LimitsDisagree, ValidationError from the hypothesis check, and
/// iteration errors.
SolveReport solve(const ProblemInstance& p, const SolveConfig& cfg = {});

}  // namespace perov
