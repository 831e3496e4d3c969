#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "generators.hpp"
#include "perov/engine.hpp"
#include "perov/errors.hpp"

using namespace perov;

namespace {

using M2 = std::array<std::array<double, 2>, 2>;
using V2 = std::array<double, 2>;

V2 mul(const M2& a, const V2& v) { return {a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]}; }

/// (I - A)^{-1} v by Cramer's rule.
V2 solve_identity_minus(const M2& a, const V2& v) {
    const double p = 1.0 - a[0][0], q = -a[0][1], r = -a[1][0], s = 1.0 - a[1][1];
    const double det = p * s - q * r;
    return {(s * v[0] - q * v[1]) / det, (p * v[1] - r * v[0]) / det};
}

SampleSet samples_of(const ProblemInstance& p, std::size_t grid = 33, std::size_t random = 256) {
    return make_samples(p.domain, SamplingConfig{grid, random, 42}, p.f.exception_points());
}

void expect_near(const ConeVector& got, const V2& want, double tol) {
    ASSERT_EQ(got.size(), 2u);
    EXPECT_NEAR(got[0], want[0], tol);
    EXPECT_NEAR(got[1], want[1], tol);
}

TEST(CheckThr1, Example24Passes) {
    const ProblemInstance p = builtin_example("2.4");
    const ContractionReport r = check_thr1(p, samples_of(p));
    EXPECT_TRUE(r.pass);
    EXPECT_FALSE(r.thr2);
    EXPECT_EQ(r.violation_count, 0u);
    EXPECT_GT(r.pairs, 33u * 33u);
    EXPECT_EQ(r.members.size(), r.pairs);
    EXPECT_EQ(r.pair_points.size(), r.pairs);
    EXPECT_EQ(r.member_counts[0], r.pairs);
    for (const auto& m : r.members) EXPECT_EQ(m, UtMember::Qxy);
}

TEST(CheckThr1, ZeroOperatorWithIdentityMapFails) {
    ProblemInstance p = builtin_example("2.4");
    p.f = PiecewisePolyMap({0.0, 1.0});
    p.hypothesis = Thr1{OperatorMatrix::zero(2)};
    const ContractionReport r = check_thr1(p, samples_of(p, 33, 0));
    EXPECT_FALSE(r.pass);
    ASSERT_FALSE(r.violations.empty());
    EXPECT_LE(r.violations.size(), ContractionReport::kMaxViolations);
    const ContractionViolation& v = r.violations.front();
    EXPECT_EQ(v.x1, 0.0);
    EXPECT_EQ(v.x2, 1.0 / 32.0);
    EXPECT_EQ(v.lhs, (ConeVector{1.0 / 1024.0, 1.0 / 1024.0}));
    EXPECT_TRUE(v.best_rhs.is_zero());
    for (std::size_t k = 1; k < r.violations.size(); ++k) {
        const auto& a = r.violations[k - 1];
        const auto& b = r.violations[k];
        EXPECT_TRUE(a.x1 < b.x1 || (a.x1 == b.x1 && a.x2 <= b.x2));
    }
    // Pairs with x2 = 0 have q = θ on the left and are certified.
    for (std::size_t k = 0; k < r.pairs; ++k) {
        if (r.pair_points[k].second == 0.0) {
            EXPECT_TRUE(r.members[k].has_value());
        }
    }
}

TEST(CheckThr1, RejectsThr2) {
    const ProblemInstance p = builtin_example("2.8");
    EXPECT_THROW(check_thr1(p, samples_of(p)), InvalidArgument);
    EXPECT_THROW(check_thr2(builtin_example("2.4"), samples_of(p)), InvalidArgument);
}

TEST(CheckThr2, Example28Passes) {
    const ProblemInstance p = builtin_example("2.8");
    const ContractionReport r = check_contraction(p, samples_of(p));
    EXPECT_TRUE(r.thr2);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.violation_count, 0u);
}

TEST(CheckThr2, ZeroedOperatorsFail) {
    ProblemInstance p = builtin_example("2.8", {2.0});
    p.hypothesis = Thr2{OperatorMatrix::zero(2), OperatorMatrix::zero(2), OperatorMatrix::zero(2)};
    const ContractionReport r = check_thr2(p, samples_of(p, 2, 0));
    EXPECT_FALSE(r.pass);
    ASSERT_FALSE(r.violations.empty());
    const ContractionViolation& v = r.violations.front();
    EXPECT_EQ(v.x1, 0.0);
    EXPECT_EQ(v.x2, 1.0);
    EXPECT_EQ(v.lhs, (ConeVector{1.0 / 16.0, 2.0 / 16.0}));
}

TEST(Picard, Example24Iterates) {
    const ProblemInstance p = builtin_example("2.4");
    const Trajectory t = picard_iterate(p, 0.5);
    ASSERT_GE(t.iterates.size(), 4u);
    EXPECT_DOUBLE_EQ(t.iterates[0], 0.5);
    EXPECT_DOUBLE_EQ(t.iterates[1], 0.025);
    EXPECT_DOUBLE_EQ(t.iterates[2], 6.25e-5);
    EXPECT_NEAR(t.iterates[3], 3.90625e-10, 1e-24);
    EXPECT_EQ(t.iterates.size(), t.step_q.size());
    EXPECT_EQ(t.iterates.size(), t.tail.size());
    EXPECT_EQ(t.next, p.eval_f(t.iterates.back()));
    EXPECT_NE(t.reason, StopReason::MaxIters);
}

TEST(Picard, FixedStart) {
    const Trajectory t = picard_iterate(builtin_example("2.4"), 0.0);
    ASSERT_EQ(t.iterates.size(), 1u);
    EXPECT_EQ(t.reason, StopReason::StepMet);
    EXPECT_TRUE(t.step_q[0].is_zero());
    EXPECT_TRUE(t.tail[0].is_zero());
}

TEST(Picard, Example28FromOne) {
    const Trajectory t = picard_iterate(builtin_example("2.8"), 1.0);
    ASSERT_GE(t.iterates.size(), 3u);
    EXPECT_EQ(t.iterates[1], 0.25);
    EXPECT_EQ(t.iterates[2], 0.25 * 0.25 * 0.25);
}

TEST(Picard, StopRules) {
    const ProblemInstance p = builtin_example("2.4");
    const Trajectory capped = picard_iterate(p, 1.0, StopConfig{1e-10, 3, true});
    EXPECT_EQ(capped.reason, StopReason::MaxIters);
    EXPECT_EQ(capped.iterates.size(), 3u);
    const Trajectory full = picard_iterate(p, 0.0, StopConfig{1e-10, 5, false});
    EXPECT_EQ(full.reason, StopReason::MaxIters);
    EXPECT_EQ(full.iterates.size(), 5u);
    EXPECT_THROW(picard_iterate(p, 1.5), InvalidArgument);
}

TEST(Picard, EscapeIsReported) {
    ProblemInstance p = builtin_example("2.4");
    p.f = PiecewisePolyMap({0.5, 1.0});
    EXPECT_THROW(picard_iterate(p, 0.8), IterateEscapedDomain);
}

TEST(Bounds, ClosedFormOracle) {
    const M2 a{{{0.2, 0.1}, {0.3, 0.1}}};
    const OperatorMatrix op{{0.2, 0.1}, {0.3, 0.1}};
    const V2 q0{0.01, 0.02};
    V2 pow_q = q0;
    for (unsigned n = 0; n <= 12; ++n) {
        expect_near(step_bound(op, ConeVector{q0[0], q0[1]}, n), pow_q, 1e-17);
        // b A^n (I - bA)^{-1} q0 with b = 2.
        const M2 ba{{{0.4, 0.2}, {0.6, 0.2}}};
        const V2 inv = solve_identity_minus(ba, q0);
        V2 tail = inv;
        for (unsigned k = 0; k < n; ++k) tail = mul(a, tail);
        expect_near(apriori_tail_bound(op, 2.0, ConeVector{q0[0], q0[1]}, n), {2.0 * tail[0], 2.0 * tail[1]}, 1e-15);
        pow_q = mul(a, pow_q);
    }
    EXPECT_THROW(apriori_tail_bound(op, 4.0, ConeVector{1.0, 1.0}, 1), SpectralRadiusTooLarge);
}

TEST(Bounds, PerovAndPerturbation) {
    const OperatorMatrix a{{0.5, 0.0}, {0.0, 0.5}};
    expect_near(perov_error_bound(a, ConeVector{1.0, 1.0}, 3), {0.25, 0.25}, 1e-15);
    expect_near(perturbation_bound(a, ConeVector{0.1, 0.1}, ConeVector{1.0, 1.0}, 3), {0.45, 0.45}, 1e-15);
    EXPECT_THROW(perturbation_bound(a, ConeVector{-0.1, 0.1}, ConeVector{1.0, 1.0}, 3), InvalidArgument);
    EXPECT_THROW(perov_error_bound(OperatorMatrix::identity(2), ConeVector{1.0, 1.0}, 1), SpectralRadiusTooLarge);
}

TEST(Cauchy, CertificateHoldsAndCatchesTampering) {
    for (const auto& id : builtin_example_ids()) {
        const ProblemInstance p = builtin_example(id);
        const HypothesisCheck h = validate_hypothesis(p);
        const Trajectory t = picard_iterate(p, h.effective, 1.0, StopConfig{});
        EXPECT_TRUE(cauchy_certificate(p, t, h.effective)) << id;
    }
    const ProblemInstance p = builtin_example("2.4");
    const OperatorMatrix a = std::get<Thr1>(p.hypothesis).a;
    Trajectory t = picard_iterate(p, a, 0.9, StopConfig{});
    ASSERT_GT(t.iterates.size(), 3u);
    t.iterates[2] = 0.9;
    EXPECT_FALSE(cauchy_certificate(p, t, a));
}

TEST(Solve, BuiltinsReachZero) {
    for (const auto& id : builtin_example_ids()) {
        const SolveReport s = solve(builtin_example(id));
        EXPECT_EQ(s.status, SolveStatus::Converged) << id;
        EXPECT_NEAR(s.fixed_point, 0.0, 1e-9) << id;
        EXPECT_TRUE(s.residual_within_tolerance) << id;
        EXPECT_TRUE(s.cauchy_certified) << id;
        EXPECT_EQ(s.probe.size(), 10u) << id;
        EXPECT_EQ(s.probe.front().start, 0.0) << id;
        EXPECT_EQ(s.probe[1].start, 1.0) << id;
        EXPECT_LE(s.fixed_point_gap, 1e-10) << id;
    }
}

TEST(Solve, TwoFixedPointsDisagree) {
    ProblemInstance p = builtin_example("2.4");
    p.f = PiecewisePolyMap({0.0, 0.0, 1.0});
    p.hypothesis = Thr1{OperatorMatrix{{0.1, 0.0}, {0.0, 0.1}}};
    try {
        solve(p);
        FAIL();
    } catch (const LimitsDisagree& e) {
        const auto& probe = e.report().probe;
        ASSERT_GE(probe.size(), 2u);
        EXPECT_EQ(probe[0].limit, 0.0);
        EXPECT_EQ(probe[1].limit, 1.0);
    }
}

TEST(Solve, IterationCapIsAStatus) {
    SolveConfig cfg;
    cfg.stop.max_iters = 2;
    cfg.starts = {1.0};
    const SolveReport s = solve(builtin_example("2.4"), cfg);
    EXPECT_EQ(s.status, SolveStatus::MaxIters);
    EXPECT_EQ(s.reason, StopReason::MaxIters);
}

// q(Tx_n, Tx_{n+1}) ⪯ A^n q0 along every trajectory.
TEST(EngineProperty, StepsBoundedByOperatorPowers) {
    proptest::Gen g(61);
    for (const auto& id : builtin_example_ids()) {
        const ProblemInstance p = builtin_example(id, {g.uniform(1.0, 4.0)});
        const HypothesisCheck h = validate_hypothesis(p);
        for (int k = 0; k < 25; ++k) {
            const Trajectory t = picard_iterate(p, h.effective, g.uniform(0, 1), StopConfig{});
            for (std::size_t n = 0; n < t.step_q.size(); ++n) {
                EXPECT_TRUE(cone_leq(t.step_q[n], step_bound(h.effective, t.step_q[0], n))) << id << " n=" << n;
            }
        }
    }
}

// The a priori tail dominates q(Tx_n, Tx_m) for every later m.
TEST(EngineProperty, TailIsAMajorant) {
    proptest::Gen g(62);
    for (const auto& id : builtin_example_ids()) {
        const ProblemInstance p = builtin_example(id, {g.uniform(1.0, 4.0)});
        const HypothesisCheck h = validate_hypothesis(p);
        for (int k = 0; k < 25; ++k) {
            const Trajectory t = picard_iterate(p, h.effective, g.uniform(0, 1), StopConfig{1e-10, 20, false});
            for (std::size_t n = 0; n < 20; ++n) {
                for (std::size_t m = n + 1; m < 20; ++m) {
                    EXPECT_TRUE(cone_leq(p.qt(t.iterates[n], t.iterates[m]), t.tail[n])) << id;
                }
            }
        }
    }
}

TEST(EngineProperty, TailVanishes) {
    proptest::Gen g(63);
    for (const auto& id : builtin_example_ids()) {
        const ProblemInstance p = builtin_example(id);
        const HypothesisCheck h = validate_hypothesis(p);
        for (int k = 0; k < 20; ++k) {
            const double x0 = g.uniform(0, 1);
            const ConeVector tail = apriori_tail_bound(h.effective, p.d.b, p.qt(x0, p.eval_f(x0)), 200);
            EXPECT_LT(tail.norm_inf(), 1e-8) << id;
        }
    }
}

// Under THR2 the steps obey q_n ⪯ (I - A3)^{-1}(A1 + A2) q_{n-1}.
TEST(EngineProperty, ThreeOperatorStepRecurrence) {
    proptest::Gen g(64);
    const ProblemInstance p = builtin_example("2.8", {g.uniform(1.0, 3.0)});
    const HypothesisCheck h = validate_hypothesis(p);
    for (int k = 0; k < 50; ++k) {
        const Trajectory t = picard_iterate(p, h.effective, g.uniform(0, 1), StopConfig{1e-10, 30, false});
        for (std::size_t n = 1; n < t.step_q.size(); ++n) {
            EXPECT_TRUE(cone_leq(t.step_q[n], h.effective * t.step_q[n - 1]));
        }
    }
}

// Scaling T by lambda multiplies q(T., T.) by lambda^p.
TEST(EngineProperty, ScalingTransformConsistency) {
    proptest::Gen g(65);
    ProblemInstance id = builtin_example("2.4");
    ProblemInstance sc = id;
    for (int k = 0; k < 200; ++k) {
        const double lambda = g.uniform(0.05, 1.0);
        sc.t = TransformSpec::scaling(lambda);
        const double x = g.uniform(0, 1), y = g.uniform(0, 1);
        const ConeVector a = sc.qt(x, y), b = id.qt(x, y);
        for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(a[i], std::pow(lambda, id.q.p) * b[i], 1e-15);
    }
}

// Affine map on R^2 with componentwise distance: d(x_n, u*) ⪯ A^n (I - A)^{-1} d(x_0, x_1).
TEST(EngineProperty, AffinePerovMapObeysErrorBound) {
    proptest::Gen g(66);
    for (int k = 0; k < 200; ++k) {
        M2 m;
        for (auto& row : m)
            for (double& x : row) x = g.uniform(-0.45, 0.45);
        const OperatorMatrix a{{std::abs(m[0][0]), std::abs(m[0][1])}, {std::abs(m[1][0]), std::abs(m[1][1])}};
        const V2 c{g.uniform(-1, 1), g.uniform(-1, 1)};
        auto step = [&](const V2& x) {
            const V2 y = mul(m, x);
            return V2{y[0] + c[0], y[1] + c[1]};
        };
        // u* = (I - M)^{-1} c.
        const double p = 1.0 - m[0][0], q = -m[0][1], r = -m[1][0], s = 1.0 - m[1][1];
        const double det = p * s - q * r;
        const V2 fixed{(s * c[0] - q * c[1]) / det, (p * c[1] - r * c[0]) / det};
        V2 x{g.uniform(-3, 3), g.uniform(-3, 3)};
        const V2 x1 = step(x);
        const ConeVector d0{std::abs(x1[0] - x[0]), std::abs(x1[1] - x[1])};
        for (unsigned n = 0; n < 30; ++n) {
            const ConeVector err{std::abs(x[0] - fixed[0]), std::abs(x[1] - fixed[1])};
            EXPECT_TRUE(cone_leq(err, perov_error_bound(a, d0, n), ConeOrderConfig{1e-12}));
            x = step(x);
        }
    }
}

}  // namespace
