#include <gtest/gtest.h>

#include <limits>

#include "generators.hpp"
#include "perov/errors.hpp"
#include "perov/operator_matrix.hpp"

using namespace perov;

namespace {

TEST(OperatorNorm, Examples) {
    EXPECT_NEAR(operator_norm_inf(OperatorMatrix{{1.0 / 5, 1.0 / 6}, {0.0, 3.0 / 13}}), 11.0 / 30, 1e-15);
    EXPECT_EQ(operator_norm_inf(OperatorMatrix::zero(3)), 0.0);
    // Row sums 0.3 and 0.4.
    EXPECT_NEAR(operator_norm_inf(OperatorMatrix{{0.2, 0.1}, {0.3, 0.1}}), 0.4, 1e-15);
}

TEST(OperatorNorm, UsesAbsoluteValues) {
    EXPECT_DOUBLE_EQ(operator_norm_inf(OperatorMatrix{{-1.0, 0.5}, {0.0, 1.0}}), 1.5);
}

TEST(MatrixPower, Examples) {
    const OperatorMatrix a{{0.3, 0.7}, {0.1, 0.2}};
    EXPECT_EQ(matrix_power(a, 0), OperatorMatrix::identity(2));
    EXPECT_EQ(matrix_power(OperatorMatrix::identity(3), 7), OperatorMatrix::identity(3));
    EXPECT_EQ(matrix_power(OperatorMatrix{{0.5, 0.0}, {0.0, 0.5}}, 3), (OperatorMatrix{{0.125, 0.0}, {0.0, 0.125}}));
}

TEST(MatrixPower, MatchesRepeatedProduct) {
    proptest::Gen g(11);
    for (int k = 0; k < 50; ++k) {
        const OperatorMatrix a = g.matrix(g.index(1, 5), 0.5);
        OperatorMatrix p = OperatorMatrix::identity(a.size());
        for (unsigned e = 0; e <= 9; ++e) {
            EXPECT_LE(max_abs_diff(matrix_power(a, e), p), 1e-12);
            p = p * a;
        }
    }
}

TEST(OperatorMatrix, Construction) {
    EXPECT_THROW(OperatorMatrix::from_rows({{1.0, 2.0, 3.0}}), DimensionMismatch);
    EXPECT_THROW(OperatorMatrix(2, {1.0, 2.0, 3.0}), DimensionMismatch);
    EXPECT_THROW(OperatorMatrix(1, {std::numeric_limits<double>::infinity()}), InvalidArgument);
    EXPECT_TRUE((OperatorMatrix{{0.0, 1.0}, {2.0, 0.0}}).is_nonnegative());
    EXPECT_FALSE((OperatorMatrix{{0.0, -1.0}, {2.0, 0.0}}).is_nonnegative());
    EXPECT_EQ(OperatorMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}}).rows(),
              (std::vector<std::vector<double>>{{1.0, 2.0}, {3.0, 4.0}}));
}

TEST(OperatorMatrix, ProductWithVector) {
    const OperatorMatrix a{{0.2, 0.1}, {0.3, 0.1}};
    const ConeVector v = a * ConeVector{1.0, 2.0};
    EXPECT_DOUBLE_EQ(v[0], 0.2 + 0.2);
    EXPECT_DOUBLE_EQ(v[1], 0.3 + 0.2);
    EXPECT_THROW(a * ConeVector{1.0}, DimensionMismatch);
}

// A nonnegative operator preserves the cone order.
TEST(OperatorProperty, NonnegativeOperatorsAreMonotone) {
    proptest::Gen g(12);
    const ConeOrderConfig exact = ConeOrderConfig::exact();
    for (int k = 0; k < 1000; ++k) {
        const std::size_t n = g.index(1, 5);
        const OperatorMatrix a = g.matrix(n, 2.0);
        const ConeVector u = g.any_vector(n);
        const ConeVector v = u + g.cone_vector(n);
        ASSERT_TRUE(cone_leq(u, v, exact));
        // Av - Au = A(v - u) is computed as a nonnegative combination.
        EXPECT_TRUE(cone_leq(ConeVector::zero(n), a * (v - u), exact));
        EXPECT_TRUE(cone_leq(a * u, a * v, ConeOrderConfig{1e-12}));
    }
}

}  // namespace
