#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "perov/cone.hpp"

namespace perov {

/// Square real matrix acting on R^n as a bounded linear operator.
///
/// Storage is row-major. `is_nonnegative()` is computed at construction and
/// is exactly the condition A(P) ⊂ P for the orthant cone.
class OperatorMatrix {
public:
    static constexpr std::size_t kMaxDimension = 64;

    /// `entries` is row-major and must hold n*n finite values, 1 <= n <= 64.
    OperatorMatrix(std::size_t n, std::vector<double> entries);
    OperatorMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static OperatorMatrix identity(std::size_t n);
    static OperatorMatrix zero(std::size_t n);
    static OperatorMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t row, std::size_t col) const { return entries_[row * n_ + col]; }
    std::span<const double> entries() const noexcept { return entries_; }
    std::vector<std::vector<double>> rows() const;
    bool is_nonnegative() const noexcept { return nonnegative_; }
    bool is_zero() const noexcept;

    OperatorMatrix operator+(const OperatorMatrix& other) const;
    OperatorMatrix operator-(const OperatorMatrix& other) const;
    OperatorMatrix operator*(const OperatorMatrix& other) const;
    ConeVector operator*(const ConeVector& v) const;
    friend OperatorMatrix operator*(double s, const OperatorMatrix& a);

    bool operator==(const OperatorMatrix& other) const { return n_ == other.n_ && entries_ == other.entries_; }

private:
    std::size_t n_;
    std::vector<double> entries_;
    bool nonnegative_;
};

/// Operator norm induced by the max-norm: the largest absolute row sum.
double operator_norm_inf(const OperatorMatrix& a);

/// A^k with A^0 = I, by binary powering.
OperatorMatrix matrix_power(const OperatorMatrix& a, unsigned long long k);

/// Max absolute entry of (a - b).
double max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b);

}  // namespace perov
