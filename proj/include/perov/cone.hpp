#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace perov {

/// Element of E = R^n ordered by the nonnegative orthant.
///
/// Entries are always finite; constructors reject NaN and infinities.
class ConeVector {
public:
    explicit ConeVector(std::vector<double> entries);
    ConeVector(std::initializer_list<double> entries);

    /// The zero vector theta of dimension n.
    static ConeVector zero(std::size_t n);
    /// All components equal to `value`.
    static ConeVector filled(std::size_t n, double value);

    std::size_t size() const noexcept { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    std::span<const double> entries() const noexcept { return entries_; }

    double max_component() const noexcept;
    double min_component() const noexcept;
    /// Max-norm. The orthant is a normal cone with constant 1 in this norm.
    double norm_inf() const noexcept;
    bool is_zero() const noexcept;

    ConeVector operator+(const ConeVector& other) const;
    ConeVector operator-(const ConeVector& other) const;
    friend ConeVector operator*(double s, const ConeVector& v);

    bool operator==(const ConeVector&) const = default;

private:
    std::vector<double> entries_;
};

/// Floating-point realization of the cone order.
struct ConeOrderConfig {
    /// Absolute slack; 0 means exact comparison.
    double epsilon = 1e-12;

    /// Normal constant of the orthant under the max-norm. Fixed.
    static constexpr double kNormalConstant = 1.0;

    static ConeOrderConfig exact() { return ConeOrderConfig{0.0}; }
};

/// u ⪯ v: v_i - u_i >= -epsilon for every i.
bool cone_leq(const ConeVector& u, const ConeVector& v, const ConeOrderConfig& cfg = {});

/// u ≪ v: v - u lies in the interior of the orthant, i.e. every v_i - u_i > 0.
bool cone_ll(const ConeVector& u, const ConeVector& v);

/// Largest amount by which u exceeds v in any component (<= 0 when u ⪯ v exactly).
double cone_excess(const ConeVector& u, const ConeVector& v);

}  // namespace perov
