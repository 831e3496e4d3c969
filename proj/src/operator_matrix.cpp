#include "perov/operator_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perov/errors.hpp"

namespace perov {

namespace {

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DimensionMismatch("operator dimensions " + std::to_string(a) + " and " + std::to_string(b));
    }
}

}  // namespace

OperatorMatrix::OperatorMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)), nonnegative_(true) {
    if (n_ == 0 || n_ > kMaxDimension) {
        throw InvalidArgument("operator dimension must be in [1, 64], got " + std::to_string(n_));
    }
    if (entries_.size() != n_ * n_) {
        throw DimensionMismatch("operator of dimension " + std::to_string(n_) + " needs " +
                                std::to_string(n_ * n_) + " entries, got " + std::to_string(entries_.size()));
    }
    for (double x : entries_) {
        if (!std::isfinite(x)) throw InvalidArgument("operator entries must be finite");
        if (x < 0.0) nonnegative_ = false;
    }
}

OperatorMatrix::OperatorMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : OperatorMatrix(from_rows(std::vector<std::vector<double>>(rows.begin(), rows.end()))) {}

OperatorMatrix OperatorMatrix::identity(std::size_t n) {
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return OperatorMatrix(n, std::move(e));
}

OperatorMatrix OperatorMatrix::zero(std::size_t n) { return OperatorMatrix(n, std::vector<double>(n * n, 0.0)); }

OperatorMatrix OperatorMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    std::vector<double> e;
    e.reserve(n * n);
    for (const auto& row : rows) {
        if (row.size() != n) {
            throw DimensionMismatch("operator must be square: " + std::to_string(n) + " rows but a row of " +
                                    std::to_string(row.size()) + " entries");
        }
        e.insert(e.end(), row.begin(), row.end());
    }
    return OperatorMatrix(n, std::move(e));
}

std::vector<std::vector<double>> OperatorMatrix::rows() const {
    std::vector<std::vector<double>> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i].assign(entries_.begin() + i * n_, entries_.begin() + (i + 1) * n_);
    return out;
}

bool OperatorMatrix::is_zero() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](double x) { return x == 0.0; });
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& other) const {
    require_same_size(n_, other.n_);
    std::vector<double> e(entries_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = entries_[i] + other.entries_[i];
    return OperatorMatrix(n_, std::move(e));
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& other) const {
    require_same_size(n_, other.n_);
    std::vector<double> e(entries_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = entries_[i] - other.entries_[i];
    return OperatorMatrix(n_, std::move(e));
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& other) const {
    require_same_size(n_, other.n_);
    std::vector<double> e(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = 0; k < n_; ++k) {
            const double aik = entries_[i * n_ + k];
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) e[i * n_ + j] += aik * other.entries_[k * n_ + j];
        }
    }
    return OperatorMatrix(n_, std::move(e));
}

ConeVector OperatorMatrix::operator*(const ConeVector& v) const {
    require_same_size(n_, v.size());
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j) acc += entries_[i * n_ + j] * v[j];
        out[i] = acc;
    }
    return ConeVector(std::move(out));
}

OperatorMatrix operator*(double s, const OperatorMatrix& a) {
    std::vector<double> e(a.entries_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = s * a.entries_[i];
    return OperatorMatrix(a.n_, std::move(e));
}

double operator_norm_inf(const OperatorMatrix& a) {
    const std::size_t n = a.size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(a(i, j));
        best = std::max(best, row);
    }
    return best;
}

OperatorMatrix matrix_power(const OperatorMatrix& a, unsigned long long k) {
    OperatorMatrix result = OperatorMatrix::identity(a.size());
    OperatorMatrix base = a;
    while (k > 0) {
        if (k & 1ULL) result = result * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return result;
}

double max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_size(a.size(), b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

}  // namespace perov
