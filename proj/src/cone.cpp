#include "perov/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "perov/errors.hpp"

namespace perov {

namespace {

void require_same_size(const ConeVector& u, const ConeVector& v) {
    if (u.size() != v.size()) {
        throw DimensionMismatch("cone vectors of dimension " + std::to_string(u.size()) + " and " +
                                std::to_string(v.size()));
    }
}

}  // namespace

ConeVector::ConeVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw InvalidArgument("cone vector must have dimension >= 1");
    for (double x : entries_) {
        if (!std::isfinite(x)) throw InvalidArgument("cone vector entries must be finite");
    }
}

ConeVector::ConeVector(std::initializer_list<double> entries) : ConeVector(std::vector<double>(entries)) {}

ConeVector ConeVector::zero(std::size_t n) { return filled(n, 0.0); }

ConeVector ConeVector::filled(std::size_t n, double value) { return ConeVector(std::vector<double>(n, value)); }

double ConeVector::max_component() const noexcept { return *std::max_element(entries_.begin(), entries_.end()); }

double ConeVector::min_component() const noexcept { return *std::min_element(entries_.begin(), entries_.end()); }

double ConeVector::norm_inf() const noexcept {
    double m = 0.0;
    for (double x : entries_) m = std::max(m, std::abs(x));
    return m;
}

bool ConeVector::is_zero() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](double x) { return x == 0.0; });
}

ConeVector ConeVector::operator+(const ConeVector& other) const {
    require_same_size(*this, other);
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = entries_[i] + other.entries_[i];
    return ConeVector(std::move(out));
}

ConeVector ConeVector::operator-(const ConeVector& other) const {
    require_same_size(*this, other);
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = entries_[i] - other.entries_[i];
    return ConeVector(std::move(out));
}

ConeVector operator*(double s, const ConeVector& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v.entries_[i];
    return ConeVector(std::move(out));
}

bool cone_leq(const ConeVector& u, const ConeVector& v, const ConeOrderConfig& cfg) {
    require_same_size(u, v);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (v[i] - u[i] < -cfg.epsilon) return false;
    }
    return true;
}

bool cone_ll(const ConeVector& u, const ConeVector& v) {
    require_same_size(u, v);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(v[i] - u[i] > 0.0)) return false;
    }
    return true;
}

double cone_excess(const ConeVector& u, const ConeVector& v) {
    require_same_size(u, v);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, u[i] - v[i]);
    return worst;
}

}  // namespace perov
