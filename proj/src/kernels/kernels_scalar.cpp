#include <limits>

#include "kernels_impl.hpp"
#include "perov/kernels.hpp"

namespace perov::kernels::scalar {

std::size_t count_dominance_violations(std::span<const double> bound, double base, std::span<const double> addend,
                                       double scale, double eps, std::span<std::uint32_t> hits) {
    std::size_t count = 0;
    for (std::size_t k = 0; k < bound.size(); ++k) {
        const double sum = base + addend[k];
        const double rhs = scale * sum;
        const double slack = rhs - bound[k];
        if (slack < -eps) {
            if (count < hits.size()) hits[count] = static_cast<std::uint32_t>(k);
            ++count;
        }
    }
    return count;
}

double max_ratio(std::span<const double> numer, double base, std::span<const double> addend) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < numer.size(); ++k) {
        const double den = base + addend[k];
        if (den > 0.0) {
            const double r = numer[k] / den;
            if (r > best) best = r;
        }
    }
    return best;
}

void horner_batch(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out) {
    for (std::size_t k = 0; k < xs.size(); ++k) out[k] = horner(coeffs, xs[k]);
}

}  // namespace perov::kernels::scalar
