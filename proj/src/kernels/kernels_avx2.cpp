// Compiled with -mavx2 only; never called unless the CPU reports AVX2.
#include <immintrin.h>

#include <bit>
#include <limits>

#include "kernels_impl.hpp"
#include "perov/kernels.hpp"

namespace perov::kernels::avx2 {

std::size_t count_dominance_violations(std::span<const double> bound, double base, std::span<const double> addend,
                                       double scale, double eps, std::span<std::uint32_t> hits) {
    const std::size_t n = bound.size();
    const __m256d vbase = _mm256_set1_pd(base);
    const __m256d vscale = _mm256_set1_pd(scale);
    const __m256d vneg_eps = _mm256_set1_pd(-eps);
    std::size_t count = 0;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d sum = _mm256_add_pd(vbase, _mm256_loadu_pd(addend.data() + k));
        const __m256d rhs = _mm256_mul_pd(vscale, sum);
        const __m256d slack = _mm256_sub_pd(rhs, _mm256_loadu_pd(bound.data() + k));
        unsigned mask = static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(slack, vneg_eps, _CMP_LT_OQ)));
        while (mask != 0) {
            const unsigned lane = static_cast<unsigned>(std::countr_zero(mask));
            if (count < hits.size()) hits[count] = static_cast<std::uint32_t>(k + lane);
            ++count;
            mask &= mask - 1;
        }
    }
    for (; k < n; ++k) {
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
    const std::size_t n = numer.size();
    const __m256d vbase = _mm256_set1_pd(base);
    const __m256d vzero = _mm256_setzero_pd();
    const __m256d vninf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    __m256d vbest = vninf;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d den = _mm256_add_pd(vbase, _mm256_loadu_pd(addend.data() + k));
        const __m256d valid = _mm256_cmp_pd(den, vzero, _CMP_GT_OQ);
        // Invalid lanes divide by 1 and are then masked out.
        const __m256d safe_den = _mm256_blendv_pd(_mm256_set1_pd(1.0), den, valid);
        const __m256d ratio = _mm256_div_pd(_mm256_loadu_pd(numer.data() + k), safe_den);
        vbest = _mm256_max_pd(vbest, _mm256_blendv_pd(vninf, ratio, valid));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vbest);
    double best = lanes[0];
    for (int i = 1; i < 4; ++i)
        if (lanes[i] > best) best = lanes[i];
    for (; k < n; ++k) {
        const double den = base + addend[k];
        if (den > 0.0) {
            const double r = numer[k] / den;
            if (r > best) best = r;
        }
    }
    return best;
}

void horner_batch(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out) {
    const std::size_t n = xs.size();
    if (coeffs.empty()) {
        for (std::size_t k = 0; k < n; ++k) out[k] = 0.0;
        return;
    }
    const std::size_t m = coeffs.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d x = _mm256_loadu_pd(xs.data() + k);
        __m256d acc = _mm256_set1_pd(coeffs[m - 1]);
        for (std::size_t i = m - 1; i-- > 0;) acc = _mm256_add_pd(_mm256_mul_pd(acc, x), _mm256_set1_pd(coeffs[i]));
        _mm256_storeu_pd(out.data() + k, acc);
    }
    for (; k < n; ++k) out[k] = horner(coeffs, xs[k]);
}

}  // namespace perov::kernels::avx2
