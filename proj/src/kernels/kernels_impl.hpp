#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace perov::kernels {

#define PEROV_KERNEL_DECLS                                                                          \
    std::size_t count_dominance_violations(std::span<const double> bound, double base,              \
                                           std::span<const double> addend, double scale, double eps, \
                                           std::span<std::uint32_t> hits);                          \
    double max_ratio(std::span<const double> numer, double base, std::span<const double> addend);   \
    void horner_batch(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out);

namespace scalar {
PEROV_KERNEL_DECLS
}

#if defined(PEROV_HAVE_AVX2_KERNELS)
namespace avx2 {
PEROV_KERNEL_DECLS
}
#endif

#undef PEROV_KERNEL_DECLS

}  // namespace perov::kernels
