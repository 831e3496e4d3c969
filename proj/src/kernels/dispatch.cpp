#include <string>

#include "kernels_impl.hpp"
#include "perov/errors.hpp"
#include "perov/kernels.hpp"

namespace perov::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(PEROV_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa detect() { return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar; }

std::optional<Isa>& forced() {
    static std::optional<Isa> value;
    return value;
}

void require_available(Isa isa) {
    if (isa == Isa::Avx2 && !cpu_has_avx2()) throw InvalidArgument("AVX2 kernels are not available on this CPU");
}

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b) throw DimensionMismatch("kernel spans of length " + std::to_string(a) + " and " + std::to_string(b));
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out{Isa::Scalar};
    if (cpu_has_avx2()) out.push_back(Isa::Avx2);
    return out;
}

Isa active_isa() {
    static const Isa detected = detect();
    return forced().value_or(detected);
}

void force_isa(std::optional<Isa> isa) {
    if (isa) require_available(*isa);
    forced() = isa;
}

std::size_t count_dominance_violations(std::span<const double> bound, double base, std::span<const double> addend,
                                       double scale, double eps, std::span<std::uint32_t> hits, Isa isa) {
    require_same_length(bound.size(), addend.size());
    require_available(isa);
#if defined(PEROV_HAVE_AVX2_KERNELS)
    if (isa == Isa::Avx2) return avx2::count_dominance_violations(bound, base, addend, scale, eps, hits);
#endif
    return scalar::count_dominance_violations(bound, base, addend, scale, eps, hits);
}

std::size_t count_dominance_violations(std::span<const double> bound, double base, std::span<const double> addend,
                                       double scale, double eps, std::span<std::uint32_t> hits) {
    return count_dominance_violations(bound, base, addend, scale, eps, hits, active_isa());
}

double max_ratio(std::span<const double> numer, double base, std::span<const double> addend, Isa isa) {
    require_same_length(numer.size(), addend.size());
    require_available(isa);
#if defined(PEROV_HAVE_AVX2_KERNELS)
    if (isa == Isa::Avx2) return avx2::max_ratio(numer, base, addend);
#endif
    return scalar::max_ratio(numer, base, addend);
}

double max_ratio(std::span<const double> numer, double base, std::span<const double> addend) {
    return max_ratio(numer, base, addend, active_isa());
}

void horner_batch(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out, Isa isa) {
    require_same_length(xs.size(), out.size());
    require_available(isa);
#if defined(PEROV_HAVE_AVX2_KERNELS)
    if (isa == Isa::Avx2) return avx2::horner_batch(coeffs, xs, out);
#endif
    scalar::horner_batch(coeffs, xs, out);
}

void horner_batch(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out) {
    horner_batch(coeffs, xs, out, active_isa());
}

}  // namespace perov::kernels
