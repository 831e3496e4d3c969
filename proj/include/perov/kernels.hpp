#pragma once

// Data-parallel inner loops of the axiom and contraction scans.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime. Variants perform the same IEEE operations in
// the same order per lane (no FMA), so their results are bitwise identical.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace perov::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Instruction sets usable on this machine; Scalar is always first.
std::vector<Isa> available_isas();

/// ISA used by the dispatching overloads.
Isa active_isa();

/// Pins the dispatching overloads to `isa` (nullopt restores auto-detection).
/// Throws InvalidArgument if the ISA is unavailable. Not thread-safe.
void force_isa(std::optional<Isa> isa);

/// Counts indices k where scale * (base + addend[k]) - bound[k] < -eps, i.e.
/// where bound[k] ⪯ scale * (base + addend[k]) fails under slack eps.
/// The first violating indices (ascending) are written to `hits` until it is full.
std::size_t count_dominance_violations(std::span<const double> bound, double base,
                                       std::span<const double> addend, double scale, double eps,
                                       std::span<std::uint32_t> hits, Isa isa);
std::size_t count_dominance_violations(std::span<const double> bound, double base,
                                       std::span<const double> addend, double scale, double eps,
                                       std::span<std::uint32_t> hits);

/// max over k with base + addend[k] > 0 of numer[k] / (base + addend[k]);
/// -infinity when no denominator is positive.
double max_ratio(std::span<const double> numer, double base, std::span<const double> addend, Isa isa);
double max_ratio(std::span<const double> numer, double base, std::span<const double> addend);

/// out[k] = c[0] + c[1] x_k + ... + c[m-1] x_k^{m-1} by Horner's rule.
void horner_batch(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out, Isa isa);
void horner_batch(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out);

/// Scalar Horner evaluation shared by every variant's tail loop.
inline double horner(std::span<const double> coeffs, double x) {
    if (coeffs.empty()) return 0.0;
    double acc = coeffs.back();
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

}  // namespace perov::kernels
