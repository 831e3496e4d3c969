#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace perov {

/// Closed real interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    bool contains(double x, double slack = 0.0) const noexcept { return x >= lo - slack && x <= hi + slack; }
    bool operator==(const Interval&) const = default;
};

struct SamplingConfig {
    std::size_t grid = 33;
    std::size_t random = 256;
    std::uint64_t seed = 42;
};

/// Deterministic point cloud: an evenly spaced grid (endpoints included) plus
/// seeded uniform points, sorted ascending with duplicates removed.
struct SampleSet {
    Interval domain;
    SamplingConfig config;
    std::vector<double> points;
};

SampleSet make_samples(const Interval& domain, const SamplingConfig& config,
                       std::span<const double> extra_points = {});

/// Ordered pairs for contraction checks: the full grid x grid product,
/// `config.random` uniform pairs, and every extra point paired with each grid
/// point in both orders.
std::vector<std::pair<double, double>> make_pairs(const Interval& domain, const SamplingConfig& config,
                                                  std::span<const double> extra_points = {});

/// `count` uniform points from a seeded mt19937_64, mapped with 53-bit
/// resolution so the stream is identical on every platform.
std::vector<double> uniform_points(const Interval& domain, std::size_t count, std::uint64_t seed);

std::vector<double> grid_points(const Interval& domain, std::size_t count);

}  // namespace perov
