#include "perov/sampling.hpp"

#include <algorithm>
#include <random>

namespace perov {

std::vector<double> grid_points(const Interval& domain, std::size_t count) {
    std::vector<double> out;
    if (count == 0) return out;
    if (count == 1) return {domain.lo};
    out.reserve(count);
    const double width = domain.hi - domain.lo;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(domain.lo + width * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    out.back() = domain.hi;
    return out;
}

std::vector<double> uniform_points(const Interval& domain, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::vector<double> out;
    out.reserve(count);
    const double width = domain.hi - domain.lo;
    for (std::size_t i = 0; i < count; ++i) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        out.push_back(std::min(domain.hi, domain.lo + width * u));
    }
    return out;
}

SampleSet make_samples(const Interval& domain, const SamplingConfig& config, std::span<const double> extra_points) {
    SampleSet s{domain, config, grid_points(domain, config.grid)};
    const auto random = uniform_points(domain, config.random, config.seed);
    s.points.insert(s.points.end(), random.begin(), random.end());
    for (double x : extra_points)
        if (domain.contains(x)) s.points.push_back(x);
    std::sort(s.points.begin(), s.points.end());
    s.points.erase(std::unique(s.points.begin(), s.points.end()), s.points.end());
    return s;
}

std::vector<std::pair<double, double>> make_pairs(const Interval& domain, const SamplingConfig& config,
                                                  std::span<const double> extra_points) {
    const auto grid = grid_points(domain, config.grid);
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(grid.size() * grid.size() + config.random + 2 * extra_points.size() * grid.size());
    for (double x : grid)
        for (double y : grid) pairs.emplace_back(x, y);
    // Both coordinates come from one stream so pairs are independent of grid size.
    const auto random = uniform_points(domain, 2 * config.random, config.seed);
    for (std::size_t i = 0; i < config.random; ++i) pairs.emplace_back(random[2 * i], random[2 * i + 1]);
    for (double c : extra_points) {
        if (!domain.contains(c)) continue;
        for (double x : grid) {
            pairs.emplace_back(c, x);
            pairs.emplace_back(x, c);
        }
    }
    return pairs;
}

}  // namespace perov
