#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "nniv/interval.hpp"
#include "nniv/network.hpp"
#include "nniv/unsafe_region.hpp"

namespace nniv {

/// Brute-force reference computations for tests. Nothing here is used by
/// the verifier itself: a sampled hull under-approximates the true image,
/// so it can only falsify, never certify.

/// Componentwise min/max of sampled network outputs.
struct SampleHull {
    Box hull;
    std::uint64_t samples = 0;
};

/// Deterministic uniform draw in [0, 1): top 53 bits of an mt19937_64
/// output, scaled by 2^-53. Same sequence on every platform for a given
/// seed; the generator choice is documented in the README.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::vector<double> sample_point(const Box& b, std::mt19937_64& rng) {
    std::vector<double> x(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Interval& d = b.dims[i];
        x[i] = d.degenerate() ? d.lo : d.lo + d.width() * uniform01(rng);
    }
    return x;
}

/// Full per_dim^n grid over the box (endpoints included), plus all 2^n
/// vertices when n <= 20. Returns the output hull and the sample count.
inline SampleHull grid_sample_hull(const Network& net, const Box& b, std::uint32_t per_dim) {
    if (per_dim < 2) throw std::invalid_argument("grid_sample_hull: per_dim must be >= 2");
    const std::size_t n = b.size();
    constexpr std::uint64_t kMaxPoints = 10'000'000;
    std::uint64_t grid_points = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (grid_points > kMaxPoints / per_dim)
            throw std::invalid_argument("grid_sample_hull: grid exceeds 1e7 points");
        grid_points *= per_dim;
    }

    SampleHull out;
    std::vector<double> x(n);
    const auto absorb = [&](const std::vector<double>& y) {
        if (out.samples == 0) {
            out.hull.dims.resize(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) out.hull.dims[i] = Interval(y[i]);
        } else {
            for (std::size_t i = 0; i < y.size(); ++i) {
                out.hull.dims[i].lo = std::min(out.hull.dims[i].lo, y[i]);
                out.hull.dims[i].hi = std::max(out.hull.dims[i].hi, y[i]);
            }
        }
        out.samples++;
    };

    for (std::uint64_t linear = 0; linear < grid_points; ++linear) {
        std::uint64_t rest = linear;
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t j = rest % per_dim;
            rest /= per_dim;
            const Interval& d = b.dims[i];
            const double frac = static_cast<double>(j) / static_cast<double>(per_dim - 1);
            x[i] = j + 1 == per_dim ? d.hi : d.lo + d.width() * frac;
        }
        absorb(eval_network(net, x));
    }

    if (n <= 20) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            for (std::size_t i = 0; i < n; ++i)
                x[i] = (mask >> i) & 1 ? b.dims[i].hi : b.dims[i].lo;
            absorb(eval_network(net, x));
        }
    }
    return out;
}

/// Draws n seeded uniform points in the box and counts how many map into
/// the unsafe region. Any nonzero count falsifies a Safe verdict.
inline std::uint64_t random_sample_unsafe_hits(const Network& net, const Box& b,
                                               const UnsafeRegion& region, std::uint64_t n,
                                               std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_sample_unsafe_hits: n must be >= 1");
    if (region.empty()) return 0;
    std::mt19937_64 rng(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < n; ++s) {
        const std::vector<double> x = sample_point(b, rng);
        if (region_contains(region, eval_network(net, x))) ++hits;
    }
    return hits;
}

}  // namespace nniv
