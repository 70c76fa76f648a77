#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nniv/errors.hpp"
#include "nniv/interval.hpp"

namespace nniv {

/// Closed half-space {y : a . y >= b}.
struct Halfspace {
    std::vector<double> a;
    double b = 0.0;
};

/// The unsafe region: a finite union of boxes (endpoints may be +-inf)
/// and half-spaces over the network output space. The network is safe
/// iff its output set never meets this region.
struct UnsafeRegion {
    std::vector<Box> boxes;
    std::vector<Halfspace> halfspaces;

    bool empty() const { return boxes.empty() && halfspaces.empty(); }

    std::size_t dimension() const {
        if (!boxes.empty()) return boxes.front().size();
        if (!halfspaces.empty()) return halfspaces.front().a.size();
        return 0;
    }

    void require_dimension(std::size_t n) const {
        for (const Box& b : boxes)
            if (b.size() != n)
                throw DimensionError("unsafe region: box has " + std::to_string(b.size()) +
                                     " dimensions, expected " + std::to_string(n));
        for (const Halfspace& h : halfspaces)
            if (h.a.size() != n)
                throw DimensionError("unsafe region: half-space has " +
                                     std::to_string(h.a.size()) + " coefficients, expected " +
                                     std::to_string(n));
    }
};

/// Largest value of a . y over the box, picked endpointwise by the sign
/// of each coefficient.
inline double max_dot_over_box(std::span<const double> a, const Box& box) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i] >= 0.0 ? a[i] * box.dims[i].hi : a[i] * box.dims[i].lo;
    return acc;
}

/// Exact intersection test between a finite output box and the region.
/// Closed endpoints throughout: touching counts as intersecting.
inline bool intersects(const Box& out_box, const UnsafeRegion& region) {
    region.require_dimension(out_box.size());
    for (const Box& b : region.boxes)
        if (out_box.overlaps(b)) return true;
    for (const Halfspace& h : region.halfspaces)
        if (max_dot_over_box(h.a, out_box) >= h.b) return true;
    return false;
}

/// Point membership, used by the sampling oracle.
inline bool region_contains(const UnsafeRegion& region, std::span<const double> y) {
    region.require_dimension(y.size());
    for (const Box& b : region.boxes)
        if (b.contains(y)) return true;
    for (const Halfspace& h : region.halfspaces) {
        double acc = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) acc += h.a[i] * y[i];
        if (acc >= h.b) return true;
    }
    return false;
}

/// Region whose avoidance certifies that argmax stays at true_label:
/// the union of n-1 half-spaces {y : y_k - y_true >= 0}, k != true_label.
inline UnsafeRegion robustness_region(std::size_t logits_dim, std::size_t true_label) {
    if (logits_dim < 2)
        throw std::invalid_argument("robustness_region: needs at least two classes");
    if (true_label >= logits_dim)
        throw std::invalid_argument("robustness_region: label " + std::to_string(true_label) +
                                    " out of range for " + std::to_string(logits_dim) +
                                    " classes");
    UnsafeRegion region;
    for (std::size_t k = 0; k < logits_dim; ++k) {
        if (k == true_label) continue;
        Halfspace h;
        h.a.assign(logits_dim, 0.0);
        h.a[k] = 1.0;
        h.a[true_label] = -1.0;
        h.b = 0.0;
        region.halfspaces.push_back(std::move(h));
    }
    return region;
}

}  // namespace nniv
