#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nniv {

/// A compact real interval [lo, hi]. Endpoints are ordinary doubles;
/// infinite endpoints are legal (used by unsafe regions) but boxes fed
/// to propagation must be finite.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr Interval() = default;

    /// Degenerate interval [x, x].
    explicit constexpr Interval(double x) : lo(x), hi(x) {}

    Interval(double lower, double upper) : lo(lower), hi(upper) {
        if (!(lo <= hi))  // also rejects NaN endpoints
            throw std::invalid_argument("Interval: requires lo <= hi");
    }

    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool degenerate() const { return lo == hi; }
    bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }

    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }

    /// Closed-endpoint overlap: touching intervals intersect.
    bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// An axis-aligned interval vector (box) of dimension >= 1.
struct Box {
    std::vector<Interval> dims;

    Box() = default;
    explicit Box(std::vector<Interval> components) : dims(std::move(components)) {}
    Box(std::initializer_list<Interval> components) : dims(components) {}

    std::size_t size() const { return dims.size(); }
    const Interval& operator[](std::size_t i) const { return dims[i]; }
    Interval& operator[](std::size_t i) { return dims[i]; }

    /// Box width: the largest of the component widths.
    double width() const {
        double w = 0.0;
        for (const Interval& d : dims) w = std::max(w, d.width());
        return w;
    }

    bool finite() const {
        for (const Interval& d : dims)
            if (!d.finite()) return false;
        return true;
    }

    bool degenerate() const { return width() == 0.0; }

    bool contains(std::span<const double> point) const {
        if (point.size() != dims.size()) return false;
        for (std::size_t i = 0; i < dims.size(); ++i)
            if (!dims[i].contains(point[i])) return false;
        return true;
    }

    bool contains(const Box& o) const {
        if (o.size() != size()) return false;
        for (std::size_t i = 0; i < dims.size(); ++i)
            if (!dims[i].contains(o.dims[i])) return false;
        return true;
    }

    bool overlaps(const Box& o) const {
        if (o.size() != size()) return false;
        for (std::size_t i = 0; i < dims.size(); ++i)
            if (!dims[i].overlaps(o.dims[i])) return false;
        return true;
    }

    friend bool operator==(const Box&, const Box&) = default;
};

/// Splits the widest dimension (lowest index on ties) at its midpoint.
/// The two halves tile the input box exactly.
inline std::pair<Box, Box> bisect(const Box& b) {
    if (b.size() == 0 || b.width() <= 0.0)
        throw std::invalid_argument("bisect: box is degenerate, nothing to split");
    std::size_t split = 0;
    double widest = b.dims[0].width();
    for (std::size_t i = 1; i < b.size(); ++i) {
        if (b.dims[i].width() > widest) {
            widest = b.dims[i].width();
            split = i;
        }
    }
    const double mid = b.dims[split].midpoint();
    Box left = b;
    Box right = b;
    left.dims[split].hi = mid;
    right.dims[split].lo = mid;
    return {std::move(left), std::move(right)};
}

}  // namespace nniv
