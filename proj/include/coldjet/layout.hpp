#pragma once

/// @file layout.hpp
/// Nozzle placement over a line segment or rectangle so that adjacent
/// spacing never exceeds the LCSGDT, with the minimal nozzle count under
/// that adjacency rule.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace coldjet {

struct LayoutPlan {
    std::vector<std::array<double, 2>> positions;  ///< (x, y) [m]; y = 0 on a line
    bool two_d = false;
    double spacing_x = 0.0;  ///< adjacent spacing per axis [m]
    double spacing_y = 0.0;
    std::size_t count = 0;
    double lcsgdt_used = 0.0;
};

namespace detail {

/// Minimal k with length/k <= lcsgdt. ceil() can land one off when length is
/// an exact multiple of lcsgdt in floating point, so correct against the
/// feasibility predicate itself.
inline std::size_t min_nozzle_count(double length, double lcsgdt) {
    double k = std::ceil(length / lcsgdt);
    if (k < 1.0) k = 1.0;
    auto kk = static_cast<std::size_t>(k);
    while (kk > 1 && length / static_cast<double>(kk - 1) <= lcsgdt) --kk;
    while (length / static_cast<double>(kk) > lcsgdt) ++kk;
    return kk;
}

inline std::vector<double> axis_positions(double length, std::size_t k) {
    std::vector<double> xs(k);
    const double spacing = length / static_cast<double>(k);
    for (std::size_t i = 0; i < k; ++i) {
        xs[i] = (static_cast<double>(i) + 0.5) * spacing;
    }
    return xs;
}

inline void check_extent(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("layout: ") + name + " must be positive");
    }
}

}  // namespace detail

/// k = ceil(length / lcsgdt) nozzles at uniform spacing length/k, centered in
/// their cells: every point of [0, length] is within lcsgdt/2 of a nozzle and
/// no smaller count satisfies spacing <= lcsgdt.
inline LayoutPlan plan_line(double length, double lcsgdt) {
    detail::check_extent(length, "length");
    detail::check_extent(lcsgdt, "lcsgdt");
    const std::size_t k = detail::min_nozzle_count(length, lcsgdt);
    LayoutPlan plan;
    plan.lcsgdt_used = lcsgdt;
    plan.spacing_x = length / static_cast<double>(k);
    plan.count = k;
    for (double x : detail::axis_positions(length, k)) {
        plan.positions.push_back({x, 0.0});
    }
    return plan;
}

/// Per-axis line plans combined as a Cartesian product; spacing per axis
/// stays within lcsgdt. Positions are sorted by x, then y.
inline LayoutPlan plan_grid(double width, double height, double lcsgdt) {
    detail::check_extent(width, "width");
    detail::check_extent(height, "height");
    detail::check_extent(lcsgdt, "lcsgdt");
    const std::size_t kx = detail::min_nozzle_count(width, lcsgdt);
    const std::size_t ky = detail::min_nozzle_count(height, lcsgdt);
    LayoutPlan plan;
    plan.two_d = true;
    plan.lcsgdt_used = lcsgdt;
    plan.spacing_x = width / static_cast<double>(kx);
    plan.spacing_y = height / static_cast<double>(ky);
    plan.count = kx * ky;
    const auto xs = detail::axis_positions(width, kx);
    const auto ys = detail::axis_positions(height, ky);
    plan.positions.reserve(plan.count);
    for (double x : xs) {
        for (double y : ys) {
            plan.positions.push_back({x, y});
        }
    }
    return plan;
}

}  // namespace coldjet
