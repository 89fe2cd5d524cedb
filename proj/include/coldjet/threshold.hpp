#pragma once

/// @file threshold.hpp
/// Prediction of the local cold stimulus group discrimination threshold
/// (LCSGDT): solve Nu(r, H) = Nu* on the validated decreasing tail of the
/// radial profile; the threshold is twice the solved radius. Also the
/// method-of-limits data reduction for measured thresholds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"

namespace coldjet {

struct ThresholdResult {
    double h = 0.0;         ///< presentation distance [m]
    double nu_star = 0.0;   ///< critical Nusselt number solved for
    double r_star = 0.0;    ///< radius with Nu(r*, H) = Nu* [m]
    double lcsgdt = 0.0;    ///< 2 * r_star exactly [m]
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::size_t solver_iterations = 0;
};

/// Requested Nu* lies outside what the decreasing tail attains.
struct NoCrossingError : std::domain_error {
    double nu_min;  ///< tail value at r_max
    double nu_max;  ///< tail value at r_lo
    NoCrossingError(double lo, double hi)
        : std::domain_error("solve_radius: no crossing; attainable Nu range is [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]"),
          nu_min(lo),
          nu_max(hi) {}
};

/// Solve Nu(r, H) = nu_star for the unique r on the positive strictly
/// decreasing tail, by geometric-grid bracketing and bisection to 1e-9 m.
inline ThresholdResult solve_radius(const ModelCoefficients& coeffs, const FluidSpec& fluid,
                                    double h, double nu_star, double r_max = 0.5,
                                    std::size_t grid_points = 512) {
    if (!(nu_star > 0.0) || !std::isfinite(nu_star)) {
        throw std::invalid_argument("solve_radius: nu_star must be positive");
    }
    const auto tail = check_monotone_tail(coeffs, fluid, h, r_max, grid_points);
    if (!tail.found) {
        throw std::domain_error(
            "solve_radius: no positive strictly-decreasing tail below r_max; "
            "threshold is ill-posed for this coefficient set");
    }
    const auto nu_at = [&](double r) { return nu_radial(coeffs, fluid, r, h); };
    const double nu_max_attained = nu_at(tail.r_lo);
    const double nu_min_attained = nu_at(tail.r_hi);
    if (nu_star > nu_max_attained || nu_star < nu_min_attained) {
        throw NoCrossingError(nu_min_attained, nu_max_attained);
    }

    // bracket on the tail's geometric grid
    const double ratio = tail.r_hi / tail.r_lo;
    const std::size_t segments = grid_points - 1;
    double lo = tail.r_lo;
    double hi = tail.r_hi;
    double lo_val = nu_max_attained;
    for (std::size_t i = 1; i <= segments; ++i) {
        const double r = tail.r_lo * std::pow(ratio, static_cast<double>(i) /
                                                         static_cast<double>(segments));
        const double v = nu_at(r);
        if (v <= nu_star) {
            hi = r;
            break;
        }
        lo = r;
        lo_val = v;
    }
    (void)lo_val;

    ThresholdResult result;
    result.h = h;
    result.nu_star = nu_star;
    std::size_t iterations = 0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval below representable resolution
        ++iterations;
        if (nu_at(mid) >= nu_star) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    result.bracket_lo = lo;
    result.bracket_hi = hi;
    result.r_star = 0.5 * (lo + hi);
    result.lcsgdt = 2.0 * result.r_star;
    result.solver_iterations = iterations;
    return result;
}

/// One table entry per presentation distance; failures are embedded so a bad
/// H never aborts the batch.
struct ThresholdEntry {
    double h = 0.0;
    bool ok = false;
    ThresholdResult result;
    std::string error;
};

inline std::vector<ThresholdEntry> lcsgdt_table(const ModelCoefficients& coeffs,
                                                const FluidSpec& fluid,
                                                const std::vector<double>& hs,
                                                double nu_star, double r_max = 0.5) {
    std::vector<ThresholdEntry> table;
    table.reserve(hs.size());
    for (double h : hs) {
        ThresholdEntry entry;
        entry.h = h;
        entry.result.h = h;
        entry.result.nu_star = nu_star;
        try {
            entry.result = solve_radius(coeffs, fluid, h, nu_star, r_max);
            entry.ok = true;
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        table.push_back(std::move(entry));
    }
    return table;
}

/// Nusselt number the model assigns to a measured threshold: Nu(lcsgdt/2, H).
inline double nu_at_measured_lcsgdt(const ModelCoefficients& coeffs, const FluidSpec& fluid,
                                    double h, double lcsgdt) {
    if (!(lcsgdt > 0.0) || !std::isfinite(lcsgdt)) {
        throw std::invalid_argument("nu_at_measured_lcsgdt: lcsgdt must be positive");
    }
    return nu_radial(coeffs, fluid, lcsgdt / 2.0, h);
}

/// One method-of-limits pass: the distance of the first "yes" while the
/// spacing grows, and of the first "no" while it shrinks. Both [m].
struct LimitsRun {
    double ascending_yes = 0.0;
    double descending_no = 0.0;
};

/// Threshold estimate: mean over runs of (ascending_yes + descending_no) / 2.
/// Distances must lie within the probed spacing range (50-230 mm by default).
/// Midpoints are accumulated in sorted order, so the estimate does not depend
/// on the order the runs are listed in.
inline double limits_estimate(const std::vector<LimitsRun>& runs, double probe_min = 0.05,
                              double probe_max = 0.23) {
    if (runs.empty()) throw std::invalid_argument("limits_estimate: no runs");
    std::vector<double> midpoints;
    midpoints.reserve(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& run = runs[i];
        const bool in_range = run.ascending_yes >= probe_min && run.ascending_yes <= probe_max &&
                              run.descending_no >= probe_min && run.descending_no <= probe_max;
        if (!(run.ascending_yes > 0.0) || !(run.descending_no > 0.0) || !in_range) {
            throw std::invalid_argument("limits_estimate: run " + std::to_string(i) +
                                        " lies outside the probed distance range");
        }
        midpoints.push_back(0.5 * (run.ascending_yes + run.descending_no));
    }
    std::sort(midpoints.begin(), midpoints.end());
    double sum = 0.0;
    for (double m : midpoints) sum += m;
    return sum / static_cast<double>(runs.size());
}

}  // namespace coldjet
