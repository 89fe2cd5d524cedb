#pragma once

/// @file model.hpp
/// Forward model for the heat transfer of a cold air jet impinging on a
/// surface: dimensionless numbers, piecewise Nusselt correlations, airflow
/// temperature decay along the jet axis, and the predicted surface cooling.
///
/// All quantities are SI (m, m^3/s, degrees C). Every function here is pure;
/// identical inputs give bit-identical outputs.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace coldjet {

/// Nozzle geometry, flow rate and air properties; the source of Re and Pr.
struct FluidSpec {
    double volume_flow_rate = 25.0 / 60000.0;  ///< jet volume flow [m^3/s]
    double nozzle_diameter = 0.006;            ///< nozzle inner diameter d0 [m]
    double kinematic_viscosity = 1.5112e-5;    ///< air kinematic viscosity [m^2/s]
    double prandtl = 0.7;                      ///< Prandtl number of air

    /// Build a spec from the presentation units used at the tool boundary.
    static FluidSpec from_lpm_mm(double flow_lpm, double d0_mm,
                                 double nu = 1.5112e-5, double pr = 0.7) {
        FluidSpec s;
        s.volume_flow_rate = flow_lpm / 60000.0;
        s.nozzle_diameter = d0_mm / 1000.0;
        s.kinematic_viscosity = nu;
        s.prandtl = pr;
        return s;
    }

    void validate() const {
        if (!(nozzle_diameter > 0.0) || !std::isfinite(nozzle_diameter)) {
            throw std::invalid_argument("FluidSpec: nozzle_diameter must be positive");
        }
        if (!(kinematic_viscosity > 0.0) || !std::isfinite(kinematic_viscosity)) {
            throw std::invalid_argument("FluidSpec: kinematic_viscosity must be positive");
        }
        if (!(prandtl > 0.0) || !std::isfinite(prandtl)) {
            throw std::invalid_argument("FluidSpec: prandtl must be positive");
        }
        if (!(volume_flow_rate >= 0.0) || !std::isfinite(volume_flow_rate)) {
            throw std::invalid_argument("FluidSpec: volume_flow_rate must be non-negative");
        }
    }
};

/// The nine parameters of the airflow heat-transfer model.
///
/// beta and gamma scale the stagnation-point Nusselt number below and above
/// the branch distance n*d0; a, b, c and f shape the radial decay beyond
/// 2.5*d0; alpha converts Nusselt number and driving temperature difference
/// into surface cooling; g controls how fast the airflow warms toward ambient
/// along the jet axis [1/m].
struct ModelCoefficients {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    double n = 1.0;   ///< branch distance in multiples of d0
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double f = 1.0;
    double g = 1.0;   ///< airflow warming rate [1/m]

    /// Full data invariant, enforced at file and fit boundaries. Operations
    /// themselves accept the closure (e.g. alpha = 0 gives zero cooling).
    void validate() const {
        check_finite();
        if (!(alpha > 0.0)) throw std::invalid_argument("ModelCoefficients: alpha must be positive");
        if (!(beta > 0.0)) throw std::invalid_argument("ModelCoefficients: beta must be positive");
        if (!(gamma > 0.0)) throw std::invalid_argument("ModelCoefficients: gamma must be positive");
        if (!(n > 0.0)) throw std::invalid_argument("ModelCoefficients: n must be positive");
        if (!(f > 0.0)) throw std::invalid_argument("ModelCoefficients: f must be positive");
        if (!(g > 0.0)) throw std::invalid_argument("ModelCoefficients: g must be positive");
    }

    /// Minimal requirements for evaluating the formulas at all.
    void check_finite() const {
        const double v[9] = {alpha, beta, gamma, n, a, b, c, f, g};
        for (double x : v) {
            if (!std::isfinite(x)) {
                throw std::invalid_argument("ModelCoefficients: all coefficients must be finite");
            }
        }
        if (!(f > 0.0)) throw std::invalid_argument("ModelCoefficients: f must be positive");
        if (!(n >= 0.0)) throw std::invalid_argument("ModelCoefficients: n must be non-negative");
    }
};

/// Initial surface, initial airflow and ambient temperatures [deg C].
struct ThermalEnvironment {
    double surface_initial = 33.0;   ///< T_s0
    double airflow_initial = 0.0;    ///< T_a0 at the nozzle exit
    double ambient = 25.0;           ///< T_e

    void validate() const {
        if (!std::isfinite(surface_initial) || !std::isfinite(airflow_initial) ||
            !std::isfinite(ambient)) {
            throw std::invalid_argument("ThermalEnvironment: temperatures must be finite");
        }
    }
};

inline FluidSpec default_fluid() { return FluidSpec{}; }
inline ThermalEnvironment default_environment() { return ThermalEnvironment{}; }

/// Stated validity window of the radial correlation; reported, not enforced.
struct ValidityWindows {
    double r_min, r_max;    ///< radial window [m]
    double h_min, h_max;    ///< axial window [m]
    double re_min, re_max;  ///< Reynolds window
};

inline ValidityWindows validity_windows(double d0) {
    if (!(d0 > 0.0)) throw std::invalid_argument("validity_windows: d0 must be positive");
    return ValidityWindows{2.5 * d0, 7.5 * d0, 2.0 * d0, 12.0 * d0, 2.0e3, 4.0e5};
}

/// Reynolds number from the mean nozzle exit velocity:
///   Re = v d0 / nu = 4 Q / (pi d0 nu).
inline double reynolds(const FluidSpec& fluid) {
    fluid.validate();
    return 4.0 * fluid.volume_flow_rate /
           (3.14159265358979323846 * fluid.nozzle_diameter * fluid.kinematic_viscosity);
}

/// Stagnation-point Nusselt number Nu(0, H).
///
/// Constant close to the nozzle, then decaying as d0/H:
///   Nu(0,H) = beta  Pr^0.4 Re^0.5            (H <  n d0)
///   Nu(0,H) = gamma Pr^0.5 Re^0.5 (d0 / H)   (H >= n d0)
inline double nu_center(const ModelCoefficients& coeffs, const FluidSpec& fluid, double h) {
    coeffs.check_finite();
    fluid.validate();
    if (!(h >= 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("nu_center: H must be non-negative");
    }
    const double re = reynolds(fluid);
    const double pr = fluid.prandtl;
    const double d0 = fluid.nozzle_diameter;
    if (h < coeffs.n * d0) {
        return coeffs.beta * std::pow(pr, 0.4) * std::sqrt(re);
    }
    if (h == 0.0) {
        // only reachable with n = 0
        throw std::domain_error("nu_center: H = 0 with n = 0 divides by zero");
    }
    return coeffs.gamma * std::pow(pr, 0.5) * std::sqrt(re) * (d0 / h);
}

namespace detail {

/// Radial correlation for r >= 2.5 d0: Nu = G(r,H) F(Re) Pr^0.42 with
///   G = (d0/r) (1 - a d0/r) / (1 + b (H/d0 - c) d0/r)
///   F = 2 Re^0.5 (1 + Re^0.55 / f)^0.5
inline double nu_outer(const ModelCoefficients& coeffs, const FluidSpec& fluid,
                       double r, double h) {
    const double re = reynolds(fluid);
    const double d0 = fluid.nozzle_diameter;
    const double x = d0 / r;
    const double den = 1.0 + coeffs.b * (h / d0 - coeffs.c) * x;
    if (den == 0.0) {
        const double r_sing = -coeffs.b * (h / d0 - coeffs.c) * d0;
        throw std::domain_error("nu_radial: singular denominator at r = " +
                                std::to_string(r_sing) + " m");
    }
    const double g_factor = x * (1.0 - coeffs.a * x) / den;
    const double f_factor =
        2.0 * std::sqrt(re) * std::sqrt(1.0 + std::pow(re, 0.55) / coeffs.f);
    return g_factor * f_factor * std::pow(fluid.prandtl, 0.42);
}

}  // namespace detail

/// Nusselt number Nu(r, H) at diffusion radius r.
///
/// Linear in r up to the blend radius 2.5 d0, then the outer correlation:
///   Nu(r,H) = E(r,H) r + Nu(0,H)        (r <  2.5 d0)
///   Nu(r,H) = G(r,H) F(Re) Pr^0.42      (r >= 2.5 d0)
/// with E = (Nu(2.5 d0, H) - Nu(0, H)) / (2.5 d0), so the two branches meet
/// at 2.5 d0. At r = 0 the stagnation value is returned exactly.
inline double nu_radial(const ModelCoefficients& coeffs, const FluidSpec& fluid,
                        double r, double h) {
    coeffs.check_finite();
    fluid.validate();
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument("nu_radial: r must be non-negative");
    }
    if (!(h >= 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("nu_radial: H must be non-negative");
    }
    const double blend = 2.5 * fluid.nozzle_diameter;
    if (r == 0.0) {
        return nu_center(coeffs, fluid, h);
    }
    if (r < blend) {
        const double center = nu_center(coeffs, fluid, h);
        const double at_blend = detail::nu_outer(coeffs, fluid, blend, h);
        const double slope = (at_blend - center) / blend;
        return slope * r + center;
    }
    return detail::nu_outer(coeffs, fluid, r, h);
}

/// Airflow temperature when it reaches the surface at distance H:
///   T_a(H) = T_a0 + (T_e - T_a0) (1 - e^(-g H)).
inline double airflow_temperature(const ThermalEnvironment& env, double g, double h) {
    env.validate();
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw std::invalid_argument("airflow_temperature: g must be positive");
    }
    if (!(h >= 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("airflow_temperature: H must be non-negative");
    }
    return env.airflow_initial + (env.ambient - env.airflow_initial) * (-std::expm1(-g * h));
}

/// Predicted surface temperature change (positive = cooling):
///   dT(r,H) = alpha (T_s0 - T_a(H)) Nu(r,H).
inline double predict_delta_t(const ModelCoefficients& coeffs, const FluidSpec& fluid,
                              const ThermalEnvironment& env, double r, double h) {
    const double t_air = airflow_temperature(env, coeffs.g, h);
    return coeffs.alpha * (env.surface_initial - t_air) * nu_radial(coeffs, fluid, r, h);
}

/// Literature constants of the underlying impinging-jet correlations, with the
/// branch distance pinned to n = 10 (where the far-field stagnation formula is
/// declared valid) and placeholder alpha = 1, g = 1.72 for the two parameters
/// the correlations do not define. Intended as a fit starting point.
inline ModelCoefficients conventional_coefficients() {
    ModelCoefficients c;
    c.alpha = 1.0;
    c.beta = 0.94;
    c.gamma = 11.6;
    c.n = 10.0;
    c.a = 1.1;
    c.b = 0.1;
    c.c = 6.0;
    c.f = 200.0;
    c.g = 1.72;
    return c;
}

/// Coefficient set reported for low-temperature airflow at 25 L/min through a
/// 6 mm nozzle. Note: taken as data, not ground truth; the `diagnose` tool
/// reports the internal inconsistencies of this set.
inline ModelCoefficients published_coefficients() {
    ModelCoefficients c;
    c.alpha = 7.41;
    c.beta = 0.921;
    c.gamma = 141.0;
    c.n = 4.00;
    c.a = 7.87;
    c.b = 0.145;
    c.c = 9.33e-4;
    c.f = 2.63e-10;
    c.g = 1.72;
    return c;
}

/// Largest suffix [r_lo, r_max] of the outer region on which Nu(r, H) is
/// positive and strictly decreasing, determined by sign-of-difference checks
/// on a geometric grid. The threshold solver requires a non-empty report.
struct MonotoneTailReport {
    bool found = false;
    double r_lo = 0.0;
    double r_hi = 0.0;
    std::size_t grid_points = 0;
};

inline MonotoneTailReport check_monotone_tail(const ModelCoefficients& coeffs,
                                              const FluidSpec& fluid, double h,
                                              double r_max,
                                              std::size_t grid_points = 512) {
    coeffs.check_finite();
    fluid.validate();
    const double r_start = 2.5 * fluid.nozzle_diameter;
    if (!(r_max > r_start)) {
        throw std::invalid_argument("check_monotone_tail: r_max must exceed 2.5*d0");
    }
    if (grid_points < 2) {
        throw std::invalid_argument("check_monotone_tail: need at least 2 grid points");
    }

    MonotoneTailReport report;
    report.grid_points = grid_points;
    const double ratio = r_max / r_start;
    const auto grid_at = [&](std::size_t i) {
        return r_start * std::pow(ratio, static_cast<double>(i) /
                                             static_cast<double>(grid_points - 1));
    };

    std::size_t i = grid_points - 1;
    double next = nu_radial(coeffs, fluid, grid_at(i), h);
    if (!(next > 0.0)) return report;
    std::size_t lo = i;
    while (i > 0) {
        const double prev = nu_radial(coeffs, fluid, grid_at(i - 1), h);
        if (!(prev > next) || !(prev > 0.0)) break;
        --i;
        lo = i;
        next = prev;
    }
    if (lo == grid_points - 1) return report;  // no decreasing pair
    report.found = true;
    report.r_lo = grid_at(lo);
    report.r_hi = r_max;
    return report;
}

}  // namespace coldjet
