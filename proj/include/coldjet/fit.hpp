#pragma once

/// @file fit.hpp
/// Estimation of the nine model coefficients from (r, H, dT) observations by
/// damped iterative least squares, plus residual and goodness-of-fit helpers.
///
/// The eight continuous parameters (alpha, beta, gamma, a, b, c, f, g) are
/// minimized by a Levenberg-damped Gauss-Newton iteration with a central
/// finite-difference Jacobian; alpha, beta, gamma, f and g are optimized in
/// log space to keep them positive. The branch distance n makes the objective
/// piecewise in n, so it is searched over a discrete grid outside the
/// continuous solve.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"

namespace coldjet {

/// One (r, H, dT) triple; the fitting unit. SI units, dT in deg C.
struct Observation {
    double r = 0.0;        ///< diffusion radius [m]
    double h = 0.0;        ///< presentation distance [m]
    double delta_t = 0.0;  ///< observed surface cooling [deg C]
};

inline void validate_observations(const std::vector<Observation>& obs) {
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (!(obs[i].r >= 0.0) || !(obs[i].h > 0.0) || !std::isfinite(obs[i].delta_t) ||
            !std::isfinite(obs[i].r) || !std::isfinite(obs[i].h)) {
            throw std::invalid_argument("Observation " + std::to_string(i) +
                                        ": requires r >= 0, H > 0, finite delta_t");
        }
    }
}

inline std::vector<double> default_n_grid() {
    std::vector<double> grid;
    for (double n = 2.0; n <= 12.0 + 1e-12; n += 0.5) grid.push_back(n);
    return grid;
}

struct FitOptions {
    std::size_t max_iterations = 200;
    double convergence_tol = 1e-10;   ///< relative objective decrease
    double initial_damping = 1e-3;
    double damping_increase = 10.0;   ///< factor on rejected step
    double damping_decrease = 10.0;   ///< divisor on accepted step
    double fd_step = 1e-6;            ///< relative finite-difference step
    std::vector<double> n_grid = default_n_grid();
    /// test hook: when set, each inner fit appends its initial objective and
    /// every accepted objective, in order
    std::vector<double>* objective_trace = nullptr;

    void validate() const {
        if (max_iterations < 1) throw std::invalid_argument("FitOptions: max_iterations >= 1");
        if (!(convergence_tol > 0.0)) throw std::invalid_argument("FitOptions: convergence_tol > 0");
        if (!(fd_step > 0.0)) throw std::invalid_argument("FitOptions: fd_step > 0");
        if (!(initial_damping > 0.0)) throw std::invalid_argument("FitOptions: initial_damping > 0");
        if (!(damping_increase > 1.0) || !(damping_decrease > 1.0)) {
            throw std::invalid_argument("FitOptions: damping factors must exceed 1");
        }
        if (n_grid.empty()) throw std::invalid_argument("FitOptions: n_grid must be non-empty");
        for (double n : n_grid) {
            if (!(n > 0.0)) throw std::invalid_argument("FitOptions: n_grid values must be positive");
        }
    }
};

struct FitResult {
    ModelCoefficients coefficients;
    double r_squared = 0.0;
    double rmse = 0.0;              ///< [deg C]
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> residuals;  ///< observed - predicted, per observation
};

/// Thrown when every n candidate yields a non-finite objective; carries the
/// least-bad partial result.
struct FitFailure : std::runtime_error {
    FitResult best;
    explicit FitFailure(const std::string& msg, FitResult partial)
        : std::runtime_error(msg), best(std::move(partial)) {}
};

/// Residual vector: element i is obs[i].delta_t - predicted dT, order preserved.
inline std::vector<double> residuals(const ModelCoefficients& coeffs, const FluidSpec& fluid,
                                     const ThermalEnvironment& env,
                                     const std::vector<Observation>& obs) {
    if (obs.empty()) throw std::invalid_argument("residuals: observation list is empty");
    validate_observations(obs);
    std::vector<double> out(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
        try {
            out[i] = obs[i].delta_t - predict_delta_t(coeffs, fluid, env, obs[i].r, obs[i].h);
        } catch (const std::domain_error& e) {
            throw std::domain_error("residuals: observation " + std::to_string(i) + ": " +
                                    e.what());
        }
    }
    return out;
}

inline double rmse(const std::vector<double>& res) {
    if (res.empty()) throw std::invalid_argument("rmse: empty residual vector");
    double ss = 0.0;
    for (double r : res) ss += r * r;
    return std::sqrt(ss / static_cast<double>(res.size()));
}

struct GoodnessOfFit {
    double r_squared;
    double rmse;
};

/// R^2 about the mean of the observed delta_t, and the root mean square error.
/// Throws std::domain_error when the observations carry no variance (R^2
/// undefined); use rmse() alone in that case.
inline GoodnessOfFit goodness(const std::vector<double>& res,
                              const std::vector<Observation>& obs) {
    if (res.size() != obs.size()) {
        throw std::invalid_argument("goodness: residual and observation counts differ");
    }
    const double root_mean_square = rmse(res);
    double mean = 0.0;
    for (const auto& o : obs) mean += o.delta_t;
    mean /= static_cast<double>(obs.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        ss_tot += (obs[i].delta_t - mean) * (obs[i].delta_t - mean);
        ss_res += res[i] * res[i];
    }
    if (obs.size() < 2 || ss_tot == 0.0) {
        throw std::domain_error("goodness: zero total variance, r_squared undefined");
    }
    return GoodnessOfFit{1.0 - ss_res / ss_tot, root_mean_square};
}

namespace detail {

constexpr std::size_t kNumContinuous = 8;
constexpr double kObjectiveFloor = 1e-24;  ///< SSR below this counts as exact

/// Continuous parameter vector: [ln a, ln b, ln g, a, b, c, ln f, ln g] order
/// alpha, beta, gamma, a, b, c, f, g; positive ones in log space.
using ParamVector = std::array<double, kNumContinuous>;

inline ParamVector pack_params(const ModelCoefficients& c) {
    return ParamVector{std::log(c.alpha), std::log(c.beta), std::log(c.gamma),
                       c.a, c.b, c.c, std::log(c.f), std::log(c.g)};
}

inline ModelCoefficients unpack_params(const ParamVector& p, double n) {
    ModelCoefficients c;
    c.alpha = std::exp(p[0]);
    c.beta = std::exp(p[1]);
    c.gamma = std::exp(p[2]);
    c.a = p[3];
    c.b = p[4];
    c.c = p[5];
    c.f = std::exp(p[6]);
    c.g = std::exp(p[7]);
    c.n = n;
    return c;
}

/// Sum of squared residuals; +inf when the model cannot be evaluated.
inline double sum_squares(const ParamVector& p, double n, const FluidSpec& fluid,
                          const ThermalEnvironment& env,
                          const std::vector<Observation>& obs) {
    ModelCoefficients c = unpack_params(p, n);
    double ss = 0.0;
    try {
        for (const auto& o : obs) {
            const double r = o.delta_t - predict_delta_t(c, fluid, env, o.r, o.h);
            ss += r * r;
        }
    } catch (const std::exception&) {
        return std::numeric_limits<double>::infinity();
    }
    return std::isfinite(ss) ? ss : std::numeric_limits<double>::infinity();
}

inline std::vector<double> residual_vector_or_inf(const ParamVector& p, double n,
                                                  const FluidSpec& fluid,
                                                  const ThermalEnvironment& env,
                                                  const std::vector<Observation>& obs) {
    ModelCoefficients c = unpack_params(p, n);
    std::vector<double> out(obs.size(), std::numeric_limits<double>::infinity());
    try {
        for (std::size_t i = 0; i < obs.size(); ++i) {
            out[i] = obs[i].delta_t - predict_delta_t(c, fluid, env, obs[i].r, obs[i].h);
        }
    } catch (const std::exception&) {
        std::fill(out.begin(), out.end(), std::numeric_limits<double>::infinity());
    }
    return out;
}

/// Cholesky solve of the (symmetric) damped normal equations; false if the
/// matrix is not positive definite.
inline bool solve_spd(std::array<std::array<double, kNumContinuous>, kNumContinuous> a,
                      ParamVector b, ParamVector& x) {
    std::array<std::array<double, kNumContinuous>, kNumContinuous> l{};
    for (std::size_t i = 0; i < kNumContinuous; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s)) return false;
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    ParamVector y{};
    for (std::size_t i = 0; i < kNumContinuous; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i][k] * y[k];
        y[i] = s / l[i][i];
    }
    for (std::size_t ii = kNumContinuous; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < kNumContinuous; ++k) s -= l[k][ii] * x[k];
        x[ii] = s / l[ii][ii];
    }
    return true;
}

struct InnerFitResult {
    ParamVector params{};
    double objective = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
};

/// Levenberg-damped Gauss-Newton over the eight continuous parameters at a
/// fixed branch distance n. Accepted steps never increase the objective.
inline InnerFitResult fit_at_n(ParamVector p, double n, const FluidSpec& fluid,
                               const ThermalEnvironment& env,
                               const std::vector<Observation>& obs,
                               const FitOptions& opt) {
    InnerFitResult result;
    result.params = p;
    double objective = sum_squares(p, n, fluid, env, obs);
    result.objective = objective;
    if (opt.objective_trace) opt.objective_trace->push_back(objective);
    if (!std::isfinite(objective)) return result;
    if (objective <= kObjectiveFloor) {
        result.converged = true;
        return result;
    }

    const std::size_t m = obs.size();
    double lambda = opt.initial_damping;

    for (std::size_t iter = 1; iter <= opt.max_iterations; ++iter) {
        result.iterations = iter;

        // central-difference Jacobian of the residual vector
        std::vector<std::array<double, kNumContinuous>> jac(m);
        bool jac_ok = true;
        for (std::size_t j = 0; j < kNumContinuous && jac_ok; ++j) {
            const double step = opt.fd_step * std::max(std::abs(p[j]), 1.0);
            ParamVector plus = p, minus = p;
            plus[j] += step;
            minus[j] -= step;
            const auto res_plus = residual_vector_or_inf(plus, n, fluid, env, obs);
            const auto res_minus = residual_vector_or_inf(minus, n, fluid, env, obs);
            for (std::size_t i = 0; i < m; ++i) {
                const double d = (res_plus[i] - res_minus[i]) / (2.0 * step);
                if (!std::isfinite(d)) {
                    jac_ok = false;
                    break;
                }
                jac[i][j] = d;
            }
        }
        if (!jac_ok) break;  // cannot linearize here; report best so far

        const auto res = residual_vector_or_inf(p, n, fluid, env, obs);
        std::array<std::array<double, kNumContinuous>, kNumContinuous> normal{};
        ParamVector grad{};
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < kNumContinuous; ++j) {
                grad[j] += jac[i][j] * res[i];
                for (std::size_t k = 0; k <= j; ++k) normal[j][k] += jac[i][j] * jac[i][k];
            }
        }
        for (std::size_t j = 0; j < kNumContinuous; ++j) {
            for (std::size_t k = j + 1; k < kNumContinuous; ++k) normal[j][k] = normal[k][j];
        }
        double max_diag = 0.0;
        for (std::size_t j = 0; j < kNumContinuous; ++j) {
            max_diag = std::max(max_diag, normal[j][j]);
        }
        const double diag_floor = std::max(1e-12 * max_diag, 1e-300);

        bool accepted = false;
        for (int attempt = 0; attempt < 60; ++attempt) {
            auto damped = normal;
            for (std::size_t j = 0; j < kNumContinuous; ++j) {
                damped[j][j] += lambda * std::max(normal[j][j], diag_floor);
            }
            ParamVector rhs{};
            for (std::size_t j = 0; j < kNumContinuous; ++j) rhs[j] = -grad[j];
            ParamVector delta{};
            if (solve_spd(damped, rhs, delta)) {
                ParamVector trial = p;
                for (std::size_t j = 0; j < kNumContinuous; ++j) trial[j] += delta[j];
                const double trial_objective = sum_squares(trial, n, fluid, env, obs);
                if (trial_objective <= objective) {
                    const double improvement = objective - trial_objective;
                    p = trial;
                    objective = trial_objective;
                    lambda = std::max(lambda / opt.damping_decrease, 1e-15);
                    accepted = true;
                    result.params = p;
                    result.objective = objective;
                    if (opt.objective_trace) opt.objective_trace->push_back(objective);
                    if (objective <= kObjectiveFloor ||
                        improvement <= opt.convergence_tol * std::max(objective + improvement,
                                                                      1e-300)) {
                        result.converged = true;
                        return result;
                    }
                    break;
                }
            }
            lambda *= opt.damping_increase;
            if (lambda > 1e15) break;
        }
        if (!accepted) return result;  // stalled: no acceptable step at any damping
    }
    return result;
}

}  // namespace detail

/// Fit the model to observations. For each candidate n the eight continuous
/// parameters are refined from `init`; the candidate with the smallest final
/// sum of squared residuals wins (first on ties).
///
/// Preconditions: at least 9 observations spanning at least 2 distinct H,
/// 3 distinct r, and 2 distinct delta_t values.
inline FitResult fit(const std::vector<Observation>& obs, const FluidSpec& fluid,
                     const ThermalEnvironment& env, const ModelCoefficients& init,
                     const FitOptions& options = FitOptions{}) {
    options.validate();
    fluid.validate();
    env.validate();
    init.validate();
    validate_observations(obs);
    if (obs.size() < 9) {
        throw std::invalid_argument("fit: need at least 9 observations, got " +
                                    std::to_string(obs.size()));
    }
    std::set<double> hs, rs, ts;
    for (const auto& o : obs) {
        hs.insert(o.h);
        rs.insert(o.r);
        ts.insert(o.delta_t);
    }
    if (hs.size() < 2 || rs.size() < 3 || ts.size() < 2) {
        throw std::invalid_argument(
            "fit: observations must span >= 2 distinct H, >= 3 distinct r and carry "
            "non-identical delta_t");
    }

    const detail::ParamVector start = detail::pack_params(init);
    detail::InnerFitResult best;
    double best_n = options.n_grid.front();
    bool any_finite = false;
    for (double n : options.n_grid) {
        const auto candidate = detail::fit_at_n(start, n, fluid, env, obs, options);
        if (std::isfinite(candidate.objective) &&
            (!any_finite || candidate.objective < best.objective)) {
            best = candidate;
            best_n = n;
            any_finite = true;
        } else if (!any_finite && n == options.n_grid.front()) {
            best = candidate;
            best_n = n;
        }
    }

    FitResult result;
    result.coefficients = detail::unpack_params(best.params, best_n);
    result.iterations = best.iterations;
    result.converged = best.converged;
    if (!any_finite) {
        result.residuals.assign(obs.size(), std::numeric_limits<double>::quiet_NaN());
        throw FitFailure("fit: objective is non-finite for every n candidate", result);
    }
    result.residuals = residuals(result.coefficients, fluid, env, obs);
    const auto gof = goodness(result.residuals, obs);
    result.r_squared = gof.r_squared;
    result.rmse = gof.rmse;
    return result;
}

}  // namespace coldjet
