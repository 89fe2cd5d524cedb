#pragma once

/// @file thermal.hpp
/// Thermal-frame processing: before/after temperature grids, the cooling
/// field between them, jet-center location, four-direction radial profile
/// extraction into observations, and synthetic frame generation from the
/// forward model for end-to-end testing.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fit.hpp"
#include "model.hpp"

namespace coldjet {

/// Rectangular grid of surface temperatures [deg C] with a physical pixel
/// pitch [m/pixel]. Row-major, row 0 at the top.
struct ThermalFrame {
    std::size_t width = 0;
    std::size_t height = 0;
    double pitch = 0.0;
    std::vector<double> temperatures;

    double at(std::size_t x, std::size_t y) const { return temperatures[y * width + x]; }
    double& at(std::size_t x, std::size_t y) { return temperatures[y * width + x]; }

    void validate() const {
        if (width < 3 || height < 3) {
            throw std::invalid_argument("ThermalFrame: width and height must be >= 3");
        }
        if (!(pitch > 0.0) || !std::isfinite(pitch)) {
            throw std::invalid_argument("ThermalFrame: pitch must be positive");
        }
        if (temperatures.size() != width * height) {
            throw std::invalid_argument("ThermalFrame: cell count does not match geometry");
        }
        for (double t : temperatures) {
            if (!std::isfinite(t)) {
                throw std::invalid_argument("ThermalFrame: temperatures must be finite");
            }
        }
    }
};

/// Cellwise before - after [deg C]; positive where the surface cooled.
struct DeltaField {
    std::size_t width = 0;
    std::size_t height = 0;
    double pitch = 0.0;
    std::vector<double> values;

    double at(std::size_t x, std::size_t y) const { return values[y * width + x]; }
};

inline DeltaField delta_field(const ThermalFrame& before, const ThermalFrame& after) {
    before.validate();
    after.validate();
    if (before.width != after.width || before.height != after.height ||
        before.pitch != after.pitch) {
        throw std::invalid_argument("delta_field: frame geometries differ");
    }
    DeltaField field;
    field.width = before.width;
    field.height = before.height;
    field.pitch = before.pitch;
    field.values.resize(before.temperatures.size());
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        field.values[i] = before.temperatures[i] - after.temperatures[i];
    }
    return field;
}

/// Fractional pixel coordinates of the jet impingement center.
struct PixelCenter {
    double x = 0.0;
    double y = 0.0;
};

/// Value-weighted centroid of all pixels within 5 % of the peak cooling.
/// Requires a strictly positive maximum.
inline PixelCenter find_center(const DeltaField& field) {
    double max_value = -std::numeric_limits<double>::infinity();
    for (double v : field.values) max_value = std::max(max_value, v);
    if (!(max_value > 0.0)) {
        throw std::domain_error("find_center: no positive cooling in the field");
    }
    const double threshold = 0.95 * max_value;
    double weight = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t y = 0; y < field.height; ++y) {
        for (std::size_t x = 0; x < field.width; ++x) {
            const double v = field.at(x, y);
            if (v >= threshold) {
                weight += v;
                sx += v * static_cast<double>(x);
                sy += v * static_cast<double>(y);
            }
        }
    }
    return PixelCenter{sx / weight, sy / weight};
}

enum class ProfileDirection { PlusX, MinusX, PlusY, MinusY };

/// Samples along one axis direction from the center pixel outward; r values
/// are consecutive multiples of the pitch starting at 0.
struct RadialProfile {
    ProfileDirection direction = ProfileDirection::PlusX;
    std::vector<std::pair<double, double>> samples;  ///< (r [m], delta_t [deg C])
};

namespace detail {

struct CenterPixel {
    std::size_t x;
    std::size_t y;
};

inline CenterPixel nearest_pixel(const DeltaField& field, PixelCenter center) {
    if (!(center.x >= 0.0) || !(center.x <= static_cast<double>(field.width - 1)) ||
        !(center.y >= 0.0) || !(center.y <= static_cast<double>(field.height - 1))) {
        throw std::invalid_argument("extract_profiles: center lies outside the grid");
    }
    return CenterPixel{static_cast<std::size_t>(std::llround(center.x)),
                       static_cast<std::size_t>(std::llround(center.y))};
}

}  // namespace detail

/// The four axis-aligned profiles through the nearest integer pixel to the
/// given center, each sampled to the grid edge.
inline std::array<RadialProfile, 4> radial_profiles(const DeltaField& field,
                                                    PixelCenter center) {
    const auto c = detail::nearest_pixel(field, center);
    std::array<RadialProfile, 4> profiles;
    const std::array<ProfileDirection, 4> dirs = {
        ProfileDirection::PlusX, ProfileDirection::MinusX, ProfileDirection::PlusY,
        ProfileDirection::MinusY};
    const std::array<std::ptrdiff_t, 4> dx = {1, -1, 0, 0};
    const std::array<std::ptrdiff_t, 4> dy = {0, 0, 1, -1};
    for (std::size_t d = 0; d < 4; ++d) {
        profiles[d].direction = dirs[d];
        std::ptrdiff_t x = static_cast<std::ptrdiff_t>(c.x);
        std::ptrdiff_t y = static_cast<std::ptrdiff_t>(c.y);
        std::size_t k = 0;
        while (x >= 0 && y >= 0 && x < static_cast<std::ptrdiff_t>(field.width) &&
               y < static_cast<std::ptrdiff_t>(field.height)) {
            profiles[d].samples.emplace_back(
                static_cast<double>(k) * field.pitch,
                field.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)));
            x += dx[d];
            y += dy[d];
            ++k;
        }
    }
    return profiles;
}

/// Flatten the four profiles into observations at the caller-supplied
/// presentation distance. The r = 0 sample is emitted once, not four times.
inline std::vector<Observation> extract_profiles(const DeltaField& field, PixelCenter center,
                                                 double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("extract_profiles: H must be positive");
    }
    const auto profiles = radial_profiles(field, center);
    std::vector<Observation> obs;
    obs.push_back(Observation{0.0, h, profiles[0].samples.front().second});
    for (const auto& profile : profiles) {
        for (std::size_t i = 1; i < profile.samples.size(); ++i) {
            obs.push_back(Observation{profile.samples[i].first, h, profile.samples[i].second});
        }
    }
    return obs;
}

/// Deterministic seeded Gaussian source (Box-Muller over mt19937_64), so
/// synthesized fixtures are bit-identical for a fixed seed on any platform.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double operator()(double sigma) {
        if (sigma == 0.0) return 0.0;
        if (has_spare_) {
            has_spare_ = false;
            return sigma * spare_;
        }
        const double u1 =
            (static_cast<double>(rng_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
        const double u2 =
            (static_cast<double>(rng_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return sigma * radius * std::cos(angle);
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Synthesize a before/after frame pair from the forward model: before is a
/// uniform surface at T_s0, after subtracts the predicted cooling at each
/// pixel's radius from the given center (grid center by default). Gaussian
/// pixel noise is drawn from the seed; zero sigma gives the exact field.
inline std::pair<ThermalFrame, ThermalFrame> synthesize_frames(
    const ModelCoefficients& coeffs, const FluidSpec& fluid, const ThermalEnvironment& env,
    double h, double pitch, std::size_t size, double noise_sigma, std::uint64_t seed,
    double center_x = -1.0, double center_y = -1.0) {
    coeffs.check_finite();
    fluid.validate();
    env.validate();
    if (size < 3) throw std::invalid_argument("synthesize_frames: size must be >= 3");
    if (!(pitch > 0.0)) throw std::invalid_argument("synthesize_frames: pitch must be positive");
    if (!(noise_sigma >= 0.0)) {
        throw std::invalid_argument("synthesize_frames: noise_sigma must be non-negative");
    }
    if (!(env.surface_initial > env.airflow_initial)) {
        throw std::invalid_argument(
            "synthesize_frames: cooling scenario requires surface_initial > airflow_initial");
    }
    const double cx = center_x < 0.0 ? static_cast<double>(size - 1) / 2.0 : center_x;
    const double cy = center_y < 0.0 ? static_cast<double>(size - 1) / 2.0 : center_y;

    ThermalFrame before;
    before.width = before.height = size;
    before.pitch = pitch;
    before.temperatures.assign(size * size, env.surface_initial);
    ThermalFrame after = before;

    GaussianSampler noise(seed);
    for (double& t : before.temperatures) t += noise(noise_sigma);
    for (std::size_t y = 0; y < size; ++y) {
        for (std::size_t x = 0; x < size; ++x) {
            const double r =
                std::hypot(static_cast<double>(x) - cx, static_cast<double>(y) - cy) * pitch;
            after.at(x, y) =
                env.surface_initial - predict_delta_t(coeffs, fluid, env, r, h) +
                noise(noise_sigma);
        }
    }
    return {std::move(before), std::move(after)};
}

}  // namespace coldjet
