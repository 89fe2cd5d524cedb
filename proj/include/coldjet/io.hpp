#pragma once

/// @file io.hpp
/// File formats at the tool boundary. Lengths are mm and flow is L/min in
/// files; conversion to SI happens here, once.
///
///  - observation CSV: header `r_mm,h_mm,delta_t_c`, one row per observation
///  - frame CSV: raw rectangular grid of temperatures [deg C], no header
///  - coefficient document: flat JSON with exactly the keys
///    alpha, beta, gamma, n, a, b, c, f, g plus optional fluid/env blocks
///  - threshold report CSV: header `h_mm,nu_star,r_star_mm,lcsgdt_mm,status`
///  - plan CSV: header `x_mm[,y_mm]` with a `# count=...` summary comment

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fit.hpp"
#include "layout.hpp"
#include "model.hpp"
#include "thermal.hpp"
#include "threshold.hpp"

namespace coldjet {

namespace detail {

/// Shortest lossless decimal form of a double.
inline std::string format_full(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

inline std::string format_short(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

inline double parse_number(const std::string& token, std::size_t line, std::size_t column) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    // allow trailing spaces only
    while (consumed < token.size() && (token[consumed] == ' ' || token[consumed] == '\t' ||
                                       token[consumed] == '\r')) {
        ++consumed;
    }
    if (consumed != token.size() || token.empty()) {
        throw std::runtime_error("parse error at row " + std::to_string(line) + ", column " +
                                 std::to_string(column) + ": not a number: '" + token + "'");
    }
    return value;
}

inline std::vector<std::string> split_csv_row(const std::string& row) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(row);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!row.empty() && row.back() == ',') cells.emplace_back();
    return cells;
}

inline std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Observation CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kObservationHeader = "r_mm,h_mm,delta_t_c";

inline std::vector<Observation> read_observations(std::istream& in) {
    std::string line;
    std::size_t line_number = 0;
    bool header_seen = false;
    std::vector<Observation> obs;
    while (std::getline(in, line)) {
        ++line_number;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != kObservationHeader) {
                throw std::runtime_error("observation CSV: line " + std::to_string(line_number) +
                                         ": expected header '" + kObservationHeader + "'");
            }
            header_seen = true;
            continue;
        }
        const auto cells = detail::split_csv_row(line);
        if (cells.size() != 3) {
            throw std::runtime_error("observation CSV: line " + std::to_string(line_number) +
                                     ": expected 3 columns, got " + std::to_string(cells.size()));
        }
        Observation o;
        o.r = detail::parse_number(cells[0], line_number, 1) / 1000.0;
        o.h = detail::parse_number(cells[1], line_number, 2) / 1000.0;
        o.delta_t = detail::parse_number(cells[2], line_number, 3);
        obs.push_back(o);
    }
    if (!header_seen) throw std::runtime_error("observation CSV: empty input");
    return obs;
}

inline void write_observations(std::ostream& out, const std::vector<Observation>& obs) {
    out << kObservationHeader << "\n";
    for (const auto& o : obs) {
        out << detail::format_full(o.r * 1000.0) << ',' << detail::format_full(o.h * 1000.0)
            << ',' << detail::format_full(o.delta_t) << "\n";
    }
}

// ---------------------------------------------------------------------------
// Frame CSV (row-major temperatures, no header; pitch supplied out-of-band)
// ---------------------------------------------------------------------------

inline ThermalFrame load_frame(std::istream& in, double pitch) {
    ThermalFrame frame;
    frame.pitch = pitch;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        const auto cells = detail::split_csv_row(line);
        if (frame.width == 0) {
            frame.width = cells.size();
        } else if (cells.size() != frame.width) {
            throw std::runtime_error("frame CSV: row " + std::to_string(row) + ": expected " +
                                     std::to_string(frame.width) + " columns, got " +
                                     std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            frame.temperatures.push_back(detail::parse_number(cells[c], row, c + 1));
        }
        ++frame.height;
    }
    if (frame.height == 0) throw std::runtime_error("frame CSV: empty input");
    frame.validate();
    return frame;
}

inline ThermalFrame load_frame_file(const std::string& path, double pitch) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open frame file: " + path);
    try {
        return load_frame(in, pitch);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline void write_frame(std::ostream& out, const ThermalFrame& frame) {
    for (std::size_t y = 0; y < frame.height; ++y) {
        for (std::size_t x = 0; x < frame.width; ++x) {
            if (x > 0) out << ',';
            out << detail::format_full(frame.at(x, y));
        }
        out << "\n";
    }
}

// ---------------------------------------------------------------------------
// Coefficient document (JSON)
// ---------------------------------------------------------------------------

/// A coefficient file may carry the fluid and environment it was fitted
/// under; missing fields fall back to the defaults.
struct CoefficientDocument {
    ModelCoefficients coefficients;
    std::optional<double> flow_lpm, d0_mm, nu, pr;
    std::optional<double> ts0_c, ta0_c, te_c;

    FluidSpec fluid_or_default() const {
        FluidSpec fluid = default_fluid();
        if (flow_lpm) fluid.volume_flow_rate = *flow_lpm / 60000.0;
        if (d0_mm) fluid.nozzle_diameter = *d0_mm / 1000.0;
        if (nu) fluid.kinematic_viscosity = *nu;
        if (pr) fluid.prandtl = *pr;
        return fluid;
    }

    ThermalEnvironment env_or_default() const {
        ThermalEnvironment env = default_environment();
        if (ts0_c) env.surface_initial = *ts0_c;
        if (ta0_c) env.airflow_initial = *ta0_c;
        if (te_c) env.ambient = *te_c;
        return env;
    }
};

namespace detail {

inline double require_number(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key)) {
        throw std::runtime_error("coefficient file: missing key '" + key + "'");
    }
    if (!j.at(key).is_number()) {
        throw std::runtime_error("coefficient file: key '" + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

inline std::optional<double> optional_number(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_number()) {
        throw std::runtime_error("coefficient file: key '" + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

inline void reject_unknown(const nlohmann::json& j, const std::vector<std::string>& known,
                           const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto& k : known) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw std::runtime_error("coefficient file: unknown key '" + it.key() + "'" +
                                     (where.empty() ? "" : " in " + where));
        }
    }
}

}  // namespace detail

inline CoefficientDocument read_coefficients(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("coefficient file: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("coefficient file: expected a JSON object");
    detail::reject_unknown(
        j, {"alpha", "beta", "gamma", "n", "a", "b", "c", "f", "g", "fluid", "env"}, "");

    CoefficientDocument doc;
    doc.coefficients.alpha = detail::require_number(j, "alpha");
    doc.coefficients.beta = detail::require_number(j, "beta");
    doc.coefficients.gamma = detail::require_number(j, "gamma");
    doc.coefficients.n = detail::require_number(j, "n");
    doc.coefficients.a = detail::require_number(j, "a");
    doc.coefficients.b = detail::require_number(j, "b");
    doc.coefficients.c = detail::require_number(j, "c");
    doc.coefficients.f = detail::require_number(j, "f");
    doc.coefficients.g = detail::require_number(j, "g");
    doc.coefficients.validate();

    if (j.contains("fluid")) {
        const auto& fluid = j.at("fluid");
        if (!fluid.is_object()) throw std::runtime_error("coefficient file: 'fluid' must be an object");
        detail::reject_unknown(fluid, {"flow_lpm", "d0_mm", "nu", "pr"}, "'fluid'");
        doc.flow_lpm = detail::optional_number(fluid, "flow_lpm");
        doc.d0_mm = detail::optional_number(fluid, "d0_mm");
        doc.nu = detail::optional_number(fluid, "nu");
        doc.pr = detail::optional_number(fluid, "pr");
    }
    if (j.contains("env")) {
        const auto& env = j.at("env");
        if (!env.is_object()) throw std::runtime_error("coefficient file: 'env' must be an object");
        detail::reject_unknown(env, {"ts0_c", "ta0_c", "te_c"}, "'env'");
        doc.ts0_c = detail::optional_number(env, "ts0_c");
        doc.ta0_c = detail::optional_number(env, "ta0_c");
        doc.te_c = detail::optional_number(env, "te_c");
    }
    doc.fluid_or_default().validate();
    doc.env_or_default().validate();
    return doc;
}

inline CoefficientDocument read_coefficients_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open coefficient file: " + path);
    try {
        return read_coefficients(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline void write_coefficients(std::ostream& out, const ModelCoefficients& coeffs,
                               const std::optional<FluidSpec>& fluid = std::nullopt,
                               const std::optional<ThermalEnvironment>& env = std::nullopt) {
    nlohmann::json j;
    j["alpha"] = coeffs.alpha;
    j["beta"] = coeffs.beta;
    j["gamma"] = coeffs.gamma;
    j["n"] = coeffs.n;
    j["a"] = coeffs.a;
    j["b"] = coeffs.b;
    j["c"] = coeffs.c;
    j["f"] = coeffs.f;
    j["g"] = coeffs.g;
    if (fluid) {
        j["fluid"] = {{"flow_lpm", fluid->volume_flow_rate * 60000.0},
                      {"d0_mm", fluid->nozzle_diameter * 1000.0},
                      {"nu", fluid->kinematic_viscosity},
                      {"pr", fluid->prandtl}};
    }
    if (env) {
        j["env"] = {{"ts0_c", env->surface_initial},
                    {"ta0_c", env->airflow_initial},
                    {"te_c", env->ambient}};
    }
    out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Threshold report and plan CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kThresholdHeader = "h_mm,nu_star,r_star_mm,lcsgdt_mm,status";

inline std::string threshold_status(const ThresholdEntry& entry) {
    if (entry.ok) return "ok";
    if (entry.error.find("no crossing") != std::string::npos) return "no-crossing";
    if (entry.error.find("tail") != std::string::npos) return "no-tail";
    return "error";
}

inline void write_threshold_report(std::ostream& out, const std::vector<ThresholdEntry>& table) {
    out << kThresholdHeader << "\n";
    for (const auto& entry : table) {
        out << detail::format_short(entry.h * 1000.0) << ','
            << detail::format_short(entry.result.nu_star) << ',';
        if (entry.ok) {
            out << detail::format_short(entry.result.r_star * 1000.0) << ','
                << detail::format_short(entry.result.lcsgdt * 1000.0);
        } else {
            out << ',';
        }
        out << ',' << threshold_status(entry) << "\n";
    }
}

inline void write_plan(std::ostream& out, const LayoutPlan& plan) {
    out << (plan.two_d ? "x_mm,y_mm" : "x_mm") << "\n";
    out << "# count=" << plan.count << " spacing_x=" << detail::format_short(plan.spacing_x * 1000.0);
    if (plan.two_d) out << " spacing_y=" << detail::format_short(plan.spacing_y * 1000.0);
    out << "\n";
    for (const auto& p : plan.positions) {
        out << detail::format_short(p[0] * 1000.0);
        if (plan.two_d) out << ',' << detail::format_short(p[1] * 1000.0);
        out << "\n";
    }
}

}  // namespace coldjet
