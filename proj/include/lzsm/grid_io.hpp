#pragma once

// File formats: versioned grid CSV (phase maps and spectra), two-column gate
// traces, and 8-bit binary PGM renderings.
//
//   # lzsm-grid v1
//   # eps_ueV: <comma list>
//   # amp_ueV: <comma list>
//   <one comma-separated row per amplitude>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lzsm/error.hpp"
#include "lzsm/phase_map.hpp"
#include "lzsm/spectral.hpp"

namespace lzsm {

inline constexpr std::string_view grid_magic = "# lzsm-grid v1";
inline constexpr std::string_view trace_header = "v_g_V,phase_deg";

/// Generic 2D grid as stored on disk; values are row-major [y][x].
struct GridFile {
    std::string x_label;
    std::string y_label;
    std::vector<double> x_axis;
    std::vector<double> y_axis;
    std::vector<double> values;
};

struct GateTrace {
    std::vector<double> v_g_V;
    std::vector<double> phase_deg;
};

/// 17 significant digits, enough to read back the identical double.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view field, std::size_t line) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || end != field.data() + field.size())
        throw FormatError(line, "not a number: '" + std::string(field) + "'");
    if (!std::isfinite(v)) throw FormatError(line, "non-finite value");
    return v;
}

inline std::vector<double> parse_list(std::string_view text, std::size_t line) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(parse_number(text.substr(start, comma - start), line));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline void write_list(std::ostream& os, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << format_double(values[i]);
    }
    os << '\n';
}

/// Parses "# <label>: <list>".
inline std::vector<double> parse_axis_line(std::string_view text, std::size_t line, std::string& label) {
    text = trim(text);
    if (text.substr(0, 2) != "# ") throw FormatError(line, "expected '# <axis>: <values>'");
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw FormatError(line, "axis line has no ':'");
    label = std::string(trim(text.substr(2, colon - 2)));
    if (label.empty()) throw FormatError(line, "axis label is empty");
    return parse_list(text.substr(colon + 1), line);
}

}  // namespace detail

inline void write_grid(std::ostream& os, const GridFile& grid) {
    os << grid_magic << '\n';
    os << "# " << grid.x_label << ": ";
    detail::write_list(os, grid.x_axis);
    os << "# " << grid.y_label << ": ";
    detail::write_list(os, grid.y_axis);
    const std::size_t nx = grid.x_axis.size();
    for (std::size_t i = 0; i < grid.y_axis.size(); ++i)
        detail::write_list(os, std::span<const double>(grid.values).subspan(i * nx, nx));
}

inline void write_phase_map(std::ostream& os, const PhaseMap& map) {
    write_grid(os, {"eps_ueV", "amp_ueV", map.eps_axis, map.amp_axis, map.values});
}

inline void write_spectrum(std::ostream& os, const Spectrum2D& spec) {
    write_grid(os, {"k_eps_ps", "k_amp_per_ueV", spec.k_eps_axis, spec.k_amp_axis, spec.magnitude});
}

inline GridFile read_grid(std::istream& is) {
    GridFile grid;
    std::string text;
    std::size_t line = 0;

    auto next = [&](const char* what) {
        if (!std::getline(is, text)) throw FormatError(line + 1, std::string("unexpected end of file, expected ") + what);
        ++line;
    };

    next("header");
    if (detail::trim(text) != grid_magic) throw FormatError(line, "missing '# lzsm-grid v1' header");
    next("x axis");
    grid.x_axis = detail::parse_axis_line(text, line, grid.x_label);
    next("y axis");
    grid.y_axis = detail::parse_axis_line(text, line, grid.y_label);

    const std::size_t nx = grid.x_axis.size();
    grid.values.reserve(nx * grid.y_axis.size());
    while (std::getline(is, text)) {
        ++line;
        if (detail::trim(text).empty()) continue;
        if (grid.values.size() == nx * grid.y_axis.size()) throw FormatError(line, "more data rows than y-axis values");
        const auto row = detail::parse_list(text, line);
        if (row.size() != nx)
            throw FormatError(line, "row has " + std::to_string(row.size()) + " values, expected " + std::to_string(nx));
        grid.values.insert(grid.values.end(), row.begin(), row.end());
    }
    if (grid.values.size() != nx * grid.y_axis.size())
        throw FormatError(line + 1, "expected " + std::to_string(grid.y_axis.size()) + " data rows, found " +
                                        std::to_string(grid.values.size() / std::max<std::size_t>(nx, 1)));
    return grid;
}

/// Reads a phase-map grid; axes must be uniform and strictly increasing.
inline PhaseMap read_phase_map(std::istream& is) {
    auto grid = read_grid(is);
    if (grid.x_label != "eps_ueV" || grid.y_label != "amp_ueV")
        throw FormatError(2, "expected eps_ueV / amp_ueV axes, found " + grid.x_label + " / " + grid.y_label);
    if (!is_uniform_axis(grid.x_axis)) throw FormatError(2, "eps axis must be uniform and strictly increasing");
    if (!is_uniform_axis(grid.y_axis)) throw FormatError(3, "amp axis must be uniform and strictly increasing");
    PhaseMap map;
    map.eps_axis = std::move(grid.x_axis);
    map.amp_axis = std::move(grid.y_axis);
    map.values = std::move(grid.values);
    return map;
}

inline void write_trace(std::ostream& os, const GateTrace& trace) {
    os << trace_header << '\n';
    for (std::size_t i = 0; i < trace.v_g_V.size(); ++i)
        os << format_double(trace.v_g_V[i]) << ',' << format_double(trace.phase_deg[i]) << '\n';
}

inline GateTrace read_trace(std::istream& is) {
    GateTrace trace;
    std::string text;
    std::size_t line = 0;
    if (!std::getline(is, text)) throw FormatError(1, "empty trace file");
    ++line;
    if (detail::trim(text) != trace_header) throw FormatError(line, "expected header 'v_g_V,phase_deg'");
    while (std::getline(is, text)) {
        ++line;
        if (detail::trim(text).empty()) continue;
        const auto row = detail::parse_list(text, line);
        if (row.size() != 2) throw FormatError(line, "expected two columns");
        trace.v_g_V.push_back(row[0]);
        trace.phase_deg.push_back(row[1]);
    }
    return trace;
}

struct GrayMapping {
    double min = 0.0;
    double max = 0.0;
    bool degenerate = false;  ///< min == max, rendered as uniform 128
};

/// Binary P5 image, linear min→0 … max→255. The first image row is the
/// last y-axis value so that y increases upward.
inline GrayMapping write_pgm(std::ostream& os, const GridFile& grid) {
    const std::size_t w = grid.x_axis.size();
    const std::size_t h = grid.y_axis.size();
    detail::require(w > 0 && h > 0 && grid.values.size() == w * h, "grid values do not match axes");
    GrayMapping m;
    const auto [lo, hi] = std::minmax_element(grid.values.begin(), grid.values.end());
    m.min = *lo;
    m.max = *hi;
    m.degenerate = !(m.max > m.min);

    os << "P5\n" << w << ' ' << h << "\n255\n";
    std::vector<unsigned char> row(w);
    for (std::size_t r = 0; r < h; ++r) {
        const std::size_t i = h - 1 - r;
        for (std::size_t j = 0; j < w; ++j) {
            if (m.degenerate) {
                row[j] = 128;
            } else {
                const double t = (grid.values[i * w + j] - m.min) / (m.max - m.min);
                row[j] = static_cast<unsigned char>(std::clamp(std::lround(t * 255.0), 0L, 255L));
            }
        }
        os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(w));
    }
    return m;
}

}  // namespace lzsm
