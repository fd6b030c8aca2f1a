#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lzsm/error.hpp"

namespace lzsm {

/// Evenly spaced axis from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    detail::require(n >= 2, "axis needs at least two points");
    std::vector<double> out(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

/// Strictly increasing with uniform spacing (1e-9 relative).
inline bool is_uniform_axis(std::span<const double> axis) {
    if (axis.size() < 2) return false;
    const double step = (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
    if (!(step > 0.0) || !std::isfinite(step)) return false;
    for (std::size_t i = 1; i < axis.size(); ++i) {
        const double d = axis[i] - axis[i - 1];
        if (!(d > 0.0) || std::abs(d - step) > 1e-9 * std::abs(step)) return false;
    }
    return true;
}

inline double axis_step(std::span<const double> axis) {
    return (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
}

/// Resonator phase over (ε, A_mw). Values are degrees, row-major [amp][eps].
struct PhaseMap {
    std::vector<double> eps_axis;  ///< µeV
    std::vector<double> amp_axis;  ///< µeV
    std::vector<double> values;
    std::string metadata = "measured";  ///< JSON text of the generating parameters, or "measured"

    std::size_t n_eps() const noexcept { return eps_axis.size(); }
    std::size_t n_amp() const noexcept { return amp_axis.size(); }

    double& at(std::size_t i_amp, std::size_t j_eps) { return values[i_amp * n_eps() + j_eps]; }
    double at(std::size_t i_amp, std::size_t j_eps) const { return values[i_amp * n_eps() + j_eps]; }

    std::span<const double> row(std::size_t i_amp) const {
        return std::span<const double>(values).subspan(i_amp * n_eps(), n_eps());
    }

    void validate() const {
        detail::require(is_uniform_axis(eps_axis), "eps axis must be strictly increasing and uniform");
        detail::require(is_uniform_axis(amp_axis), "amp axis must be strictly increasing and uniform");
        detail::require(values.size() == n_eps() * n_amp(), "value count does not match axes");
        for (double v : values) detail::require_finite(v, "map values must be finite");
    }
};

}  // namespace lzsm
