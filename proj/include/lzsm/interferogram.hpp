#pragma once

// Forward model for LZSM interferograms: occupation → capacitance → phase.

#include <cmath>
#include <span>
#include <vector>

#include "lzsm/bloch.hpp"
#include "lzsm/dispersive.hpp"
#include "lzsm/parallel.hpp"
#include "lzsm/phase_map.hpp"
#include "lzsm/steady_state.hpp"

namespace lzsm {

struct GridSpec {
    double eps_min_ueV = -700.0;
    double eps_max_ueV = 700.0;
    std::size_t n_eps = 401;
    double amp_min_ueV = 0.0;
    double amp_max_ueV = 1000.0;
    std::size_t n_amp = 201;

    void validate() const {
        detail::require(n_eps >= 2 && n_amp >= 2, "grid needs at least 2 points per axis");
        detail::require(std::isfinite(eps_min_ueV) && std::isfinite(eps_max_ueV) && eps_min_ueV < eps_max_ueV,
                        "eps_min must be < eps_max");
        detail::require(std::isfinite(amp_min_ueV) && std::isfinite(amp_max_ueV) && amp_min_ueV < amp_max_ueV,
                        "amp_min must be < amp_max");
        detail::require(amp_min_ueV >= 0.0, "amplitudes must be >= 0");
    }

    std::vector<double> eps_axis() const { return linspace(eps_min_ueV, eps_max_ueV, n_eps); }
    std::vector<double> amp_axis() const { return linspace(amp_min_ueV, amp_max_ueV, n_amp); }
};

/// Phase (degrees) of the closed-form steady state over the given axes.
/// Only the drive frequency of `drive` is used; amplitudes come from amp_axis.
inline PhaseMap simulate_closed_form(const QubitParams& qubit, const DriveParams& drive, const DecoherenceParams& dec,
                                     const ResonatorParams& res, std::vector<double> eps_axis,
                                     std::vector<double> amp_axis, SteadyStateOptions opts = {}) {
    qubit.validate();
    res.validate();
    PhaseMap map;
    map.eps_axis = std::move(eps_axis);
    map.amp_axis = std::move(amp_axis);
    map.values.assign(map.n_eps() * map.n_amp(), 0.0);

    detail::parallel_for(map.n_amp(), [&](std::size_t i) {
        DriveParams d = drive;
        d.a_mw_ueV = map.amp_axis[i];
        const SteadyStateModel model(qubit, d, dec, opts);
        for (std::size_t j = 0; j < map.n_eps(); ++j) {
            const double eps = map.eps_axis[j];
            const auto cap = differential_capacitance(eps, qubit, model.at(eps));
            map.at(i, j) = phase_shift(cap.excess_aF(), res).degrees;
        }
    });
    return map;
}

inline PhaseMap simulate_closed_form(const QubitParams& qubit, const DriveParams& drive, const DecoherenceParams& dec,
                                     const ResonatorParams& res, const GridSpec& grid, SteadyStateOptions opts = {}) {
    grid.validate();
    return simulate_closed_form(qubit, drive, dec, res, grid.eps_axis(), grid.amp_axis(), opts);
}

/// Phase map with occupations from the time-domain oracle. ∂Z/∂ε comes from
/// central differences along the detuning axis (one-sided at the edges).
inline PhaseMap simulate_bloch(const QubitParams& qubit, const DriveParams& drive, const DecoherenceParams& dec,
                               const ResonatorParams& res, const GridSpec& grid, const IntegrationConfig& cfg = {}) {
    qubit.validate();
    res.validate();
    grid.validate();
    PhaseMap map;
    map.eps_axis = grid.eps_axis();
    map.amp_axis = grid.amp_axis();
    map.values.assign(map.n_eps() * map.n_amp(), 0.0);
    const std::size_t ne = map.n_eps();

    detail::parallel_for(map.n_amp(), [&](std::size_t i) {
        DriveParams d = drive;
        d.a_mw_ueV = map.amp_axis[i];
        std::vector<double> z(ne);
        for (std::size_t j = 0; j < ne; ++j)
            z[j] = 1.0 - 2.0 * time_averaged_upper_occupation(map.eps_axis[j], qubit, d, dec, cfg);
        for (std::size_t j = 0; j < ne; ++j) {
            const std::size_t lo = j == 0 ? 0 : j - 1;
            const std::size_t hi = j + 1 == ne ? j : j + 1;
            OccupationResult occ;
            occ.z = z[j];
            occ.p_plus = 0.5 * (1.0 - z[j]);
            occ.dz_deps = (z[hi] - z[lo]) / (map.eps_axis[hi] - map.eps_axis[lo]);
            const auto cap = differential_capacitance(map.eps_axis[j], qubit, occ);
            map.at(i, j) = phase_shift(cap.excess_aF(), res).degrees;
        }
    });
    return map;
}

}  // namespace lzsm
