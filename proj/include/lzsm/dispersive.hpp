#pragma once

// Differential capacitance of the double dot seen from the gate and the
// resulting small-signal phase shift of the rf tank circuit.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "lzsm/error.hpp"
#include "lzsm/params.hpp"
#include "lzsm/steady_state.hpp"
#include "lzsm/two_level.hpp"
#include "lzsm/units.hpp"

namespace lzsm {

struct CapacitanceBreakdown {
    double c_geom_aF = 0.0;
    double c_q_aF = 0.0;
    double c_t_aF = 0.0;
    double c_diff_aF = 0.0;

    /// Capacitance in excess of the geometric part.
    double excess_aF() const noexcept { return c_q_aF + c_t_aF; }
};

struct PhaseShift {
    double radians;
    double degrees;
};

namespace detail {

inline double charge_prefactor_aF(const QubitParams& qubit) {
    return 0.5 * qubit.alpha * qubit.alpha * constants.e2_per_ueV_aF;
}

}  // namespace detail

/// C_Q = (eα)²/2 · Δc²/ΔE³ · Z
inline double quantum_capacitance(double eps_ueV, const QubitParams& qubit, double z) {
    qubit.validate();
    detail::require(std::isfinite(z) && z >= -1.0 && z <= 1.0, "z must lie in [-1, 1]");
    const double de = energy_gap(eps_ueV, qubit.delta_c_ueV);
    const double dc = qubit.delta_c_ueV;
    return detail::charge_prefactor_aF(qubit) * dc * dc / (de * de * de) * z;
}

/// C_T = (eα)²/2 · ε/ΔE · ∂Z/∂ε
inline double tunneling_capacitance(double eps_ueV, const QubitParams& qubit, double dz_deps) {
    qubit.validate();
    detail::require_finite(dz_deps, "dz/deps must be finite");
    const double de = energy_gap(eps_ueV, qubit.delta_c_ueV);
    return detail::charge_prefactor_aF(qubit) * eps_ueV / de * dz_deps;
}

inline CapacitanceBreakdown differential_capacitance(double eps_ueV, const QubitParams& qubit,
                                                     const OccupationResult& occupation) {
    CapacitanceBreakdown b;
    b.c_geom_aF = qubit.c_geom_aF;
    b.c_q_aF = quantum_capacitance(eps_ueV, qubit, occupation.z);
    b.c_t_aF = tunneling_capacitance(eps_ueV, qubit, occupation.dz_deps);
    b.c_diff_aF = b.c_geom_aF + b.c_q_aF + b.c_t_aF;
    return b;
}

/// Ground-state occupation with no population redistribution (Z = 1, ∂Z/∂ε = 0).
inline OccupationResult adiabatic_occupation() {
    return OccupationResult{.p_plus = 0.0, .z = 1.0, .dz_deps = 0.0, .n_terms_used = 0};
}

/// ΔΦ ≈ −2·Q·ΔC/C_p
inline PhaseShift phase_shift(double delta_c_diff_aF, const ResonatorParams& res) {
    res.validate();
    const double rad = -2.0 * res.q * (delta_c_diff_aF * 1e-3) / res.c_p_fF;
    return {rad, rad * 180.0 / std::numbers::pi};
}

/// 1/(2π√(L·C_p)) in MHz.
inline double resonant_frequency(double l_nH, double c_p_fF) {
    detail::require(l_nH > 0.0 && c_p_fF > 0.0, "inductance and capacitance must be > 0");
    return 1e-6 / (2.0 * std::numbers::pi * std::sqrt(l_nH * 1e-9 * c_p_fF * 1e-15));
}

/// Adiabatic quantum-capacitance peak C_Q(ε(V_G)) over a gate sweep.
inline std::vector<double> adiabatic_lineshape(std::span<const double> v_g_axis, const QubitParams& qubit) {
    qubit.validate();
    for (std::size_t i = 1; i < v_g_axis.size(); ++i)
        detail::require(v_g_axis[i] > v_g_axis[i - 1], "gate axis must be strictly increasing");
    std::vector<double> out;
    out.reserve(v_g_axis.size());
    for (double v : v_g_axis) out.push_back(quantum_capacitance(detuning_from_gate(v, qubit), qubit, 1.0));
    return out;
}

/// Full width at half maximum of the adiabatic peak in detuning: 2Δc·√(2^{2/3} − 1).
inline double adiabatic_fwhm_ueV(double delta_c_ueV) {
    return 2.0 * delta_c_ueV * std::sqrt(std::cbrt(4.0) - 1.0);
}

}  // namespace lzsm
