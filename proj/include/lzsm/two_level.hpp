#pragma once

// Static two-level model of a singly occupied double quantum dot.

#include <cmath>

#include "lzsm/error.hpp"
#include "lzsm/params.hpp"
#include "lzsm/units.hpp"

namespace lzsm {

struct EnergyLevels {
    double lower_ueV;
    double upper_ueV;
};

inline double energy_gap(double eps_ueV, double delta_c_ueV) {
    detail::require_finite(eps_ueV, "detuning must be finite");
    detail::require(std::isfinite(delta_c_ueV) && delta_c_ueV > 0.0, "delta_c must be finite and > 0");
    return std::hypot(eps_ueV, delta_c_ueV);
}

/// E± = ±½·√(ε² + Δc²)
inline EnergyLevels energy_levels(double eps_ueV, double delta_c_ueV) {
    const double half = 0.5 * energy_gap(eps_ueV, delta_c_ueV);
    return {-half, half};
}

/// Mean right-dot occupation ⟨n⟩ = ½(1 + ε/ΔE · Z), with Z = P₋ − P₊.
inline double avg_occupation(double eps_ueV, double delta_c_ueV, double z) {
    detail::require(std::isfinite(z) && z >= -1.0 && z <= 1.0, "z must lie in [-1, 1]");
    return 0.5 * (1.0 + eps_ueV / energy_gap(eps_ueV, delta_c_ueV) * z);
}

/// Single-passage Landau-Zener probability exp(−πΔc²/(2·A·h·f)).
inline double landau_zener_probability(const QubitParams& qubit, const DriveParams& drive) {
    qubit.validate();
    drive.validate();
    detail::require(drive.a_mw_ueV > 0.0, "Landau-Zener probability needs a_mw > 0");
    const double dc = qubit.delta_c_ueV;
    return std::exp(-std::numbers::pi * dc * dc / (2.0 * drive.a_mw_ueV * photon_energy(drive.f_mw_GHz)));
}

/// ε = e·α·(V_G − V_G0), returned in µeV.
inline double detuning_from_gate(double v_g_V, const QubitParams& qubit) {
    detail::require_finite(v_g_V, "gate voltage must be finite");
    return 1e6 * qubit.alpha * (v_g_V - qubit.v_g0_V);
}

/// Inverse of detuning_from_gate.
inline double gate_from_detuning(double eps_ueV, const QubitParams& qubit) {
    return qubit.v_g0_V + eps_ueV / (1e6 * qubit.alpha);
}

/// A_mw = κ·V_mw, returned in µeV.
inline double amplitude_from_source_voltage(double v_mw_V, const DriveParams& drive) {
    detail::require(std::isfinite(v_mw_V) && v_mw_V >= 0.0, "source voltage must be finite and >= 0");
    return 1e3 * drive.kappa_meV_per_V * v_mw_V;
}

struct AdiabaticReport {
    double thermal_ratio;  ///< Δc / (k_B·T_e)
    double rf_ratio;       ///< Δc / (h·f_rf)
    double threshold;
    bool adiabatic;
};

/// Checks Δc ≫ k_B·T_e and Δc ≫ h·f_rf against a ratio threshold.
inline AdiabaticReport check_adiabatic_regime(const QubitParams& qubit, double t_e_K, double f_rf_MHz,
                                              double threshold = 5.0) {
    detail::require(t_e_K > 0.0, "electron temperature must be > 0");
    detail::require(f_rf_MHz > 0.0, "f_rf must be > 0");
    const double thermal = qubit.delta_c_ueV / (constants.k_B_ueV_per_K * t_e_K);
    const double rf = qubit.delta_c_ueV / photon_energy(f_rf_MHz * 1e-3);
    return {thermal, rf, threshold, thermal > threshold && rf > threshold};
}

}  // namespace lzsm
