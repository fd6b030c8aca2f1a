#pragma once

// Canonical unit system used throughout the library:
//   energy µeV, time ps, frequency GHz, capacitance aF, voltage V.
// Products like h·f therefore come out directly in µeV when f is in GHz.

#include <numbers>

namespace lzsm {

struct PhysicalConstants {
    /// Planck constant, µeV/GHz (numerically equal to µeV·ns).
    double h_ueV_per_GHz;
    /// Planck constant, µeV·ps.
    double h_ueV_ps;
    /// Reduced Planck constant, µeV·ps.
    double hbar_ueV_ps;
    /// Boltzmann constant, µeV/K.
    double k_B_ueV_per_K;
    /// Elementary charge, C.
    double e_C;
    /// e² / (1 µeV) expressed in aF; converts (eα)²·[1/µeV] into capacitance.
    double e2_per_ueV_aF;
};

inline constexpr PhysicalConstants constants{
    .h_ueV_per_GHz = 4.135667696923859,
    .h_ueV_ps = 4135.667696923859,
    .hbar_ueV_ps = 4135.667696923859 / (2.0 * std::numbers::pi),
    .k_B_ueV_per_K = 86.17333,
    .e_C = 1.602176634e-19,
    // e [C] / 1e-6 [V] = 1.602176634e-13 F = 1.602176634e5 aF
    .e2_per_ueV_aF = 1.602176634e5,
};

/// Photon energy h·f in µeV for a frequency in GHz.
constexpr double photon_energy(double f_GHz) noexcept { return constants.h_ueV_per_GHz * f_GHz; }

}  // namespace lzsm
