#pragma once

#include <cmath>

#include "lzsm/error.hpp"

namespace lzsm {

/// Static double-dot two-level system.
struct QubitParams {
    double delta_c_ueV = 98.0;  ///< tunnel coupling, > 0
    double alpha = 0.25;        ///< lever-arm asymmetry, (0, 1]
    double c_geom_aF = 0.0;     ///< geometric capacitance, >= 0
    double v_g0_V = 0.0;        ///< gate voltage of maximal signal

    void validate() const {
        detail::require(std::isfinite(delta_c_ueV) && delta_c_ueV > 0.0, "delta_c must be finite and > 0");
        detail::require(std::isfinite(alpha) && alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
        detail::require(std::isfinite(c_geom_aF) && c_geom_aF >= 0.0, "c_geom must be finite and >= 0");
        detail::require_finite(v_g0_V, "v_g0 must be finite");
    }
};

/// Microwave drive applied to the detuning.
struct DriveParams {
    double f_mw_GHz = 34.0;           ///< drive frequency, > 0
    double a_mw_ueV = 0.0;            ///< drive amplitude, >= 0
    double kappa_meV_per_V = 0.46;    ///< source-voltage to energy conversion

    void validate() const {
        detail::require(std::isfinite(f_mw_GHz) && f_mw_GHz > 0.0, "f_mw must be finite and > 0");
        detail::require(std::isfinite(a_mw_ueV) && a_mw_ueV >= 0.0, "a_mw must be finite and >= 0");
        detail::require(std::isfinite(kappa_meV_per_V) && kappa_meV_per_V > 0.0, "kappa must be finite and > 0");
    }
};

/// Relaxation and coherence times. Infinite values switch the channel off.
struct DecoherenceParams {
    double t1_ps = 100.0;
    double t2_ps = 100.0;

    void validate() const {
        detail::require(!std::isnan(t1_ps) && t1_ps > 0.0, "t1 must be > 0");
        detail::require(!std::isnan(t2_ps) && t2_ps > 0.0, "t2 must be > 0");
    }

    /// Bloch-ball invariance requires T2 <= 2·T1.
    bool is_physical() const noexcept { return t2_ps <= 2.0 * t1_ps; }

    void validate_physical() const {
        validate();
        detail::require(is_physical(), "t2 must not exceed 2*t1");
    }
};

/// rf tank circuit the gate is coupled to.
struct ResonatorParams {
    double l_nH = 390.0;
    double c_p_fF = 515.0;
    double q = 42.0;
    double f_rf_MHz = 355.0;

    void validate() const {
        detail::require(std::isfinite(l_nH) && l_nH > 0.0, "inductance must be > 0");
        detail::require(std::isfinite(c_p_fF) && c_p_fF > 0.0, "parasitic capacitance must be > 0");
        detail::require(std::isfinite(q) && q > 0.0, "quality factor must be > 0");
        detail::require(std::isfinite(f_rf_MHz) && f_rf_MHz > 0.0, "f_rf must be > 0");
    }
};

}  // namespace lzsm
