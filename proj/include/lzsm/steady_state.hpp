#pragma once

// Strong-driving steady state in the rotating-wave approximation: a sum of
// multi-photon Lorentzians with Bessel-renormalized gaps Δc·Jₙ(A/hf).

#include <cmath>
#include <optional>
#include <vector>

#include "lzsm/bessel.hpp"
#include "lzsm/error.hpp"
#include "lzsm/params.hpp"
#include "lzsm/units.hpp"

namespace lzsm {

struct OccupationResult {
    double p_plus = 0.0;         ///< time-averaged excited-state probability, [0, ½]
    double z = 1.0;              ///< P₋ − P₊ = 1 − 2·p_plus
    double dz_deps = 0.0;        ///< ∂z/∂ε, 1/µeV
    int n_terms_used = 0;
    bool clamped = false;        ///< raw photon sum exceeded ½
    bool truncation_warning = false;
};

struct SteadyStateOptions {
    /// Overrides the photon cutoff ceil(A/hf) + 10.
    std::optional<int> n_max;
};

inline int default_photon_cutoff(double a_over_hf) {
    return static_cast<int>(std::ceil(a_over_hf)) + 10;
}

/// Δc,n = Δc·Jₙ(A/hf). May be negative; only its square is physical.
inline double effective_gap(int n, const QubitParams& qubit, const DriveParams& drive) {
    qubit.validate();
    drive.validate();
    return qubit.delta_c_ueV * bessel_j(n, drive.a_mw_ueV / photon_energy(drive.f_mw_GHz));
}

/// Steady-state model for one (qubit, drive, decoherence) point. The
/// Bessel gaps depend only on the drive, so sweeping ε reuses them.
class SteadyStateModel {
public:
    SteadyStateModel(const QubitParams& qubit, const DriveParams& drive, const DecoherenceParams& dec,
                     SteadyStateOptions opts = {})
        : hf_(photon_energy(drive.f_mw_GHz)) {
        qubit.validate();
        drive.validate();
        dec.validate();
        const double x = drive.a_mw_ueV / hf_;
        const int n_max = opts.n_max.value_or(default_photon_cutoff(x));
        detail::require(n_max >= 0, "photon cutoff must be >= 0");
        const auto j = bessel_j_sequence(n_max, x);
        gap2_.reserve(j.size());
        for (double jn : j) {
            const double g = qubit.delta_c_ueV * jn;
            gap2_.push_back(g * g);
        }
        ratio_ = dec.t2_ps / dec.t1_ps;
        const double hbar = constants.hbar_ueV_ps;
        width2_ = hbar * hbar / (dec.t1_ps * dec.t2_ps);
    }

    int n_max() const noexcept { return static_cast<int>(gap2_.size()) - 1; }
    double photon_energy_ueV() const noexcept { return hf_; }

    /// Contribution ½·Δn²/(Δn² + (T₂/T₁)(|ε| − n·hf)² + ħ²/(T₁T₂)) of one photon order.
    double term(int n, double eps_ueV) const {
        detail::require(n >= 0 && n <= n_max(), "photon order outside the summed range");
        return 0.5 * gap2_[static_cast<std::size_t>(n)] / denominator(n, std::abs(eps_ueV));
    }

    OccupationResult at(double eps_ueV) const {
        detail::require_finite(eps_ueV, "detuning must be finite");
        const double ae = std::abs(eps_ueV);
        const double sgn = (eps_ueV > 0.0) - (eps_ueV < 0.0);

        double lorentz_sum = 0.0;
        double dz = 0.0;
        double last = 0.0;
        for (int n = 0; n <= n_max(); ++n) {
            const double g2 = gap2_[static_cast<std::size_t>(n)];
            const double d = denominator(n, ae);
            last = g2 / d;
            lorentz_sum += last;
            dz += 2.0 * g2 * ratio_ * (ae - n * hf_) * sgn / (d * d);
        }

        OccupationResult r;
        r.n_terms_used = n_max() + 1;
        r.truncation_warning = lorentz_sum > 0.0 && last > 1e-9 * lorentz_sum;
        const double p = 0.5 * lorentz_sum;
        if (p > 0.5) {
            r.p_plus = 0.5;
            r.z = 0.0;
            r.dz_deps = 0.0;
            r.clamped = true;
        } else {
            r.p_plus = p;
            r.z = 1.0 - 2.0 * p;
            r.dz_deps = dz;
        }
        return r;
    }

private:
    double denominator(int n, double abs_eps) const {
        const double off = abs_eps - n * hf_;
        return gap2_[static_cast<std::size_t>(n)] + ratio_ * off * off + width2_;
    }

    double hf_;
    double ratio_ = 1.0;
    double width2_ = 0.0;
    std::vector<double> gap2_;
};

inline OccupationResult upper_occupation(double eps_ueV, const QubitParams& qubit, const DriveParams& drive,
                                         const DecoherenceParams& dec, SteadyStateOptions opts = {}) {
    return SteadyStateModel(qubit, drive, dec, opts).at(eps_ueV);
}

/// ∂z/∂ε of the steady state; 0 at ε = 0 where z is even.
inline double z_derivative(double eps_ueV, const QubitParams& qubit, const DriveParams& drive,
                           const DecoherenceParams& dec, SteadyStateOptions opts = {}) {
    return upper_occupation(eps_ueV, qubit, drive, dec, opts).dz_deps;
}

}  // namespace lzsm
