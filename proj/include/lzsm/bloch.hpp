#pragma once

// Brute-force time-domain model of the driven, damped two-level system.
//
// Hamiltonian ½(ε(t)σz + Δc σx) with ε(t) = ε₀ + A·cos(2πf·t). The Bloch
// vector precesses about B = (Δc, 0, ε(t)) at rate |B|/ħ; the ground state
// is the direction +B̂, so P₊ = ½(1 − r·B̂). Integrated with fixed-step RK4.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lzsm/error.hpp"
#include "lzsm/params.hpp"
#include "lzsm/units.hpp"

namespace lzsm {

struct BlochState {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
    double dot(const BlochState& o) const noexcept { return x * o.x + y * o.y + z * o.z; }

    friend BlochState operator+(const BlochState& a, const BlochState& b) noexcept {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend BlochState operator-(const BlochState& a, const BlochState& b) noexcept {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend BlochState operator*(double s, const BlochState& a) noexcept { return {s * a.x, s * a.y, s * a.z}; }
};

enum class RelaxationBasis {
    /// T₁ drives z toward the large-|ε₀| ground state, T₂ damps x and y.
    Static,
    /// T₁/T₂ act along/across the instantaneous eigen-axis B̂(t).
    Instantaneous,
};

enum class MeasurementBasis {
    /// Excited state of the instantaneous Hamiltonian: P₊ = ½(1 − r·B̂(t)).
    Instantaneous,
    /// Charge state opposite the large-|ε₀| ground state: P₊ = ½(1 − sgn(ε₀)·z).
    Diabatic,
};

struct IntegrationConfig {
    int steps_per_period = 1024;  ///< raised automatically to resolve the fastest precession
    int transient_periods = 0;    ///< 0 selects 50·max(T₁, T₂) of simulated time
    int average_periods = 20;
    RelaxationBasis basis = RelaxationBasis::Static;

    void validate() const {
        detail::require(steps_per_period >= 512, "steps_per_period must be >= 512");
        detail::require(transient_periods >= 0, "transient_periods must be >= 0");
        detail::require(average_periods >= 20, "average_periods must be >= 20");
    }
};

struct IntegrationResult {
    /// State at the start of every step inside the averaging window.
    std::vector<BlochState> trajectory;
    /// Mean state over each averaging period.
    std::vector<BlochState> period_means;
    double residual = 0.0;  ///< max component change between the last two period means
    bool steady = false;    ///< residual < 1e-6
    double max_norm = 0.0;  ///< largest |r| seen anywhere during integration
    int steps_per_period = 0;
    int transient_periods = 0;
};

/// Minimum steps per drive period so that dt <= 0.02·h/ΔE_max.
inline int required_steps_per_period(double eps0_ueV, const QubitParams& qubit, const DriveParams& drive) {
    const double de_max = std::hypot(std::abs(eps0_ueV) + drive.a_mw_ueV, qubit.delta_c_ueV);
    return static_cast<int>(std::ceil(50.0 * de_max / photon_energy(drive.f_mw_GHz)));
}

inline int auto_transient_periods(const DecoherenceParams& dec, const DriveParams& drive) {
    const double t_max = std::max(dec.t1_ps, dec.t2_ps);
    detail::require(std::isfinite(t_max), "transient_periods must be set explicitly when T1 or T2 is infinite");
    return static_cast<int>(std::ceil(50.0 * t_max * drive.f_mw_GHz * 1e-3));
}

namespace detail {

inline double relaxation_target_z(double eps0_ueV) { return eps0_ueV >= 0.0 ? 1.0 : -1.0; }

inline BlochState bloch_rate(const BlochState& r, double eps_t, double eps0, double delta_c,
                             const DecoherenceParams& dec, RelaxationBasis basis) {
    const double inv_hbar = 1.0 / constants.hbar_ueV_ps;
    const double bx = delta_c * inv_hbar;
    const double bz = eps_t * inv_hbar;
    // B × r with B = (bx, 0, bz)
    BlochState d{-bz * r.y, bz * r.x - bx * r.z, bx * r.y};

    const double g1 = 1.0 / dec.t1_ps;
    const double g2 = 1.0 / dec.t2_ps;
    if (basis == RelaxationBasis::Static) {
        d.x -= g2 * r.x;
        d.y -= g2 * r.y;
        d.z -= g1 * (r.z - relaxation_target_z(eps0));
    } else {
        const double len = std::hypot(delta_c, eps_t);
        const BlochState h{delta_c / len, 0.0, eps_t / len};
        const double par = r.dot(h);
        const BlochState perp = r - par * h;
        d = d - g2 * perp - (g1 * (par - 1.0)) * h;
    }
    return d;
}

inline double upper_probability(const BlochState& r, double eps_t, double delta_c) {
    const double len = std::hypot(delta_c, eps_t);
    return 0.5 * (1.0 - (r.x * delta_c + r.z * eps_t) / len);
}

/// Drives RK4 through the transient and the averaging window; `visit(state,
/// eps_t, step_in_period)` is called at the start of every averaging step.
template <class Visitor>
IntegrationResult run_bloch(double eps0_ueV, const QubitParams& qubit, const DriveParams& drive,
                            const DecoherenceParams& dec, const IntegrationConfig& cfg, Visitor&& visit) {
    qubit.validate();
    drive.validate();
    dec.validate_physical();
    cfg.validate();
    detail::require_finite(eps0_ueV, "detuning must be finite");

    IntegrationResult res;
    res.steps_per_period = std::max(cfg.steps_per_period, required_steps_per_period(eps0_ueV, qubit, drive));
    res.transient_periods = cfg.transient_periods > 0 ? cfg.transient_periods : auto_transient_periods(dec, drive);

    const int steps = res.steps_per_period;
    const double period = 1e3 / drive.f_mw_GHz;  // ps
    const double dt = period / steps;

    // ε(t) at every half step of one period; the drive is exactly periodic.
    std::vector<double> eps_half(2 * static_cast<std::size_t>(steps) + 1);
    for (std::size_t k = 0; k < eps_half.size(); ++k)
        eps_half[k] = eps0_ueV + drive.a_mw_ueV * std::cos(std::numbers::pi * static_cast<double>(k) / steps);

    const double dc = qubit.delta_c_ueV;
    const double len0 = std::hypot(dc, eps_half[0]);
    BlochState r{dc / len0, 0.0, eps_half[0] / len0};
    res.max_norm = r.norm();

    auto rate = [&](const BlochState& s, double e) { return bloch_rate(s, e, eps0_ueV, dc, dec, cfg.basis); };

    const long total_periods = static_cast<long>(res.transient_periods) + cfg.average_periods;
    res.period_means.reserve(static_cast<std::size_t>(cfg.average_periods));
    for (long p = 0; p < total_periods; ++p) {
        const bool averaging = p >= res.transient_periods;
        BlochState sum{};
        for (int k = 0; k < steps; ++k) {
            const double e0 = eps_half[2 * static_cast<std::size_t>(k)];
            const double e1 = eps_half[2 * static_cast<std::size_t>(k) + 1];
            const double e2 = eps_half[2 * static_cast<std::size_t>(k) + 2];
            if (averaging) {
                visit(r, e0, k);
                sum = sum + r;
            }
            const BlochState k1 = rate(r, e0);
            const BlochState k2 = rate(r + (0.5 * dt) * k1, e1);
            const BlochState k3 = rate(r + (0.5 * dt) * k2, e1);
            const BlochState k4 = rate(r + dt * k3, e2);
            r = r + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            res.max_norm = std::max(res.max_norm, r.norm());
        }
        if (averaging) res.period_means.push_back((1.0 / steps) * sum);
    }

    const auto& m = res.period_means;
    if (m.size() >= 2) {
        const BlochState diff = m[m.size() - 1] - m[m.size() - 2];
        res.residual = std::max({std::abs(diff.x), std::abs(diff.y), std::abs(diff.z)});
    }
    res.steady = res.residual < 1e-6;
    return res;
}

}  // namespace detail

/// Right-hand side of the Bloch equations at time t (ps).
inline BlochState bloch_derivative(const BlochState& state, double t_ps, double eps0_ueV, const QubitParams& qubit,
                                   const DriveParams& drive, const DecoherenceParams& dec,
                                   RelaxationBasis basis = RelaxationBasis::Static) {
    const double eps_t = eps0_ueV + drive.a_mw_ueV * std::cos(2.0 * std::numbers::pi * drive.f_mw_GHz * 1e-3 * t_ps);
    return detail::bloch_rate(state, eps_t, eps0_ueV, qubit.delta_c_ueV, dec, basis);
}

/// Integrates from the instantaneous ground state and records the averaging window.
inline IntegrationResult integrate(double eps0_ueV, const QubitParams& qubit, const DriveParams& drive,
                                   const DecoherenceParams& dec, const IntegrationConfig& cfg = {}) {
    std::vector<BlochState> traj;
    auto res = detail::run_bloch(eps0_ueV, qubit, drive, dec, cfg,
                                 [&](const BlochState& s, double, int) { traj.push_back(s); });
    res.trajectory = std::move(traj);
    return res;
}

/// Period-averaged excited-state probability in the steady state.
inline double time_averaged_upper_occupation(double eps0_ueV, const QubitParams& qubit, const DriveParams& drive,
                                             const DecoherenceParams& dec, const IntegrationConfig& cfg = {},
                                             MeasurementBasis measure = MeasurementBasis::Instantaneous) {
    double acc = 0.0;
    long count = 0;
    const double dc = qubit.delta_c_ueV;
    const double zs = detail::relaxation_target_z(eps0_ueV);
    const auto res = detail::run_bloch(eps0_ueV, qubit, drive, dec, cfg, [&](const BlochState& s, double e, int) {
        acc += measure == MeasurementBasis::Instantaneous ? detail::upper_probability(s, e, dc)
                                                          : 0.5 * (1.0 - zs * s.z);
        ++count;
    });
    if (!res.steady)
        throw PreconditionError("Bloch integration did not reach steady state (residual " +
                                std::to_string(res.residual) + ")");
    return acc / static_cast<double>(count);
}

}  // namespace lzsm
