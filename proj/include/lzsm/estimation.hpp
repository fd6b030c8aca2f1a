#pragma once

// Inverse problems: adiabatic lineshape fit (Δc, V_G0, scale), T₁ from an
// interferogram at fixed T₂, and lever-arm calibration from the spacing of
// photon resonances.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lzsm/dispersive.hpp"
#include "lzsm/error.hpp"
#include "lzsm/interferogram.hpp"
#include "lzsm/phase_map.hpp"
#include "lzsm/two_level.hpp"

namespace lzsm {

struct FitParameter {
    std::string name;
    std::string unit;
    double value = 0.0;
    double uncertainty = 0.0;  ///< 1σ from the linearized covariance
};

struct MisfitSample {
    double t1_ps;
    double rms;
};

struct FitResult {
    std::vector<FitParameter> params;
    double residual_norm = 0.0;  ///< RMS misfit in data units
    int iterations = 0;
    bool converged = false;
    std::vector<std::string> warnings;
    std::vector<MisfitSample> misfit_curve;  ///< fit_t1 only

    const FitParameter& param(const std::string& name) const {
        for (const auto& p : params)
            if (p.name == name) return p;
        throw PreconditionError("no fit parameter named " + name);
    }
    double value(const std::string& name) const { return param(name).value; }
};

struct LevenbergMarquardtOptions {
    int max_iterations = 200;
    double relative_step = 1e-6;  ///< central-difference Jacobian step
    /// Converged once every Jacobian column is this close to orthogonal to the residual.
    double gradient_tolerance = 1e-6;
    double initial_damping = 1e-3;
    /// Residual norm below which the residual counts as zero in the gradient test.
    double residual_floor = 0.0;
    /// Typical parameter magnitudes; the difference step is relative_step·max(|p|, scale).
    std::vector<double> scale;
};

struct LevenbergMarquardtOutcome {
    Eigen::VectorXd params;
    Eigen::MatrixXd covariance;
    double cost = 0.0;  ///< ½·Σr²
    int iterations = 0;
    bool converged = false;
    double gradient_measure = 0.0;
    std::vector<double> cost_history;
};

namespace detail {

template <class Residuals>
Eigen::MatrixXd numeric_jacobian(Residuals& f, const Eigen::VectorXd& p, std::size_t m,
                                 const LevenbergMarquardtOptions& opts) {
    const auto n = p.size();
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(m), n);
    Eigen::VectorXd plus(static_cast<Eigen::Index>(m)), minus(static_cast<Eigen::Index>(m));
    for (Eigen::Index k = 0; k < n; ++k) {
        const double typical = static_cast<std::size_t>(k) < opts.scale.size() ? opts.scale[static_cast<std::size_t>(k)] : 1.0;
        const double h = opts.relative_step * std::max(std::abs(p[k]), typical);
        Eigen::VectorXd q = p;
        q[k] = p[k] + h;
        f(q, plus);
        q[k] = p[k] - h;
        f(q, minus);
        jac.col(k) = (plus - minus) / (2.0 * h);
    }
    return jac;
}

/// MINPACK-style scaled gradient: max_k |J_kᵀr| / (‖J_k‖·‖r‖).
inline double gradient_cosine(const Eigen::MatrixXd& jac, const Eigen::VectorXd& r, double floor) {
    const double rn = std::max(r.norm(), floor);
    if (rn == 0.0) return 0.0;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < jac.cols(); ++k) {
        const double cn = jac.col(k).norm();
        if (cn == 0.0) continue;
        worst = std::max(worst, std::abs(jac.col(k).dot(r)) / (cn * rn));
    }
    return worst;
}

}  // namespace detail

/// Damped Gauss-Newton (Levenberg-Marquardt with Marquardt diagonal scaling).
/// `f(params, residuals)` fills m residuals. A step is accepted only if it
/// lowers the cost; otherwise the damping grows tenfold.
template <class Residuals>
LevenbergMarquardtOutcome levenberg_marquardt(Residuals&& f, Eigen::VectorXd p, std::size_t m,
                                              const LevenbergMarquardtOptions& opts = {}) {
    const auto n = p.size();
    detail::require(m >= static_cast<std::size_t>(n), "fit needs at least as many residuals as parameters");

    LevenbergMarquardtOutcome out;
    Eigen::VectorXd r(static_cast<Eigen::Index>(m)), trial_r(static_cast<Eigen::Index>(m));
    f(p, r);
    detail::require(r.allFinite(), "initial residuals are not finite");
    double cost = 0.5 * r.squaredNorm();
    out.cost_history.push_back(cost);
    double lambda = opts.initial_damping;
    Eigen::MatrixXd jac;

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        out.iterations = iter;
        jac = detail::numeric_jacobian(f, p, m, opts);
        out.gradient_measure = detail::gradient_cosine(jac, r, opts.residual_floor);
        if (out.gradient_measure <= opts.gradient_tolerance) {
            out.converged = true;
            break;
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;
        bool accepted = false;
        while (lambda < 1e16) {
            Eigen::MatrixXd a = jtj;
            for (Eigen::Index k = 0; k < n; ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-300);
            const Eigen::VectorXd step = a.ldlt().solve(-g);
            const Eigen::VectorXd trial = p + step;
            f(trial, trial_r);
            const double trial_cost = 0.5 * trial_r.squaredNorm();
            if (trial_r.allFinite() && trial_cost < cost) {
                p = trial;
                r = trial_r;
                cost = trial_cost;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        out.cost_history.push_back(cost);
        if (!accepted) {
            // No descent direction left at machine precision.
            out.converged = out.gradient_measure <= std::sqrt(opts.gradient_tolerance);
            break;
        }
    }

    if (jac.size() == 0 || !out.converged) jac = detail::numeric_jacobian(f, p, m, opts);
    const double dof = static_cast<double>(m) - static_cast<double>(n);
    const double s2 = dof > 0 ? 2.0 * cost / dof : 0.0;
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    out.covariance = s2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
    out.params = p;
    out.cost = cost;
    return out;
}

struct LineshapeInit {
    double delta_c_ueV = 98.0;
    double v_g0_V = 0.0;
    double scale = 1.0;
};

/// Fits scale·ΔΦ(C_Q(ε(V_G))) to a measured adiabatic phase peak (degrees).
inline FitResult fit_lineshape(std::span<const double> v_g, std::span<const double> phase_deg,
                               const LineshapeInit& init, double alpha, const ResonatorParams& res = {},
                               const LevenbergMarquardtOptions& lm = {}) {
    detail::require(v_g.size() == phase_deg.size(), "gate and phase arrays differ in length");
    detail::require(v_g.size() >= 10, "lineshape fit needs at least 10 points");
    for (std::size_t i = 0; i < v_g.size(); ++i) {
        detail::require_finite(v_g[i], "gate voltages must be finite");
        detail::require_finite(phase_deg[i], "phase values must be finite");
    }
    const auto [lo, hi] = std::minmax_element(phase_deg.begin(), phase_deg.end());
    detail::require(*hi > *lo, "degenerate lineshape data (flat)");
    detail::require(init.delta_c_ueV > 0.0, "initial delta_c must be > 0");
    detail::require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
    res.validate();

    const std::size_t m = v_g.size();
    auto residuals = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
        QubitParams q;
        q.delta_c_ueV = std::max(std::abs(p[0]), 1e-9);
        q.v_g0_V = p[1];
        q.alpha = alpha;
        for (std::size_t i = 0; i < m; ++i) {
            const double cq = quantum_capacitance(detuning_from_gate(v_g[i], q), q, 1.0);
            r[static_cast<Eigen::Index>(i)] = phase_deg[i] - p[2] * phase_shift(cq, res).degrees;
        }
    };

    LevenbergMarquardtOptions opts = lm;
    if (opts.scale.empty()) {
        const double span = std::abs(v_g.back() - v_g.front());
        opts.scale = {1.0, std::max(span, 1e-6), 1.0};
    }
    if (opts.residual_floor == 0.0) {
        double norm2 = 0.0;
        for (double p : phase_deg) norm2 += p * p;
        opts.residual_floor = 1e-6 * std::sqrt(norm2);
    }
    Eigen::VectorXd p0(3);
    p0 << init.delta_c_ueV, init.v_g0_V, init.scale;
    const auto out = levenberg_marquardt(residuals, p0, m, opts);

    FitResult fit;
    auto sigma = [&](int k) { return std::sqrt(std::max(out.covariance(k, k), 0.0)); };
    fit.params = {
        {"delta_c", "ueV", std::abs(out.params[0]), sigma(0)},
        {"v_g0", "V", out.params[1], sigma(1)},
        {"scale", "", out.params[2], sigma(2)},
    };
    fit.residual_norm = std::sqrt(2.0 * out.cost / static_cast<double>(m));
    fit.iterations = out.iterations;
    fit.converged = out.converged && std::isfinite(fit.residual_norm);
    if (!fit.converged)
        fit.warnings.push_back("did not converge after " + std::to_string(out.iterations) +
                               " iterations; best-so-far parameters reported");
    return fit;
}

/// Fits T₁ at fixed T₂ by grid search over t1_grid followed by golden-section
/// refinement (in log T₁) between the neighbours of the best grid point.
inline FitResult fit_t1(const PhaseMap& map, const QubitParams& qubit, const DriveParams& drive,
                        const ResonatorParams& res, double t2_ps, std::vector<double> t1_grid) {
    map.validate();
    detail::require(t2_ps > 0.0, "t2 must be > 0");
    detail::require(t1_grid.size() >= 3, "t1 grid needs at least 3 points");
    std::sort(t1_grid.begin(), t1_grid.end());
    detail::require(t1_grid.front() > 0.0, "t1 grid values must be > 0");

    auto model = [&](double t1) {
        return simulate_closed_form(qubit, drive, DecoherenceParams{t1, t2_ps}, res, map.eps_axis, map.amp_axis);
    };
    auto rms = [&](double t1) {
        const auto sim = model(t1);
        double acc = 0.0;
        for (std::size_t i = 0; i < sim.values.size(); ++i) {
            const double d = map.values[i] - sim.values[i];
            acc += d * d;
        }
        return std::sqrt(acc / static_cast<double>(sim.values.size()));
    };

    FitResult fit;
    fit.misfit_curve.reserve(t1_grid.size());
    for (double t1 : t1_grid) fit.misfit_curve.push_back({t1, rms(t1)});
    const auto best_it = std::min_element(fit.misfit_curve.begin(), fit.misfit_curve.end(),
                                          [](const MisfitSample& a, const MisfitSample& b) { return a.rms < b.rms; });
    const auto best = static_cast<std::size_t>(best_it - fit.misfit_curve.begin());
    fit.iterations = static_cast<int>(t1_grid.size());

    double t1_best = t1_grid[best];
    double rms_best = best_it->rms;
    if (best == 0 || best + 1 == t1_grid.size()) {
        fit.warnings.push_back("best T1 lies on the grid boundary; extend grid");
    } else {
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = std::log(t1_grid[best - 1]);
        double b = std::log(t1_grid[best + 1]);
        double c = b - invphi * (b - a);
        double d = a + invphi * (b - a);
        double fc = rms(std::exp(c));
        double fd = rms(std::exp(d));
        while (b - a > 1e-5) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - invphi * (b - a);
                fc = rms(std::exp(c));
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + invphi * (b - a);
                fd = rms(std::exp(d));
            }
            ++fit.iterations;
        }
        const double t1_golden = std::exp(0.5 * (a + b));
        const double rms_golden = rms(t1_golden);
        if (rms_golden <= rms_best) {
            t1_best = t1_golden;
            rms_best = rms_golden;
        }
    }

    // Linearized 1σ from the residual sensitivity at the optimum.
    const double h = 1e-6 * t1_best;
    const auto up = model(t1_best + h);
    const auto down = model(t1_best - h);
    const auto at = model(t1_best);
    double jtj = 0.0, ssr = 0.0;
    for (std::size_t i = 0; i < at.values.size(); ++i) {
        const double j = (up.values[i] - down.values[i]) / (2.0 * h);
        jtj += j * j;
        const double r = map.values[i] - at.values[i];
        ssr += r * r;
    }
    const double dof = static_cast<double>(at.values.size()) - 1.0;
    const double sigma = jtj > 0.0 ? std::sqrt(ssr / dof / jtj) : std::numeric_limits<double>::infinity();

    fit.params = {{"t1", "ps", t1_best, sigma}, {"t2", "ps", t2_ps, 0.0}};
    fit.residual_norm = rms_best;
    fit.converged = std::isfinite(rms_best);
    return fit;
}

struct AlphaCalibration {
    double alpha = 0.0;
    double spread = 0.0;  ///< standard deviation of the per-spacing estimates
    std::size_t count = 0;
};

/// α = h·f / (e·ΔV_G) from gate-voltage spacings between adjacent photon lines.
inline AlphaCalibration calibrate_alpha(std::span<const double> spacings_V, double f_mw_GHz) {
    detail::require(!spacings_V.empty(), "need at least one resonance spacing");
    detail::require(f_mw_GHz > 0.0, "f_mw must be > 0");
    const double hf = photon_energy(f_mw_GHz);
    std::vector<double> alphas;
    alphas.reserve(spacings_V.size());
    for (double dv : spacings_V) {
        detail::require(std::isfinite(dv) && dv > 0.0, "resonance spacings must be > 0");
        alphas.push_back(hf / (1e6 * dv));
    }
    AlphaCalibration cal;
    cal.count = alphas.size();
    cal.alpha = std::accumulate(alphas.begin(), alphas.end(), 0.0) / static_cast<double>(cal.count);
    double var = 0.0;
    for (double a : alphas) var += (a - cal.alpha) * (a - cal.alpha);
    cal.spread = std::sqrt(var / static_cast<double>(cal.count));
    return cal;
}

}  // namespace lzsm
