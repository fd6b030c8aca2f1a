#pragma once

// Fourier analysis of interferograms: 2D transform, the k_A = 0 trace and
// its exponential decay, and the drive-regime classifier.
//
// k_ε is the conjugate of ε/h, so it carries time units (ps) and a
// dephasing-limited pattern decays as exp(−k_ε/T₂).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "lzsm/error.hpp"
#include "lzsm/parallel.hpp"
#include "lzsm/phase_map.hpp"
#include "lzsm/units.hpp"

namespace lzsm {

/// Centered (zero frequency at index N/2) magnitude spectrum, row-major [k_amp][k_eps].
struct Spectrum2D {
    std::vector<double> k_eps_axis;  ///< ps
    std::vector<double> k_amp_axis;  ///< 1/µeV
    std::vector<double> magnitude;

    std::size_t n_eps() const noexcept { return k_eps_axis.size(); }
    std::size_t n_amp() const noexcept { return k_amp_axis.size(); }
    double at(std::size_t i_amp, std::size_t j_eps) const { return magnitude[i_amp * n_eps() + j_eps]; }
};

struct DecayTrace {
    std::vector<double> k_eps;  ///< ps, >= 0
    std::vector<double> magnitude;
};

struct DecayWindow {
    double k_min_ps = 0.0;
    double k_max_ps = 1e300;
};

struct DecayFit {
    double t2_ps = 0.0;
    double t2_uncertainty_ps = 0.0;
    DecayWindow fit_window;
    double r_squared = 0.0;
    std::size_t points_used = 0;
};

enum class DftMethod { Auto, Direct, Radix2 };

enum class DriveRegime { Coherent, Intermediate, Incoherent };

inline std::string_view to_string(DriveRegime r) {
    switch (r) {
        case DriveRegime::Coherent: return "coherent";
        case DriveRegime::Intermediate: return "intermediate";
        case DriveRegime::Incoherent: return "incoherent";
    }
    return "unknown";
}

namespace detail {

using cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

/// Unnormalized forward DFT e^{−2πi jk/N} of a strided sequence, in place.
class Dft1D {
public:
    Dft1D(std::size_t n, bool radix2) : n_(n), radix2_(radix2), twiddle_(n), scratch_(n) {
        for (std::size_t k = 0; k < n; ++k)
            twiddle_[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    }

    void operator()(cplx* data, std::size_t stride) {
        for (std::size_t i = 0; i < n_; ++i) scratch_[i] = data[i * stride];
        if (radix2_)
            fft_inplace();
        else
            direct();
        for (std::size_t i = 0; i < n_; ++i) data[i * stride] = scratch_[i];
    }

private:
    void direct() {
        std::vector<cplx> out(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            cplx acc{};
            std::size_t idx = 0;
            for (std::size_t j = 0; j < n_; ++j) {
                acc += scratch_[j] * twiddle_[idx];
                idx += k;
                if (idx >= n_) idx -= n_;
            }
            out[k] = acc;
        }
        scratch_.swap(out);
    }

    void fft_inplace() {
        auto& a = scratch_;
        for (std::size_t i = 1, j = 0; i < n_; ++i) {
            std::size_t bit = n_ >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t step = n_ / len;
            for (std::size_t i = 0; i < n_; i += len)
                for (std::size_t k = 0; k < len / 2; ++k) {
                    const cplx u = a[i + k];
                    const cplx v = a[i + k + len / 2] * twiddle_[k * step];
                    a[i + k] = u + v;
                    a[i + k + len / 2] = u - v;
                }
        }
    }

    std::size_t n_;
    bool radix2_;
    std::vector<cplx> twiddle_;
    std::vector<cplx> scratch_;
};

/// Signed frequency index of centered bin i.
inline double centered_index(std::size_t i, std::size_t n) {
    return static_cast<double>(i) - static_cast<double>(n / 2);
}

}  // namespace detail

/// Mean-subtracted, unnormalized 2D DFT magnitude of a phase map.
inline Spectrum2D dft2(const PhaseMap& map, DftMethod method = DftMethod::Auto) {
    map.validate();
    const std::size_t ne = map.n_eps();
    const std::size_t na = map.n_amp();
    detail::require(ne >= 32 && na >= 32, "dft2 needs a grid of at least 32x32");

    const bool pow2 = detail::is_power_of_two(ne) && detail::is_power_of_two(na);
    if (method == DftMethod::Radix2) detail::require(pow2, "radix-2 transform needs power-of-two axes");
    const bool radix2 = method == DftMethod::Radix2 || (method == DftMethod::Auto && pow2);

    double mean = 0.0;
    for (double v : map.values) mean += v;
    mean /= static_cast<double>(map.values.size());

    double spread = 0.0;
    for (double v : map.values) spread = std::max(spread, std::abs(v - mean));
    const bool flat = spread <= 1e-12 * std::max(1.0, std::abs(mean));

    std::vector<detail::cplx> data(map.values.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = flat ? 0.0 : map.values[i] - mean;

    detail::parallel_for(na, [&](std::size_t i) {
        detail::Dft1D(ne, radix2)(data.data() + i * ne, 1);
    });
    detail::parallel_for(ne, [&](std::size_t j) {
        detail::Dft1D(na, radix2)(data.data() + j, ne);
    });

    Spectrum2D spec;
    const double d_eps = axis_step(map.eps_axis);
    const double d_amp = axis_step(map.amp_axis);
    spec.k_eps_axis.resize(ne);
    spec.k_amp_axis.resize(na);
    for (std::size_t j = 0; j < ne; ++j)
        spec.k_eps_axis[j] = detail::centered_index(j, ne) / (static_cast<double>(ne) * d_eps) * constants.h_ueV_ps;
    for (std::size_t i = 0; i < na; ++i)
        spec.k_amp_axis[i] = detail::centered_index(i, na) / (static_cast<double>(na) * d_amp);

    spec.magnitude.resize(data.size());
    for (std::size_t i = 0; i < na; ++i) {
        const std::size_t si = (i + na - na / 2) % na;  // source row for centered row i
        for (std::size_t j = 0; j < ne; ++j) {
            const std::size_t sj = (j + ne - ne / 2) % ne;
            spec.magnitude[i * ne + j] = std::abs(data[si * ne + sj]);
        }
    }
    return spec;
}

/// Magnitude along k_A = 0 for k_ε >= 0.
inline DecayTrace extract_axis_trace(const Spectrum2D& spec) {
    const auto it = std::find(spec.k_amp_axis.begin(), spec.k_amp_axis.end(), 0.0);
    detail::require(it != spec.k_amp_axis.end(), "spectrum has no k_amp = 0 row");
    const auto row = static_cast<std::size_t>(it - spec.k_amp_axis.begin());
    DecayTrace trace;
    for (std::size_t j = 0; j < spec.n_eps(); ++j) {
        if (spec.k_eps_axis[j] < 0.0) continue;
        trace.k_eps.push_back(spec.k_eps_axis[j]);
        trace.magnitude.push_back(spec.at(row, j));
    }
    return trace;
}

/// Log-linear least squares of ln|trace| against k_ε inside the window.
/// Skips the k_ε = 0 bin and bins below noise_floor × max(trace).
inline DecayFit fit_exponential_decay(const DecayTrace& trace, DecayWindow window, double noise_floor = 0.01) {
    detail::require(trace.k_eps.size() == trace.magnitude.size(), "trace axes mismatch");
    detail::require(window.k_min_ps < window.k_max_ps, "window must satisfy k_min < k_max");

    const double peak = trace.magnitude.empty() ? 0.0 : *std::max_element(trace.magnitude.begin(), trace.magnitude.end());
    if (!(peak > 0.0)) throw NoDecayError();

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < trace.k_eps.size(); ++i) {
        const double k = trace.k_eps[i];
        const double m = trace.magnitude[i];
        if (k <= 0.0 || k < window.k_min_ps || k > window.k_max_ps) continue;
        if (!(m > 0.0) || m < noise_floor * peak) continue;
        xs.push_back(k);
        ys.push_back(std::log(m));
    }
    detail::require(xs.size() >= 8, "decay fit needs at least 8 usable points in the window");

    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    if (!(slope < 0.0)) throw NoDecayError();

    const double intercept = my - slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ssr += r * r;
    }
    const double slope_se = std::sqrt(ssr / (n - 2.0) / sxx);

    DecayFit fit;
    fit.t2_ps = -1.0 / slope;
    fit.t2_uncertainty_ps = slope_se / (slope * slope);
    fit.fit_window = window;
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    fit.points_used = xs.size();
    return fit;
}

/// Number of coherent passages per T₂, f·T₂, decides the regime.
inline DriveRegime classify_regime(double f_mw_GHz, double t2_ps) {
    detail::require(f_mw_GHz > 0.0 && t2_ps > 0.0, "frequency and T2 must be > 0");
    const double product = f_mw_GHz * t2_ps * 1e-3;
    if (product >= 3.0) return DriveRegime::Coherent;
    if (product <= 1.5) return DriveRegime::Incoherent;
    return DriveRegime::Intermediate;
}

}  // namespace lzsm
