// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//
//   lzsm_acceptance <path-to-lzsm-cli> [scratch-dir]

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lzsm/lzsm.hpp"

using namespace lzsm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double hf() { return photon_energy(34.0); }

// --- 1 ----------------------------------------------------------------------

Outcome lineshape_round_trip() {
    const auto t0 = std::chrono::steady_clock::now();
    QubitParams q;
    q.v_g0_V = 0.5;
    const ResonatorParams res;
    std::vector<double> v;
    for (double eps : linspace(-600.0, 600.0, 201)) v.push_back(gate_from_detuning(eps, q));
    std::vector<double> clean;
    double peak = 0.0;
    for (double c : adiabatic_lineshape(v, q)) {
        clean.push_back(phase_shift(c, res).degrees);
        peak = std::max(peak, std::abs(clean.back()));
    }

    // Every corner of a ±50% box around (Δc, scale) and ±half a linewidth in V_G0.
    const double gate_fwhm = adiabatic_fwhm_ueV(98.0) / (1e6 * q.alpha);
    double worst_rel = 0.0;
    bool all_converged = true;
    for (double dc : {49.0, 147.0})
        for (double sc : {0.5, 1.5})
            for (double dv : {-0.5, 0.5}) {
                const auto fit = fit_lineshape(v, clean, {dc, q.v_g0_V + dv * gate_fwhm, sc}, q.alpha, res);
                all_converged = all_converged && fit.converged;
                worst_rel = std::max(worst_rel, std::abs(fit.value("delta_c") / 98.0 - 1.0));
            }

    std::mt19937_64 rng(20170801);
    std::normal_distribution<double> g(0.0, 0.02 * peak);
    auto noisy = clean;
    for (double& p : noisy) p += g(rng);
    const auto fit = fit_lineshape(v, noisy, {70.0, q.v_g0_V, 0.8}, q.alpha, res);
    const double noisy_err = std::abs(fit.value("delta_c") - 98.0);
    const double t = seconds_since(t0);

    const bool ok = all_converged && fit.converged && worst_rel <= 1e-3 && noisy_err <= 2.0 && t < 5.0;
    return {ok, fmt("noiseless worst |dDc|/Dc = %.2e (<= 1e-3), 2%% noise Dc = %.2f +- %.2f ueV (|err| %.2f <= 2), %.2f s",
                    worst_rel, fit.value("delta_c"), fit.param("delta_c").uncertainty, noisy_err, t)};
}

// --- 2 ----------------------------------------------------------------------

std::size_t nearest(const std::vector<double>& axis, double x) {
    const auto it = std::min_element(axis.begin(), axis.end(),
                                     [x](double a, double b) { return std::abs(a - x) < std::abs(b - x); });
    return static_cast<std::size_t>(it - axis.begin());
}

// Linear-interpolated abscissae where the sampled trace changes sign.
std::vector<double> sign_changes(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> nodes;
    for (std::size_t i = 1; i < y.size(); ++i)
        if ((y[i - 1] < 0.0) != (y[i] < 0.0) && y[i - 1] != 0.0)
            nodes.push_back(x[i - 1] + (x[i] - x[i - 1]) * y[i - 1] / (y[i - 1] - y[i]));
    return nodes;
}

Outcome interferogram_structure() {
    const auto t0 = std::chrono::steady_clock::now();
    const GridSpec grid;
    const auto map = simulate_closed_form(QubitParams{}, DriveParams{}, DecoherenceParams{}, ResonatorParams{}, grid);
    const double t = seconds_since(t0);
    const double cell = axis_step(map.eps_axis);
    const double hf_ = hf();

    // Amplitude-averaged detuning profile.
    std::vector<double> profile(map.n_eps(), 0.0);
    for (std::size_t i = 0; i < map.n_amp(); ++i)
        for (std::size_t j = 0; j < map.n_eps(); ++j) profile[j] += map.at(i, j) / static_cast<double>(map.n_amp());

    auto extremum = [&](double lo, double hi, bool want_max) {
        std::size_t best = nearest(map.eps_axis, lo);
        for (std::size_t j = 0; j < map.n_eps(); ++j) {
            const double e = map.eps_axis[j];
            if (e < lo || e > hi) continue;
            if (want_max ? profile[j] > profile[best] : profile[j] < profile[best]) best = j;
        }
        return best;
    };

    // n = 0: the saturated zero-photon line bleaches Z, leaving a local maximum
    // of the signed phase at the center. n >= 1: each photon line is a
    // dispersive pair (maximum below, minimum above) centered on its midpoint.
    std::string where;
    double worst_offset = 0.0;
    {
        const std::size_t j0 = extremum(-0.5 * hf_, 0.5 * hf_, true);
        worst_offset = std::abs(map.eps_axis[j0]);
        where += fmt("n0@%.1f", map.eps_axis[j0]);
    }
    std::vector<double> lobe_eps;
    for (int n = 1; n <= 3; ++n) {
        const double c = n * hf_;
        const std::size_t jmax = extremum(c - 0.5 * hf_, c + 0.5 * hf_, true);
        const std::size_t jmin = extremum(c - 0.5 * hf_, c + 0.5 * hf_, false);
        const double mid = 0.5 * (map.eps_axis[jmax] + map.eps_axis[jmin]);
        worst_offset = std::max(worst_offset, std::abs(mid - c));
        where += fmt(" n%d@%.1f", n, mid);
        lobe_eps.push_back(map.eps_axis[jmax]);
    }

    // J₀ node: first local minimum of Φ(ε = 0, A), parabolic refinement.
    const std::size_t jc = nearest(map.eps_axis, 0.0);
    std::vector<double> x_axis, center;
    for (std::size_t i = 0; i < map.n_amp(); ++i) {
        x_axis.push_back(map.amp_axis[i] / hf_);
        center.push_back(map.at(i, jc));
    }
    double x_node = NAN;
    for (std::size_t i = 2; i + 1 < center.size(); ++i)
        if (center[i] < center[i - 1] && center[i] <= center[i + 1]) {
            const double a = center[i - 1], b = center[i], c = center[i + 1];
            const double shift = 0.5 * (a - c) / (a - 2.0 * b + c);
            x_node = x_axis[i] + shift * (x_axis[i + 1] - x_axis[i]);
            break;
        }
    const double j0_err = std::abs(x_node / 2.404825557695773 - 1.0);

    // Sign alternation along A on the positive lobe of each photon line.
    const double first_zero[] = {3.831705970207512, 5.135622301840683, 6.380161895923984};
    bool alternation = true;
    std::string nodes_txt;
    for (int n = 1; n <= 3; ++n) {
        const std::size_t j = nearest(map.eps_axis, lobe_eps[static_cast<std::size_t>(n - 1)]);
        std::vector<double> trace;
        for (std::size_t i = 0; i < map.n_amp(); ++i) trace.push_back(map.at(i, j));
        const auto nodes = sign_changes(x_axis, trace);
        double best = INFINITY;
        for (double z : nodes) best = std::min(best, std::abs(z / first_zero[n - 1] - 1.0));
        alternation = alternation && nodes.size() >= 2 && best <= 0.02;
        nodes_txt += fmt(" J%d:%zu changes, node err %.1f%%", n, nodes.size(), 100.0 * best);
    }

    const bool ok = worst_offset <= cell && j0_err <= 0.02 && alternation && t < 30.0;
    return {ok, fmt("extrema %s (max offset %.2f <= cell %.2f ueV); J0 node A/hf = %.3f (%.2f%%);%s; %.2f s",
                    where.c_str(), worst_offset, cell, x_node, 100.0 * j0_err, nodes_txt.c_str(), t)};
}

// --- 3 ----------------------------------------------------------------------

Outcome capacitance_identity() {
    QubitParams q;
    q.c_geom_aF = 5.0;
    // (eα)² in aF per µeV from SI values, independent of the library constants.
    const double e2 = q.alpha * q.alpha * 1.602176634e-19 / 1e-6 * 1e18;
    const double h = 1e-3;
    const auto eps = linspace(-1000.0, 1000.0, 2001);

    auto worst_for = [&](auto&& occupation) {
        double peak = 0.0;
        for (double e : eps) peak = std::max(peak, std::abs(differential_capacitance(e, q, occupation(e)).c_diff_aF));
        double worst = 0.0;
        std::size_t used = 0;
        for (double e : eps) {
            const auto c = occupation(e), lo = occupation(e - h), hi = occupation(e + h);
            if (c.clamped || lo.clamped || hi.clamped) continue;
            auto n = [&](double x, double z) { return 0.5 * (1.0 + x / std::hypot(x, q.delta_c_ueV) * z); };
            const double fd = q.c_geom_aF + e2 * (n(e + h, hi.z) - n(e - h, lo.z)) / (2.0 * h);
            const double split = differential_capacitance(e, q, c).c_diff_aF;
            worst = std::max(worst, std::abs(fd - split) / std::max(std::abs(split), 1e-6 * peak));
            ++used;
        }
        return std::pair{worst, used};
    };

    const auto [adiabatic, n_adiabatic] = worst_for([](double) { return adiabatic_occupation(); });
    DriveParams d;
    d.a_mw_ueV = 500.0;
    const SteadyStateModel m(q, d, DecoherenceParams{});
    const auto [driven, n_driven] = worst_for([&](double e) { return m.at(e); });
    const bool ok = adiabatic <= 1e-4 && driven <= 1e-4 && n_adiabatic == 2001 && n_driven > 1500;
    return {ok, fmt("max rel. error adiabatic %.2e (%zu pts), driven A=500 ueV %.2e (%zu unclamped pts), tol 1e-4",
                    adiabatic, n_adiabatic, driven, n_driven)};
}

// --- 4 ----------------------------------------------------------------------

Outcome oracle_agreement() {
    const auto t0 = std::chrono::steady_clock::now();
    const QubitParams q;
    const DriveParams d;
    const DecoherenceParams dec{100.0, 100.0};
    ComparisonOptions opts;
    const auto oracle = oracle_resonance_peaks(q, d, dec, opts);
    const auto report = rescore_closed_form(oracle, q, d, dec, opts);
    ComparisonOptions broken = opts;
    broken.closed_form.n_max = 0;
    const auto control = rescore_closed_form(oracle, q, d, dec, broken);
    const double t = seconds_since(t0);
    const bool ok = report.passed && !control.passed && t < 600.0;
    return {ok, fmt("%zu resonance centers (n=1..3, A/hf=1..3): max %.1f%%, median %.1f%% (<= 15%%); "
                    "N_max=0 control max %.0f%% -> %s; %.1f s",
                    report.points.size(), 100.0 * report.max_deviation, 100.0 * report.median_deviation,
                    100.0 * control.max_deviation, control.passed ? "passes (bad)" : "fails (good)", t)};
}

// --- 5 ----------------------------------------------------------------------

Outcome fourier_t2() {
    const auto t0 = std::chrono::steady_clock::now();
    const DecoherenceParams dec{100.0, 100.0};
    auto t2_from = [&](const GridSpec& g) {
        const auto map = simulate_closed_form(QubitParams{}, DriveParams{}, dec, ResonatorParams{}, g);
        return fit_exponential_decay(extract_axis_trace(dft2(map)), {});
    };
    const GridSpec base;
    GridSpec fine = base;
    fine.n_eps = 2 * base.n_eps - 1;
    const auto a = t2_from(base);
    const auto b = t2_from(fine);
    const double t = seconds_since(t0);
    const double err = std::abs(a.t2_ps / 100.0 - 1.0);
    const double stability = std::abs(b.t2_ps / a.t2_ps - 1.0);
    const bool ok = err <= 0.2 && stability <= 0.05 && t < 60.0;
    return {ok, fmt("T2 = %.1f +- %.1f ps (r2 %.2f) vs 100 ps: error %.1f%% (<= 20%%); 2x finer eps: %.1f ps, change %.1f%% "
                    "(<= 5%%); %.1f s",
                    a.t2_ps, a.t2_uncertainty_ps, a.r_squared, 100.0 * err, b.t2_ps, 100.0 * stability, t)};
}

// --- 6 ----------------------------------------------------------------------

Outcome t1_identifiability() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto map =
        simulate_closed_form(QubitParams{}, DriveParams{}, DecoherenceParams{100.0, 100.0}, ResonatorParams{}, GridSpec{});
    const auto fit = fit_t1(map, QubitParams{}, DriveParams{}, ResonatorParams{}, 100.0,
                            {10, 20, 30, 50, 70, 100, 150, 200, 300, 500, 700, 1000});
    double at10 = NAN, at100 = NAN, at1000 = NAN;
    for (const auto& s : fit.misfit_curve) {
        if (s.t1_ps == 10.0) at10 = s.rms;
        if (s.t1_ps == 100.0) at100 = s.rms;
        if (s.t1_ps == 1000.0) at1000 = s.rms;
    }
    const double err = std::abs(fit.value("t1") / 100.0 - 1.0);
    const bool ok = err <= 0.1 && at10 > at100 && at1000 > at100 && fit.warnings.empty();
    return {ok, fmt("T1 = %.2f ps (error %.2f%% <= 10%%); rms misfit 10/100/1000 ps = %.3g/%.3g/%.3g deg; %.1f s", fit.value("t1"),
                    100.0 * err, at10, at100, at1000, seconds_since(t0))};
}

// --- 7 ----------------------------------------------------------------------

Outcome regimes() {
    const auto a = classify_regime(34.0, 100.0);
    const auto b = classify_regime(26.0, 100.0);
    const auto c = classify_regime(14.0, 100.0);
    const bool ok = a == DriveRegime::Coherent && b == DriveRegime::Intermediate && c == DriveRegime::Incoherent;
    return {ok, fmt("34 GHz %s, 26 GHz %s, 14 GHz %s (T2 = 100 ps)", std::string(to_string(a)).c_str(),
                    std::string(to_string(b)).c_str(), std::string(to_string(c)).c_str())};
}

// --- 8 ----------------------------------------------------------------------

double bessel_series(int n, double xd) {
    using big = boost::multiprecision::cpp_bin_float_50;
    const big half = big(xd) / 2;
    big term = 1;
    for (int i = 1; i <= n; ++i) term *= half / i;
    big sum = term;
    const big q = -half * half;
    for (int k = 1; k < 400; ++k) {
        term *= q / (k * (k + n));
        sum += term;
        if (k > 10 && abs(term) < big("1e-40")) break;
    }
    return static_cast<double>(sum);
}

Outcome numerical_hygiene() {
    double bessel = 0.0;
    for (double x = -50.0; x <= 50.0; x += 0.61) {
        const auto seq = bessel_j_sequence(60, x);
        for (int n = 0; n <= 60; ++n) bessel = std::max(bessel, std::abs(seq[static_cast<std::size_t>(n)] - bessel_series(n, x)));
    }

    const auto map = simulate_closed_form(QubitParams{}, DriveParams{}, DecoherenceParams{}, ResonatorParams{}, GridSpec{});
    double mean = 0.0;
    for (double v : map.values) mean += v;
    mean /= static_cast<double>(map.values.size());
    double lhs = 0.0, rhs = 0.0;
    for (double v : map.values) lhs += (v - mean) * (v - mean);
    for (double m : dft2(map).magnitude) rhs += m * m;
    const double parseval = std::abs(rhs / static_cast<double>(map.values.size()) / lhs - 1.0);

    double rk4 = 0.0, max_norm = 0.0;
    IntegrationConfig coarse, fine;
    fine.steps_per_period = 2 * coarse.steps_per_period;
    for (double eps : {0.0, 140.61, 281.2, 500.0})
        for (double a : {140.61, 281.2, 421.8}) {
            DriveParams d;
            d.a_mw_ueV = a;
            const auto r1 = integrate(eps, QubitParams{}, d, DecoherenceParams{}, coarse);
            const auto r2 = integrate(eps, QubitParams{}, d, DecoherenceParams{}, fine);
            max_norm = std::max({max_norm, r1.max_norm, r2.max_norm});
            rk4 = std::max(rk4, std::abs(time_averaged_upper_occupation(eps, QubitParams{}, d, DecoherenceParams{}, coarse) -
                                         time_averaged_upper_occupation(eps, QubitParams{}, d, DecoherenceParams{}, fine)));
        }

    double dz = 0.0;
    const double h = 1e-3;
    for (double a : {0.0, 258.9, 600.0, 1000.0}) {
        DriveParams d;
        d.a_mw_ueV = a;
        const SteadyStateModel m(QubitParams{}, d, DecoherenceParams{});
        for (double e = -1000.0; e <= 1000.0; e += 1.7) {
            if (std::abs(e) <= 1.0) continue;
            const auto c = m.at(e), lo = m.at(e - h), hi = m.at(e + h);
            if (c.clamped || lo.clamped || hi.clamped) continue;
            const double fd = (hi.z - lo.z) / (2.0 * h);
            dz = std::max(dz, std::abs(c.dz_deps - fd) / std::max(std::abs(fd), 1e-8));
        }
    }

    const bool ok = bessel <= 1e-10 && parseval <= 1e-9 && rk4 <= 1e-6 && max_norm <= 1.0 + 1e-9 && dz <= 1e-6;
    return {ok, fmt("Bessel %.1e (<=1e-10), Parseval %.1e (<=1e-9), RK4 dt-halving %.1e (<=1e-6), max |r| - 1 = %.1e "
                    "(<=1e-9), dz/deps vs FD %.1e (<=1e-6)",
                    bessel, parseval, rk4, max_norm - 1.0, dz)};
}

// --- 9 ----------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli, const fs::path& scratch) {
    fs::create_directories(scratch);
    {
        std::ofstream cfg(scratch / "config.json");
        cfg << R"({"grid": {"n_eps": 96, "n_amp": 48}, "seed": 7})" << '\n';
    }
    const std::string config = (scratch / "config.json").string();

    // Each command writes into run directory d; outputs from both runs are compared byte for byte.
    const std::vector<std::string> commands = {
        "simulate --config " + config + " --out {d}/map.csv --noise 0.01",
        "simulate --config " + config + " --kind lineshape --noise 0.02 --out {d}/trace.csv",
        "fft {d}/map.csv --out {d}/spec.csv",
        "fit {d}/trace.csv --mode lineshape --config " + config + " --out {d}/fit_ls.json",
        "fit {d}/map.csv --mode t1 --config " + config + " --out {d}/fit_t1.json",
        "compare-oracle --config " + config + " --max-photons 1 --n-amp 2 --out {d}/oracle.json",
        "render {d}/map.csv --out {d}/map.pgm",
        "render {d}/spec.csv --out {d}/spec.pgm",
        "classify --config " + config + " --out {d}/classify.json",
    };

    for (const char* tag : {"run_a", "run_b"}) {
        const fs::path dir = scratch / tag;
        fs::remove_all(dir);
        fs::create_directories(dir);
        for (std::string cmd : commands) {
            for (std::size_t p; (p = cmd.find("{d}")) != std::string::npos;) cmd.replace(p, 3, dir.string());
            const std::string full = "\"" + cli + "\" " + cmd + " > \"" + (dir / "stdout.txt").string() + "\" 2>&1";
            if (std::system(full.c_str()) != 0) return {false, "command failed: " + cmd};
            std::ofstream log(dir / "all_stdout.txt", std::ios::app);
            log << slurp(dir / "stdout.txt");
        }
        fs::remove(dir / "stdout.txt");
    }

    std::size_t files = 0;
    std::vector<std::string> differing;
    for (const auto& entry : fs::directory_iterator(scratch / "run_a")) {
        const auto name = entry.path().filename();
        ++files;
        std::string a = slurp(entry.path());
        std::string b = slurp(scratch / "run_b" / name);
        // The only path-dependent content is the run directory itself.
        for (auto* s : {&a, &b})
            for (const char* tag : {"run_a", "run_b"})
                for (std::size_t p; (p = s->find(tag)) != std::string::npos;) s->replace(p, 5, "run_X");
        if (a != b) differing.push_back(name.string());
    }
    std::string diff;
    for (const auto& d : differing) diff += " " + d;
    return {differing.empty() && files >= 15,
            fmt("%zu commands x 2 runs, %zu output files compared, %zu differ%s", commands.size(), files, differing.size(),
                diff.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <lzsm-cli> [scratch-dir]\n", argv[0]);
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "lzsm_acceptance";

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"Lineshape round-trip", lineshape_round_trip},
        {"Interferogram structure", interferogram_structure},
        {"Capacitance identity", capacitance_identity},
        {"Oracle agreement", oracle_agreement},
        {"Fourier T2 extraction", fourier_t2},
        {"T1 identifiability", t1_identifiability},
        {"Regime classification", regimes},
        {"Numerical hygiene", numerical_hygiene},
        {"Determinism", [&] { return determinism(cli, scratch); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
