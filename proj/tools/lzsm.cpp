// lzsm: simulate, transform, fit, validate and render LZSM interferograms.
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 malformed data or
// violated precondition, 3 fit non-convergence or no decay.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lzsm/config.hpp"
#include "lzsm/grid_io.hpp"
#include "lzsm/lzsm.hpp"

namespace {

using json = nlohmann::json;
using namespace lzsm;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write '" + path + "'");
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read '" + path + "'");
    return is;
}

void write_json(const std::string& path, const json& j) {
    auto os = open_out(path);
    os << j.dump(2) << '\n';
    if (!os) throw IoError("failed writing '" + path + "'");
}

RunConfig config_from(const std::string& path, std::optional<std::uint64_t> seed) {
    RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
    if (seed) cfg.seed = *seed;
    cfg.validate();
    return cfg;
}

json fit_to_json(const FitResult& fit) {
    json params = json::object();
    for (const auto& p : fit.params) params[p.name] = {{"value", p.value}, {"uncertainty", p.uncertainty}, {"unit", p.unit}};
    json j = {
        {"params", params},
        {"residual_norm", fit.residual_norm},
        {"iterations", fit.iterations},
        {"converged", fit.converged},
        {"warnings", fit.warnings},
    };
    if (!fit.misfit_curve.empty()) {
        json curve = json::array();
        for (const auto& s : fit.misfit_curve) curve.push_back({{"t1_ps", s.t1_ps}, {"rms_deg", s.rms}});
        j["misfit_curve"] = curve;
    }
    return j;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
    std::string config, out, kind = "map";
    std::optional<std::uint64_t> seed;
    double noise = 0.0;
};

void add_noise(std::vector<double>& values, double fraction, std::uint64_t seed) {
    if (fraction <= 0.0) return;
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, fraction * scale);
    for (double& v : values) v += gauss(rng);
}

int run_simulate(const SimulateArgs& a) {
    const RunConfig cfg = config_from(a.config, a.seed);
    detail::require(a.noise >= 0.0, "noise must be >= 0");
    json side = {{"generator", "lzsm simulate"}, {"kind", a.kind}, {"noise_fraction", a.noise},
                 {"config", to_json(cfg)}, {"config_hash", config_hash(cfg)}};

    if (a.kind == "lineshape") {
        GateTrace trace;
        for (double eps : cfg.grid.eps_axis()) trace.v_g_V.push_back(gate_from_detuning(eps, cfg.qubit));
        for (double cq : adiabatic_lineshape(trace.v_g_V, cfg.qubit))
            trace.phase_deg.push_back(phase_shift(cq, cfg.resonator).degrees);
        add_noise(trace.phase_deg, a.noise, cfg.seed);
        auto os = open_out(a.out);
        write_trace(os, trace);
    } else {
        PhaseMap map = cfg.model == ModelKind::ClosedForm
                           ? simulate_closed_form(cfg.qubit, cfg.drive, cfg.decoherence, cfg.resonator, cfg.grid)
                           : simulate_bloch(cfg.qubit, cfg.drive, cfg.decoherence, cfg.resonator, cfg.grid);
        add_noise(map.values, a.noise, cfg.seed);
        auto os = open_out(a.out);
        write_phase_map(os, map);
    }
    write_json(a.out + ".json", side);
    std::printf("wrote %s (%s, %s)\n", a.out.c_str(), a.kind.c_str(), to_string(cfg.model));
    return 0;
}

// --- fft --------------------------------------------------------------------

struct FftArgs {
    std::string input, out, report, method = "auto";
    double k_min = 0.0, k_max = 1e300, noise_floor = 0.01;
};

int run_fft(const FftArgs& a) {
    auto is = open_in(a.input);
    const PhaseMap map = read_phase_map(is);
    const DftMethod method = a.method == "direct" ? DftMethod::Direct
                             : a.method == "radix2" ? DftMethod::Radix2
                                                    : DftMethod::Auto;
    const Spectrum2D spec = dft2(map, method);
    {
        auto os = open_out(a.out);
        write_spectrum(os, spec);
    }
    const DecayTrace trace = extract_axis_trace(spec);
    const DecayFit fit = fit_exponential_decay(trace, {a.k_min, a.k_max}, a.noise_floor);
    const double k_hi = std::min(a.k_max, trace.k_eps.empty() ? 0.0 : trace.k_eps.back());
    json report = {
        {"t2_ps", fit.t2_ps},
        {"t2_uncertainty_ps", fit.t2_uncertainty_ps},
        {"fit_window", {{"k_min_ps", a.k_min}, {"k_max_ps", k_hi}}},
        {"noise_floor", a.noise_floor},
        {"r_squared", fit.r_squared},
        {"points_used", fit.points_used},
    };
    write_json(a.report.empty() ? a.out + ".json" : a.report, report);
    std::printf("T2 = %.6g +- %.3g ps (%zu points, r^2 = %.3f)\n", fit.t2_ps, fit.t2_uncertainty_ps, fit.points_used,
                fit.r_squared);
    return 0;
}

// --- fit --------------------------------------------------------------------

struct FitArgs {
    std::string input, config, out, mode;
    std::optional<std::uint64_t> seed;
};

int run_fit(const FitArgs& a) {
    const RunConfig cfg = config_from(a.config, a.seed);
    auto is = open_in(a.input);
    FitResult fit;
    if (a.mode == "lineshape") {
        const GateTrace trace = read_trace(is);
        fit = fit_lineshape(trace.v_g_V, trace.phase_deg, {cfg.fit.delta_c_ueV, cfg.fit.v_g0_V, cfg.fit.scale},
                            cfg.qubit.alpha, cfg.resonator);
    } else {
        const PhaseMap map = read_phase_map(is);
        fit = fit_t1(map, cfg.qubit, cfg.drive, cfg.resonator, cfg.decoherence.t2_ps, cfg.fit.t1_grid_ps);
    }
    json report = fit_to_json(fit);
    report["mode"] = a.mode;
    report["config_hash"] = config_hash(cfg);
    write_json(a.out, report);
    for (const auto& p : fit.params) std::printf("%s = %.6g +- %.3g %s\n", p.name.c_str(), p.value, p.uncertainty, p.unit.c_str());
    for (const auto& w : fit.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    if (!fit.converged) throw NotConverged("fit did not converge");
    return 0;
}

// --- compare-oracle ---------------------------------------------------------

struct CompareArgs {
    std::string config, out;
    std::optional<std::uint64_t> seed;
    std::optional<int> photon_cutoff;
    int max_photons = 3;
    std::size_t n_amp = 9;
};

int run_compare(const CompareArgs& a) {
    const RunConfig cfg = config_from(a.config, a.seed);
    detail::require(a.max_photons >= 1 && a.max_photons <= 64, "max-photons must lie in [1, 64]");
    ComparisonOptions opts;
    opts.photons.clear();
    for (int n = 1; n <= a.max_photons; ++n) opts.photons.push_back(n);
    opts.n_amp = a.n_amp;
    if (a.photon_cutoff) opts.closed_form.n_max = *a.photon_cutoff;

    const auto report = compare_with_oracle(cfg.qubit, cfg.drive, cfg.decoherence, opts);
    json table = json::array();
    for (const auto& p : report.points)
        table.push_back({{"n", p.photons},
                         {"amp_over_hf", p.amp_ratio},
                         {"eps_closed_ueV", p.eps_closed_ueV},
                         {"p_closed", p.p_closed},
                         {"eps_oracle_ueV", p.eps_oracle_ueV},
                         {"p_oracle", p.p_oracle},
                         {"rel_deviation", p.rel_deviation}});
    json j = {
        {"points", table},
        {"max_deviation", report.max_deviation},
        {"median_deviation", report.median_deviation},
        {"tolerance", report.tolerance},
        {"passed", report.passed},
        {"measurement", "diabatic"},
        {"photon_cutoff", a.photon_cutoff ? json(*a.photon_cutoff) : json("auto")},
        {"config_hash", config_hash(cfg)},
    };
    if (!a.out.empty()) write_json(a.out, j);
    std::printf("%zu resonance points: median deviation %.3f, max %.3f -> %s\n", report.points.size(),
                report.median_deviation, report.max_deviation, report.passed ? "PASS" : "FAIL");
    return 0;
}

// --- render -----------------------------------------------------------------

struct RenderArgs {
    std::string input, out;
};

int run_render(const RenderArgs& a) {
    auto is = open_in(a.input);
    const GridFile grid = read_grid(is);
    GrayMapping m;
    {
        auto os = open_out(a.out);
        m = write_pgm(os, grid);
    }
    write_json(a.out + ".json", {{"source", a.input},
                                 {"width", grid.x_axis.size()},
                                 {"height", grid.y_axis.size()},
                                 {"x_axis", grid.x_label},
                                 {"y_axis", grid.y_label},
                                 {"min", m.min},
                                 {"max", m.max},
                                 {"mapping", m.degenerate ? "uniform 128 (min == max)" : "linear min->0 max->255"},
                                 {"row_order", "top row is the last y value"}});
    std::printf("wrote %s (%zux%zu)\n", a.out.c_str(), grid.x_axis.size(), grid.y_axis.size());
    return 0;
}

// --- classify ---------------------------------------------------------------

struct ClassifyArgs {
    std::string config, out;
    std::optional<std::uint64_t> seed;
    std::optional<double> f_mw, t2;
};

int run_classify(const ClassifyArgs& a) {
    const RunConfig cfg = config_from(a.config, a.seed);
    const double f = a.f_mw.value_or(cfg.drive.f_mw_GHz);
    const double t2 = a.t2.value_or(cfg.decoherence.t2_ps);
    const auto regime = classify_regime(f, t2);
    const json j = {{"f_mw_GHz", f}, {"t2_ps", t2}, {"f_t2", f * t2 * 1e-3}, {"regime", std::string(to_string(regime))}};
    if (!a.out.empty()) write_json(a.out, j);
    std::printf("%s\n", j.dump().c_str());
    return 0;
}

template <class Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 1;
    } catch (const FormatError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return 2;
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "precondition error: %s\n", e.what());
        return 2;
    } catch (const NoDecayError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const NotConverged& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LZSM interferometry of a driven double-dot charge qubit"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Forward-simulate a phase map or an adiabatic lineshape");
    s->add_option("--config", sim.config, "JSON run configuration");
    s->add_option("--out", sim.out, "Output CSV (sidecar written to <out>.json)")->required();
    s->add_option("--seed", sim.seed, "Seed for the noise generator");
    s->add_option("--kind", sim.kind, "map or lineshape")->check(CLI::IsMember({"map", "lineshape"}));
    s->add_option("--noise", sim.noise, "Gaussian noise, fraction of the peak |phase|");

    FftArgs fft;
    auto* f = app.add_subcommand("fft", "2D Fourier transform of a phase map and T2 from its decay");
    f->add_option("input", fft.input, "Phase-map CSV")->required();
    f->add_option("--out", fft.out, "Spectrum CSV")->required();
    f->add_option("--report", fft.report, "Decay-fit JSON (default <out>.json)");
    f->add_option("--k-min-ps", fft.k_min, "Lower edge of the fit window");
    f->add_option("--k-max-ps", fft.k_max, "Upper edge of the fit window");
    f->add_option("--noise-floor", fft.noise_floor, "Drop bins below this fraction of the peak");
    f->add_option("--method", fft.method, "auto, direct or radix2")->check(CLI::IsMember({"auto", "direct", "radix2"}));

    FitArgs fit;
    auto* ft = app.add_subcommand("fit", "Fit a lineshape (delta_c, V_G0) or a map (T1 at fixed T2)");
    ft->add_option("input", fit.input, "Trace CSV (lineshape) or phase-map CSV (t1)")->required();
    ft->add_option("--mode", fit.mode, "lineshape or t1")->required()->check(CLI::IsMember({"lineshape", "t1"}));
    ft->add_option("--config", fit.config, "JSON run configuration");
    ft->add_option("--out", fit.out, "Fit report JSON")->required();
    ft->add_option("--seed", fit.seed, "Recorded in the config hash");

    CompareArgs cmp;
    auto* c = app.add_subcommand("compare-oracle", "Closed form vs. time-domain Bloch oracle on resonance");
    c->add_option("--config", cmp.config, "JSON run configuration");
    c->add_option("--out", cmp.out, "Comparison report JSON");
    c->add_option("--seed", cmp.seed, "Recorded in the config hash");
    c->add_option("--photon-cutoff", cmp.photon_cutoff, "Truncate the photon sum (negative control)");
    c->add_option("--max-photons", cmp.max_photons, "Resonances n = 1..N to test");
    c->add_option("--n-amp", cmp.n_amp, "Amplitudes A/hf in [1, 3] (<= 32)");

    RenderArgs ren;
    auto* r = app.add_subcommand("render", "Render a grid CSV to an 8-bit PGM");
    r->add_option("input", ren.input, "Grid CSV")->required();
    r->add_option("--out", ren.out, "Output PGM (sidecar written to <out>.json)")->required();

    ClassifyArgs cls;
    auto* k = app.add_subcommand("classify", "Label the drive regime from f_mw and T2");
    k->add_option("--config", cls.config, "JSON run configuration");
    k->add_option("--out", cls.out, "Classification JSON");
    k->add_option("--seed", cls.seed, "Recorded in the config hash");
    k->add_option("--f-mw-GHz", cls.f_mw, "Override the drive frequency");
    k->add_option("--t2-ps", cls.t2, "Override T2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*s) return guarded([&] { return run_simulate(sim); });
    if (*f) return guarded([&] { return run_fft(fft); });
    if (*ft) return guarded([&] { return run_fit(fit); });
    if (*c) return guarded([&] { return run_compare(cmp); });
    if (*r) return guarded([&] { return run_render(ren); });
    return guarded([&] { return run_classify(cls); });
}
