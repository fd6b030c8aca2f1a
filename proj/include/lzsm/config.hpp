#pragma once

// JSON run configuration. Every physical key carries its unit as a suffix
// and unknown keys are rejected.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "lzsm/error.hpp"
#include "lzsm/interferogram.hpp"
#include "lzsm/params.hpp"

namespace lzsm {

enum class ModelKind { ClosedForm, BlochOracle };

inline const char* to_string(ModelKind m) { return m == ModelKind::ClosedForm ? "closed_form" : "bloch_oracle"; }

/// Starting point and search grid for the fit subcommand.
struct FitSettings {
    double delta_c_ueV = 98.0;
    double v_g0_V = 0.0;
    double scale = 1.0;
    std::vector<double> t1_grid_ps{10, 20, 30, 50, 70, 100, 150, 200, 300, 500, 700, 1000};
};

struct RunConfig {
    QubitParams qubit;
    DriveParams drive;
    DecoherenceParams decoherence;
    ResonatorParams resonator;
    GridSpec grid;
    ModelKind model = ModelKind::ClosedForm;
    std::uint64_t seed = 0;
    FitSettings fit;

    void validate() const {
        try {
            qubit.validate();
            drive.validate();
            decoherence.validate();
            resonator.validate();
            grid.validate();
            detail::require(!fit.t1_grid_ps.empty(), "fit.t1_grid_ps must not be empty");
            for (double t : fit.t1_grid_ps) detail::require(t > 0.0, "fit.t1_grid_ps values must be > 0");
        } catch (const PreconditionError& e) {
            throw ConfigError(e.what());
        }
    }
};

namespace detail {

using json = nlohmann::json;

class Section {
public:
    Section(const json& j, std::string path, std::initializer_list<const char*> allowed) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
        for (const auto& [key, value] : j_.items()) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || key == a;
            if (!ok) throw ConfigError("unknown key '" + prefix() + key + "'");
        }
    }

    void number(const char* key, double& out) const {
        if (!j_.contains(key)) return;
        const auto& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(prefix() + key + ": expected a number");
        out = v.get<double>();
    }

    void count(const char* key, std::size_t& out) const {
        if (!j_.contains(key)) return;
        const auto& v = j_.at(key);
        if (!v.is_number_unsigned()) throw ConfigError(prefix() + key + ": expected a non-negative integer");
        out = v.get<std::size_t>();
    }

    void numbers(const char* key, std::vector<double>& out) const {
        if (!j_.contains(key)) return;
        const auto& v = j_.at(key);
        if (!v.is_array()) throw ConfigError(prefix() + key + ": expected an array of numbers");
        out.clear();
        for (const auto& x : v) {
            if (!x.is_number()) throw ConfigError(prefix() + key + ": expected an array of numbers");
            out.push_back(x.get<double>());
        }
    }

    const json* child(const char* key) const { return j_.contains(key) ? &j_.at(key) : nullptr; }

private:
    std::string prefix() const { return path_.empty() ? "" : path_ + "."; }

    const json& j_;
    std::string path_;
};

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
    using detail::Section;
    RunConfig cfg;
    const Section root(j, "", {"qubit", "drive", "decoherence", "resonator", "grid", "model", "seed", "fit"});

    if (const auto* s = root.child("qubit")) {
        const Section q(*s, "qubit", {"delta_c_ueV", "alpha", "c_geom_aF", "v_g0_V"});
        q.number("delta_c_ueV", cfg.qubit.delta_c_ueV);
        q.number("alpha", cfg.qubit.alpha);
        q.number("c_geom_aF", cfg.qubit.c_geom_aF);
        q.number("v_g0_V", cfg.qubit.v_g0_V);
    }
    if (const auto* s = root.child("drive")) {
        const Section d(*s, "drive", {"f_mw_GHz", "a_mw_ueV", "kappa_meV_per_V"});
        d.number("f_mw_GHz", cfg.drive.f_mw_GHz);
        d.number("a_mw_ueV", cfg.drive.a_mw_ueV);
        d.number("kappa_meV_per_V", cfg.drive.kappa_meV_per_V);
    }
    if (const auto* s = root.child("decoherence")) {
        const Section d(*s, "decoherence", {"t1_ps", "t2_ps"});
        d.number("t1_ps", cfg.decoherence.t1_ps);
        d.number("t2_ps", cfg.decoherence.t2_ps);
    }
    if (const auto* s = root.child("resonator")) {
        const Section r(*s, "resonator", {"l_nH", "c_p_fF", "q", "f_rf_MHz"});
        r.number("l_nH", cfg.resonator.l_nH);
        r.number("c_p_fF", cfg.resonator.c_p_fF);
        r.number("q", cfg.resonator.q);
        r.number("f_rf_MHz", cfg.resonator.f_rf_MHz);
    }
    if (const auto* s = root.child("grid")) {
        const Section g(*s, "grid", {"eps_min_ueV", "eps_max_ueV", "n_eps", "amp_min_ueV", "amp_max_ueV", "n_amp"});
        g.number("eps_min_ueV", cfg.grid.eps_min_ueV);
        g.number("eps_max_ueV", cfg.grid.eps_max_ueV);
        g.count("n_eps", cfg.grid.n_eps);
        g.number("amp_min_ueV", cfg.grid.amp_min_ueV);
        g.number("amp_max_ueV", cfg.grid.amp_max_ueV);
        g.count("n_amp", cfg.grid.n_amp);
    }
    if (const auto* s = root.child("fit")) {
        const Section f(*s, "fit", {"delta_c_ueV", "v_g0_V", "scale", "t1_grid_ps"});
        f.number("delta_c_ueV", cfg.fit.delta_c_ueV);
        f.number("v_g0_V", cfg.fit.v_g0_V);
        f.number("scale", cfg.fit.scale);
        f.numbers("t1_grid_ps", cfg.fit.t1_grid_ps);
    }
    if (const auto* m = root.child("model")) {
        if (!m->is_string()) throw ConfigError("model: expected \"closed_form\" or \"bloch_oracle\"");
        const auto name = m->get<std::string>();
        if (name == "closed_form")
            cfg.model = ModelKind::ClosedForm;
        else if (name == "bloch_oracle")
            cfg.model = ModelKind::BlochOracle;
        else
            throw ConfigError("model: unknown model '" + name + "'");
    }
    if (const auto* s = root.child("seed")) {
        if (!s->is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
        cfg.seed = s->get<std::uint64_t>();
    }
    cfg.validate();
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

inline nlohmann::json to_json(const RunConfig& cfg) {
    return {
        {"qubit",
         {{"delta_c_ueV", cfg.qubit.delta_c_ueV},
          {"alpha", cfg.qubit.alpha},
          {"c_geom_aF", cfg.qubit.c_geom_aF},
          {"v_g0_V", cfg.qubit.v_g0_V}}},
        {"drive",
         {{"f_mw_GHz", cfg.drive.f_mw_GHz},
          {"a_mw_ueV", cfg.drive.a_mw_ueV},
          {"kappa_meV_per_V", cfg.drive.kappa_meV_per_V}}},
        {"decoherence", {{"t1_ps", cfg.decoherence.t1_ps}, {"t2_ps", cfg.decoherence.t2_ps}}},
        {"resonator",
         {{"l_nH", cfg.resonator.l_nH},
          {"c_p_fF", cfg.resonator.c_p_fF},
          {"q", cfg.resonator.q},
          {"f_rf_MHz", cfg.resonator.f_rf_MHz}}},
        {"grid",
         {{"eps_min_ueV", cfg.grid.eps_min_ueV},
          {"eps_max_ueV", cfg.grid.eps_max_ueV},
          {"n_eps", cfg.grid.n_eps},
          {"amp_min_ueV", cfg.grid.amp_min_ueV},
          {"amp_max_ueV", cfg.grid.amp_max_ueV},
          {"n_amp", cfg.grid.n_amp}}},
        {"fit",
         {{"delta_c_ueV", cfg.fit.delta_c_ueV},
          {"v_g0_V", cfg.fit.v_g0_V},
          {"scale", cfg.fit.scale},
          {"t1_grid_ps", cfg.fit.t1_grid_ps}}},
        {"model", to_string(cfg.model)},
        {"seed", cfg.seed},
    };
}

/// 64-bit FNV-1a of the canonical (sorted-key) JSON text, as 16 hex digits.
inline std::string config_hash(const RunConfig& cfg) {
    const std::string text = to_json(cfg).dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace lzsm
