#include "pumpcat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "pumpcat/error.hpp"
#include "pumpcat/evolution.hpp"
#include "pumpcat/protocol.hpp"
#include "pumpcat/validation.hpp"

#ifndef PUMPCAT_VERSION
#define PUMPCAT_VERSION "0.0.0"
#endif

namespace pumpcat::cli {

namespace {

const std::map<std::string, Command> kCommands{
    {"wigner", Command::wigner}, {"entropy", Command::entropy},       {"probs", Command::probs},
    {"montecarlo", Command::montecarlo}, {"evolve", Command::evolve}, {"validate", Command::validate},
};

std::string command_name(Command c) {
    for (const auto& [name, cmd] : kCommands) {
        if (cmd == c) return name;
    }
    return "?";
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void check(bool ok, const std::string& what) {
    if (!ok) throw UsageError(what);
}

void validate_config(const RunConfig& c) {
    check(std::isfinite(c.alpha_sq) && c.alpha_sq >= 0.0, "--alpha-sq must be a finite number >= 0");
    check(std::isfinite(c.alpha_arg), "--alpha-arg must be finite");
    check(std::isfinite(c.pump.real()) && std::isfinite(c.pump.imag()), "--pump must be finite");
    check(std::isfinite(c.gamma) && c.gamma > 0.0, "--gamma must be > 0");
    check(std::isfinite(c.omega0), "--omega0 must be finite");
    check(!c.pump_freq || std::isfinite(*c.pump_freq), "--pump-freq must be finite");
    check(std::isfinite(c.nbar) && c.nbar >= 0.0, "--nbar must be >= 0");
    check(std::isfinite(c.time) && c.time >= 0.0, "--time must be >= 0");
    for (double t : c.times) check(std::isfinite(t) && t >= 0.0, "--times entries must be >= 0");
    check(!c.times.empty(), "--times needs at least one value");
    check(std::isfinite(c.tmax) && c.tmax > 0.0, "--tmax must be > 0");
    check(c.samples >= 2, "--samples must be >= 2");
    check(!c.pumps.empty(), "--pumps needs at least one value");
    for (double f : c.pumps) check(std::isfinite(f), "--pumps entries must be finite");
    check(c.atoms >= 1, "--atoms must be >= 1");
    check(std::isfinite(c.delay) && c.delay >= 0.0, "--delay must be >= 0");
    check(c.trajectories >= 1, "--trajectories must be >= 1");
    try {
        validate(c.grid);
    } catch (const Error& e) {
        throw UsageError(std::string("--grid: ") + e.what());
    }
}

std::string header_line(const RunConfig& c) {
    return std::string("# pumpcat ") + PUMPCAT_VERSION + " " + to_json(c).dump() + "\n";
}

// Writes to the named file, or to the fallback stream when no path is given.
class Sink {
public:
    Sink(const std::optional<std::string>& path, std::ostream& fallback) : stream_(&fallback) {
        if (path) {
            file_.open(*path, std::ios::binary | std::ios::trunc);
            if (!file_) throw std::runtime_error("cannot open '" + *path + "' for writing");
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }
    void close() {
        stream_->flush();
        if (file_.is_open()) {
            file_.close();
            if (!file_) throw std::runtime_error("write failed");
        }
    }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

Json versioned(const RunConfig& c) {
    Json j;
    j["version"] = PUMPCAT_VERSION;
    j["config"] = to_json(c);
    return j;
}

int run_wigner(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const DyadState state = evolve_state(make_cat(c.alpha(), c.parity), c.time, c.params());
    const WignerGrid grid = wigner_state(state, c.grid);
    if (window_too_small(grid)) {
        err << "warning: |W| on the grid boundary is " << boundary_max(grid) << " (> " << kWindowWarnThreshold
            << "); widen --grid\n";
    }
    Sink sink(c.out, out);
    auto& os = sink.get();
    os << header_line(c) << "re_zeta,im_zeta,w\n";
    for (std::size_t j = 0; j < c.grid.n_im; ++j) {
        for (std::size_t i = 0; i < c.grid.n_re; ++i) {
            const Complex z = c.grid.point(i, j);
            os << num(z.real()) << ',' << num(z.imag()) << ',' << num(grid.at(i, j)) << '\n';
        }
    }
    sink.close();
    return kExitOk;
}

int run_entropy(const RunConfig& c, std::ostream& out) {
    const CavityParams params = c.params();
    if (params.nbar > 0.0) throw Error(ErrorCode::ThermalNotSupported, "entropy curve assumes a zero-temperature reservoir");
    Sink sink(c.out, out);
    auto& os = sink.get();
    os << header_line(c) << "gamma_t,entropy\n";
    for (std::size_t k = 0; k < c.samples; ++k) {
        const double t = c.tmax * static_cast<double>(k) / static_cast<double>(c.samples - 1);
        os << num(params.gamma * t) << ',' << num(linear_entropy_closed_form(c.alpha(), c.parity, t, params)) << '\n';
    }
    sink.close();
    return kExitOk;
}

int run_probs(const RunConfig& c, std::ostream& out) {
    for (double f : c.pumps) {
        const CavityParams params = c.params_for_pump(f);
        if (params.nbar > 0.0) throw Error(ErrorCode::ThermalNotSupported, "probabilities assume a zero-temperature reservoir");
        RunConfig one = c;
        one.pumps = {f};
        one.pump = f;
        one.pump_lock = false;
        std::optional<std::string> path;
        if (c.out) path = suffixed_path(*c.out, f);
        Sink sink(path, out);
        auto& os = sink.get();
        os << header_line(one) << "gamma_T,p_g_e,p_e_e\n";
        for (std::size_t k = 0; k < c.samples; ++k) {
            const double t = c.tmax * static_cast<double>(k) / static_cast<double>(c.samples - 1);
            os << num(params.gamma * t) << ','
               << num(conditional_probability(CatParity::Odd, Outcome::g, t, c.alpha(), params)) << ','
               << num(conditional_probability(CatParity::Odd, Outcome::e, t, c.alpha(), params)) << '\n';
        }
        sink.close();
    }
    return kExitOk;
}

int run_montecarlo(const RunConfig& c, std::ostream& out) {
    ProtocolConfig p;
    p.alpha = c.alpha();
    p.params = c.params();
    p.delay = c.delay;
    p.n_atoms = c.atoms;
    p.feedback = c.feedback;
    p.seed = c.seed;
    p.n_trajectories = c.trajectories;
    p.keep_final_states = !c.omit_final_state;
    Json j = versioned(c);
    Json body = trajectories_to_json(run_sequence(p));
    j["final_states"] = std::move(body["final_states"]);
    j["trajectories"] = std::move(body["trajectories"]);
    Sink sink(c.out, out);
    sink.get() << j.dump() << '\n';
    sink.close();
    return kExitOk;
}

int run_evolve(const RunConfig& c, std::ostream& out) {
    const CavityParams params = c.params();
    const DyadState cat = make_cat(c.alpha(), c.parity);
    Json j = versioned(c);
    Json states = Json::array();
    for (double t : c.times) {
        states.push_back({{"time", t}, {"gamma_t", params.gamma * t}, {"state", state_to_json(evolve_state(cat, t, params))}});
    }
    j["states"] = std::move(states);
    Sink sink(c.out, out);
    sink.get() << j.dump(2) << '\n';
    sink.close();
    return kExitOk;
}

int run_validate(const RunConfig& c, std::ostream& out) {
    const auto results = run_validation_suite();
    Sink sink(c.out, out);
    sink.get() << format_report(results);
    sink.close();
    const bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
    return ok ? kExitOk : kExitValidation;
}

template <class T>
T json_get(const Json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw UsageError("config key '" + key + "' has the wrong type");
    }
}

CatParity parse_parity(const std::string& s) {
    if (s == "even") return CatParity::Even;
    if (s == "odd") return CatParity::Odd;
    throw UsageError("parity must be 'even' or 'odd', got '" + s + "'");
}

} // namespace

Amplitude RunConfig::alpha() const { return std::polar(std::sqrt(alpha_sq), alpha_arg); }

CavityParams RunConfig::params() const {
    CavityParams p = params_for_pump(pump);
    if (pump_lock) p.pump_amp = pumpcat::pump_lock(alpha(), p);
    return p;
}

CavityParams RunConfig::params_for_pump(Complex f) const {
    CavityParams p;
    p.omega0 = omega0;
    p.gamma = gamma;
    p.pump_amp = f;
    p.pump_freq = pump_freq.value_or(omega0);
    p.nbar = nbar;
    return p;
}

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    char x = 0;
    char tail = 0;
    unsigned long nr = 0;
    unsigned long ni = 0;
    const int n = std::sscanf(text.c_str(), "%lf:%lf:%lf:%lf:%lu%c%lu%c", &g.re_min, &g.re_max, &g.im_min, &g.im_max,
                              &nr, &x, &ni, &tail);
    if (n != 7 || x != 'x') throw UsageError("--grid expects re_min:re_max:im_min:im_max:NxM, got '" + text + "'");
    g.n_re = nr;
    g.n_im = ni;
    try {
        validate(g);
    } catch (const Error& e) {
        throw UsageError(std::string("--grid: ") + e.what());
    }
    return g;
}

std::string format_grid(const GridSpec& g) {
    return num(g.re_min) + ":" + num(g.re_max) + ":" + num(g.im_min) + ":" + num(g.im_max) + ":" +
           std::to_string(g.n_re) + "x" + std::to_string(g.n_im);
}

Json to_json(const RunConfig& c) {
    Json j;
    j["command"] = command_name(c.command);
    j["alpha_sq"] = c.alpha_sq;
    j["alpha_arg"] = c.alpha_arg;
    j["pump"] = c.pump.real();
    j["pump_im"] = c.pump.imag();
    j["pump_lock"] = c.pump_lock;
    j["gamma"] = c.gamma;
    j["omega0"] = c.omega0;
    j["pump_freq"] = c.pump_freq.value_or(c.omega0);
    j["nbar"] = c.nbar;
    j["parity"] = c.parity == CatParity::Even ? "even" : "odd";
    j["time"] = c.time;
    j["times"] = c.times;
    j["tmax"] = c.tmax;
    j["samples"] = c.samples;
    j["pumps"] = c.pumps;
    j["atoms"] = c.atoms;
    j["delay"] = c.delay;
    j["trajectories"] = c.trajectories;
    j["seed"] = c.seed;
    j["feedback"] = c.feedback;
    j["omit_final_state"] = c.omit_final_state;
    j["grid"] = format_grid(c.grid);
    return j;
}

void apply_json(const Json& j, RunConfig& c) {
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "command") {
            const auto name = json_get<std::string>(v, key);
            if (!kCommands.count(name)) throw UsageError("unknown command '" + name + "' in config");
            if (kCommands.at(name) != c.command) {
                throw UsageError("config is for '" + name + "', not '" + command_name(c.command) + "'");
            }
        } else if (key == "alpha_sq") {
            c.alpha_sq = json_get<double>(v, key);
        } else if (key == "alpha_arg") {
            c.alpha_arg = json_get<double>(v, key);
        } else if (key == "pump") {
            c.pump.real(json_get<double>(v, key));
        } else if (key == "pump_im") {
            c.pump.imag(json_get<double>(v, key));
        } else if (key == "pump_lock") {
            c.pump_lock = json_get<bool>(v, key);
        } else if (key == "gamma") {
            c.gamma = json_get<double>(v, key);
        } else if (key == "omega0") {
            c.omega0 = json_get<double>(v, key);
        } else if (key == "pump_freq") {
            c.pump_freq = json_get<double>(v, key);
        } else if (key == "nbar") {
            c.nbar = json_get<double>(v, key);
        } else if (key == "parity") {
            c.parity = parse_parity(json_get<std::string>(v, key));
        } else if (key == "time") {
            c.time = json_get<double>(v, key);
        } else if (key == "times") {
            c.times = json_get<std::vector<double>>(v, key);
        } else if (key == "tmax") {
            c.tmax = json_get<double>(v, key);
        } else if (key == "samples") {
            c.samples = json_get<std::size_t>(v, key);
        } else if (key == "pumps") {
            c.pumps = json_get<std::vector<double>>(v, key);
        } else if (key == "atoms") {
            c.atoms = json_get<std::size_t>(v, key);
        } else if (key == "delay") {
            c.delay = json_get<double>(v, key);
        } else if (key == "trajectories") {
            c.trajectories = json_get<std::size_t>(v, key);
        } else if (key == "seed") {
            c.seed = json_get<std::uint64_t>(v, key);
        } else if (key == "feedback") {
            c.feedback = json_get<bool>(v, key);
        } else if (key == "omit_final_state") {
            c.omit_final_state = json_get<bool>(v, key);
        } else if (key == "grid") {
            c.grid = parse_grid(json_get<std::string>(v, key));
        } else if (key == "out") {
            c.out = json_get<std::string>(v, key);
        } else {
            throw UsageError("unknown config key '" + key + "'");
        }
    }
    if (j.contains("pump_lock") && c.pump_lock && (j.contains("pump") || j.contains("pump_im"))) {
        throw UsageError("pump_lock and pump are mutually exclusive");
    }
}

RunConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"Pumped lossy cavity: cat states, Wigner functions, atom sequences", "pumpcat"};
    app.require_subcommand(1, 1);
    std::map<std::string, CLI::App*> subs;
    subs["wigner"] = app.add_subcommand("wigner", "Wigner function of the evolved cat on a grid (CSV)");
    subs["entropy"] = app.add_subcommand("entropy", "linear entropy of the evolved cat vs gamma t (CSV)");
    subs["probs"] = app.add_subcommand("probs", "second-atom probabilities after an e detection, one CSV per pump");
    subs["montecarlo"] = app.add_subcommand("montecarlo", "seeded atom-sequence trajectories (JSON)");
    subs["evolve"] = app.add_subcommand("evolve", "dyad state of the evolved cat at the given times (JSON)");
    subs["validate"] = app.add_subcommand("validate", "run the oracle suite and print a pass/fail table");
    for (auto& [name, sub] : subs) sub->fallthrough();

    RunConfig f;
    double pump_re = 1.0;
    double pump_im = 0.0;
    double pump_freq = 0.0;
    std::string parity = "even";
    std::string grid;
    std::string out;
    std::string config_path;

    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> given;
    auto opt = [&](CLI::Option* o, std::function<void(RunConfig&)> apply) {
        given.emplace_back(o, std::move(apply));
        return o;
    };

    app.add_option("--config", config_path, "JSON file with defaults; flags take precedence");
    opt(app.add_option("--alpha-sq", f.alpha_sq, "|alpha|^2 of the initial amplitude"),
        [&](RunConfig& c) { c.alpha_sq = f.alpha_sq; });
    opt(app.add_option("--alpha-arg", f.alpha_arg, "phase of alpha [rad]"),
        [&](RunConfig& c) { c.alpha_arg = f.alpha_arg; });
    auto* o_pump = opt(app.add_option("--pump", pump_re, "real part of the pump amplitude F"), [&](RunConfig& c) {
        c.pump.real(pump_re);
        c.pump_lock = false;
    });
    auto* o_pump_im = opt(app.add_option("--pump-im", pump_im, "imaginary part of F"), [&](RunConfig& c) {
        c.pump.imag(pump_im);
        c.pump_lock = false;
    });
    auto* o_lock = opt(app.add_flag("--pump-lock", f.pump_lock, "set F = i alpha gamma / 2 (stationary |alpha>)"),
                       [&](RunConfig& c) { c.pump_lock = f.pump_lock; });
    o_lock->excludes(o_pump)->excludes(o_pump_im);
    opt(app.add_option("--gamma", f.gamma, "damping rate"), [&](RunConfig& c) { c.gamma = f.gamma; });
    opt(app.add_option("--omega0", f.omega0, "cavity frequency"), [&](RunConfig& c) { c.omega0 = f.omega0; });
    opt(app.add_option("--pump-freq", pump_freq, "pump frequency (default: omega0)"),
        [&](RunConfig& c) { c.pump_freq = pump_freq; });
    opt(app.add_option("--nbar", f.nbar, "thermal occupation of the reservoir"), [&](RunConfig& c) { c.nbar = f.nbar; });
    opt(app.add_option("--parity", parity, "cat parity: even or odd")->check(CLI::IsMember({"even", "odd"})),
        [&](RunConfig& c) { c.parity = parse_parity(parity); });
    opt(app.add_option("--time", f.time, "evolution time (wigner)"), [&](RunConfig& c) { c.time = f.time; });
    opt(app.add_option("--times", f.times, "comma-separated times (evolve)")->delimiter(','),
        [&](RunConfig& c) { c.times = f.times; });
    opt(app.add_option("--tmax", f.tmax, "end of the time sweep (entropy, probs)"),
        [&](RunConfig& c) { c.tmax = f.tmax; });
    opt(app.add_option("--samples", f.samples, "points in the time sweep"), [&](RunConfig& c) { c.samples = f.samples; });
    opt(app.add_option("--pumps", f.pumps, "comma-separated pump amplitudes (probs)")->delimiter(','),
        [&](RunConfig& c) { c.pumps = f.pumps; });
    opt(app.add_option("--atoms", f.atoms, "atoms per trajectory"), [&](RunConfig& c) { c.atoms = f.atoms; });
    opt(app.add_option("--delay", f.delay, "time between atoms"), [&](RunConfig& c) { c.delay = f.delay; });
    opt(app.add_option("--trajectories", f.trajectories, "number of trajectories"),
        [&](RunConfig& c) { c.trajectories = f.trajectories; });
    opt(app.add_option("--seed", f.seed, "random seed"), [&](RunConfig& c) { c.seed = f.seed; });
    opt(app.add_flag("--feedback", f.feedback, "flip the cat parity back after a differing outcome"),
        [&](RunConfig& c) { c.feedback = f.feedback; });
    opt(app.add_flag("--omit-final-state", f.omit_final_state, "leave final field states out of the JSON"),
        [&](RunConfig& c) { c.omit_final_state = f.omit_final_state; });
    opt(app.add_option("--grid", grid, "re_min:re_max:im_min:im_max:NxM"),
        [&](RunConfig& c) { c.grid = parse_grid(grid); });
    opt(app.add_option("--out", out, "output path (default: stdout)"), [&](RunConfig& c) { c.out = out; });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    RunConfig c;
    for (const auto& [name, sub] : subs) {
        if (sub->parsed()) {
            c.command = kCommands.at(name);
            if (sub->get_help_ptr() && sub->get_help_ptr()->count()) throw HelpRequested{sub->help()};
        }
    }
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw UsageError("cannot read config file '" + config_path + "'");
        Json j;
        try {
            j = Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("config file is not valid JSON: " + std::string(e.what()));
        }
        apply_json(j, c);
    }
    for (auto& [o, apply] : given) {
        if (o->count()) apply(c);
    }
    validate_config(c);
    return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    switch (c.command) {
    case Command::wigner: return run_wigner(c, out, err);
    case Command::entropy: return run_entropy(c, out);
    case Command::probs: return run_probs(c, out);
    case Command::montecarlo: return run_montecarlo(c, out);
    case Command::evolve: return run_evolve(c, out);
    case Command::validate: return run_validate(c, out);
    }
    return kExitUsage;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    try {
        c = parse_config(args);
    } catch (const HelpRequested& h) {
        out << h.text;
        return kExitOk;
    } catch (const UsageError& e) {
        err << "pumpcat: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        return run(c, out, err);
    } catch (const Error& e) {
        err << "pumpcat: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "pumpcat: " << e.what() << "\n";
        return kExitNumeric;
    }
}

std::string suffixed_path(const std::string& path, double pump) {
    char tag[48];
    std::snprintf(tag, sizeof tag, "_F%g", pump);
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash) || dot == 0 ||
        (slash != std::string::npos && dot == slash + 1)) {
        return path + tag;
    }
    return path.substr(0, dot) + tag + path.substr(dot);
}

} // namespace pumpcat::cli
