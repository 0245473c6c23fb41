#include "pumpcat/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "pumpcat/evolution.hpp"
#include "pumpcat/fock_oracle.hpp"
#include "pumpcat/phase_space.hpp"
#include "pumpcat/protocol.hpp"
#include "pumpcat/serialization.hpp"
#include "pumpcat/states.hpp"

namespace pumpcat {

namespace {

const Amplitude kAlpha5{std::sqrt(5.0), 0.0};
constexpr double kTraceTol = 1e-5;

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

// Coefficient of the dyad with the given labels; zero if absent.
Complex coeff_of(const DyadState& s, Amplitude ket, Amplitude bra) {
    Complex c{};
    for (const auto& d : s.dyads) {
        if (std::abs(d.ket - ket) < 1e-9 && std::abs(d.bra - bra) < 1e-9) c += d.coeff;
    }
    return c;
}

CheckResult make(int id, std::string name, bool pass, std::string detail) {
    return {id, std::move(name), pass, std::move(detail)};
}

} // namespace

CheckResult check_fixed_point() {
    CavityParams base;
    const auto params = CavityParams::resonant_pump(1.0, pump_lock(kAlpha5, base));
    const DyadState rho0 = coherent_state(kAlpha5);
    const std::vector<double> times{0.5, 1.0, 3.0};
    constexpr std::size_t kDim = 64;

    double label_dev = 0.0;
    for (double t : times) {
        for (const auto& d : evolve_state(rho0, t, params).dyads) {
            label_dev = std::max({label_dev, std::abs(d.ket - kAlpha5), std::abs(d.bra - kAlpha5)});
        }
    }

    fock::IntegrationOptions opts;
    opts.dt = 1e-3 / params.gamma;
    opts.checkpoints = {0.5, 1.0};
    const auto run = fock::integrate(fock::dyads_to_fock(rho0, kDim), 3.0, params, opts);
    double td = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto& rho = k < run.checkpoints.size() ? run.checkpoints[k] : run.rho;
        td = std::max(td, fock::trace_distance(fock::dyads_to_fock(evolve_state(rho0, times[k], params), kDim), rho));
    }
    return make(1, "fixed point under pump lock", label_dev < 1e-12 && td < kTraceTol,
                "label_dev=" + sci(label_dev) + " oracle_td=" + sci(td));
}

namespace {

struct AttractorData {
    double analytic_target;
    double oracle_target;
    double analytic_oracle;
    double residual_expected;
};

AttractorData attractor_at(double t, const fock::FockMatrix& oracle, const CavityParams& params) {
    const DyadState analytic = evolve_state(coherent_state(0.0), t, params);
    const Amplitude target = stationary_amplitude(params);
    const auto dim = static_cast<std::size_t>(oracle.rows());
    const auto a = fock::dyads_to_fock(analytic, dim);
    const auto b = fock::dyads_to_fock(coherent_state(target), dim);
    const double gap = std::norm(coeff_w(t, params) - target);
    return {fock::trace_distance(a, b), fock::trace_distance(oracle, b), fock::trace_distance(a, oracle),
            std::sqrt(-std::expm1(-gap))};
}

} // namespace

CheckResult check_attractor() {
    const auto params = CavityParams::resonant_pump(1.0, 1.0);
    const std::size_t dim = fock::recommended_dimension(coherent_state(0.0), 10.0, params);
    const auto run = fock::integrate(fock::vacuum(dim), 10.0, params);
    const auto d = attractor_at(10.0, run.rho, params);
    const bool pass = d.analytic_target < kTraceTol && d.oracle_target < kTraceTol && d.analytic_oracle < kTraceTol;
    return make(2, "attractor |-2i> at gamma t = 10", pass,
                "td(analytic,target)=" + sci(d.analytic_target) + " td(oracle,target)=" + sci(d.oracle_target) +
                    " td(analytic,oracle)=" + sci(d.analytic_oracle) + " expected_residual=" + sci(d.residual_expected));
}

CheckResult check_attractor_convergence() {
    const auto params = CavityParams::resonant_pump(1.0, 1.0);
    const std::size_t dim = fock::recommended_dimension(coherent_state(0.0), 30.0, params);
    fock::IntegrationOptions opts;
    opts.checkpoints = {10.0};
    const auto run = fock::integrate(fock::vacuum(dim), 30.0, params, opts);
    const auto early = attractor_at(10.0, run.checkpoints[0], params);
    const auto late = attractor_at(30.0, run.rho, params);
    const double residual_err = std::abs(early.analytic_target - early.residual_expected);
    const bool pass = early.analytic_oracle < kTraceTol && residual_err < 1e-8 && late.analytic_target < kTraceTol &&
                      late.oracle_target < kTraceTol && late.analytic_oracle < kTraceTol;
    return make(2, "attractor |-2i> (analytic, oracle, residual)", pass,
                "t10: td(analytic,oracle)=" + sci(early.analytic_oracle) + " residual_err=" + sci(residual_err) +
                    "; t30: td(analytic,target)=" + sci(late.analytic_target) +
                    " td(oracle,target)=" + sci(late.oracle_target));
}

CheckResult check_free_decay() {
    const auto params = CavityParams::resonant_pump(1.0, 0.0);
    const double a2 = std::norm(kAlpha5);
    double err = 0.0;
    for (CatParity p : {CatParity::Even, CatParity::Odd}) {
        const DyadState cat = make_cat(kAlpha5, p);
        for (double t : {0.1, 1.0}) {
            const DyadState s = evolve_state(cat, t, params);
            const double u = std::exp(-0.5 * params.gamma * t);
            const Complex off = coeff_of(s, u * kAlpha5, -u * kAlpha5);
            const Complex diag = coeff_of(s, u * kAlpha5, u * kAlpha5);
            const double ratio = (off / (cos_phi(p) * diag)).real();
            err = std::max(err, std::abs(ratio - std::exp(-2.0 * a2 * (1.0 - std::exp(-params.gamma * t)))));
        }
    }
    const double td = free_decoherence_time(kAlpha5, params);
    const DyadState s = evolve_state(make_cat(kAlpha5, CatParity::Even), td, params);
    const double u = std::exp(-0.5 * params.gamma * td);
    const double mag = std::abs(coeff_of(s, u * kAlpha5, -u * kAlpha5) / coeff_of(s, u * kAlpha5, u * kAlpha5));
    const bool in_band = mag >= std::exp(-1.05) && mag <= std::exp(-0.95);
    return make(3, "free decay of the cat coherence", err < 1e-12 && in_band && std::abs(td - 0.1) < 1e-15,
                "factor_err=" + sci(err) + " t_d=" + sci(td) + " offdiag(t_d)=" + sci(mag));
}

CheckResult check_pumped_cat() {
    const auto params = CavityParams::resonant_pump(1.0, 1.0);
    const std::vector<double> times{0.1, 0.5, 1.0, 3.0};
    double td = 0.0;
    for (CatParity p : {CatParity::Even, CatParity::Odd}) {
        const DyadState cat = make_cat(kAlpha5, p);
        const std::size_t dim = fock::recommended_dimension(cat, times.back(), params);
        fock::IntegrationOptions opts;
        opts.checkpoints.assign(times.begin(), times.end() - 1);
        const auto run = fock::integrate(fock::dyads_to_fock(cat, dim), times.back(), params, opts);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const auto& rho = k < run.checkpoints.size() ? run.checkpoints[k] : run.rho;
            td = std::max(td, fock::trace_distance(fock::dyads_to_fock(evolve_state(cat, times[k], params), dim), rho));
        }
    }
    return make(4, "pumped cat vs Lindblad oracle", td < kTraceTol, "max_td=" + sci(td));
}

CheckResult check_wigner() {
    const auto params = CavityParams::resonant_pump(1.0, 1.0);
    const GridSpec spec{-6.0, 6.0, -6.0, 6.0, 200, 200};
    double pointwise = 0.0;
    double norm_err = 0.0;
    for (CatParity p : {CatParity::Even, CatParity::Odd}) {
        const DyadState cat = make_cat(kAlpha5, p);
        for (double t : {0.0, 1.0}) {
            const WignerGrid grid = wigner_state(evolve_state(cat, t, params), spec);
            for (std::size_t j = 0; j < spec.n_im; ++j) {
                for (std::size_t i = 0; i < spec.n_re; ++i) {
                    const double ref = wigner_cat_closed_form(kAlpha5, p, t, params, spec.point(i, j));
                    pointwise = std::max(pointwise, std::abs(grid.at(i, j) - ref));
                }
            }
            norm_err = std::max(norm_err, std::abs(grid_normalization(grid) - 1.0));
        }
    }
    const double w00 = wigner_point(make_cat(kAlpha5, CatParity::Even), 0.0);
    const double w00_err = std::abs(w00 - 2.0 / std::numbers::pi);
    return make(5, "Wigner function closed form", pointwise < 1e-12 && w00_err < 1e-6 && norm_err < 1e-4,
                "pointwise=" + sci(pointwise) + " W00_err=" + sci(w00_err) + " norm_err=" + sci(norm_err));
}

CheckResult check_entropy() {
    CavityParams base;
    const auto params = CavityParams::resonant_pump(1.0, pump_lock(kAlpha5, base));
    constexpr std::size_t kSamples = 200;
    double err = 0.0;
    double s0 = 0.0;
    double s10 = 0.0;
    for (CatParity p : {CatParity::Even, CatParity::Odd}) {
        const DyadState cat = make_cat(kAlpha5, p);
        for (std::size_t k = 0; k < kSamples; ++k) {
            const double t = 10.0 * static_cast<double>(k) / static_cast<double>(kSamples - 1);
            const double closed = linear_entropy_closed_form(kAlpha5, p, t, params);
            const double engine = linear_entropy(evolve_state(cat, t, params));
            err = std::max(err, std::abs(closed - engine));
            if (k == 0) s0 = std::max({s0, std::abs(closed), std::abs(engine)});
            if (k + 1 == kSamples) s10 = std::max({s10, closed, engine});
        }
    }
    return make(6, "linear entropy closed form", err < 1e-10 && s0 < 1e-12 && s10 < 1e-3,
                "max_err=" + sci(err) + " S(0)=" + sci(s0) + " S(10)=" + sci(s10));
}

CheckResult check_conditional_probabilities() {
    const std::vector<double> delays{0.01, 0.1, 1.0, 3.0, 10.0, 20.0};
    double spread = 0.0;
    for (double f : {0.0, 0.5, 1.0, 2.0}) {
        const auto params = CavityParams::resonant_pump(1.0, f);
        for (CatParity p : {CatParity::Even, CatParity::Odd}) {
            const DyadState cat = make_cat(kAlpha5, p);
            const std::size_t dim = fock::recommended_dimension(cat, delays.back(), params);
            fock::IntegrationOptions opts;
            opts.checkpoints.assign(delays.begin(), delays.end() - 1);
            const auto run = fock::integrate(fock::dyads_to_fock(cat, dim), delays.back(), params, opts);
            for (std::size_t k = 0; k < delays.size(); ++k) {
                const auto& rho = k < run.checkpoints.size() ? run.checkpoints[k] : run.rho;
                for (Outcome o : {Outcome::g, Outcome::e}) {
                    const double closed = conditional_probability(p, o, delays[k], kAlpha5, params);
                    const double engine = conditional_probability_engine(p, o, delays[k], kAlpha5, params);
                    const double oracle = fock::detect_matrix(rho, o).probability;
                    spread = std::max({spread, std::abs(closed - engine), std::abs(closed - oracle),
                                       std::abs(engine - oracle)});
                }
            }
        }
    }

    const auto pumped = CavityParams::resonant_pump(1.0, 1.0);
    const Amplitude big{std::sqrt(20.0), 0.0};
    double short_err = 0.0;
    double long_err = 0.0;
    for (CatParity p : {CatParity::Even, CatParity::Odd}) {
        const double expect_g = 0.5 * (1.0 + cos_phi(p));
        for (Outcome o : {Outcome::g, Outcome::e}) {
            const double expect = o == Outcome::g ? expect_g : 1.0 - expect_g;
            short_err = std::max({short_err, std::abs(conditional_probability(p, o, 1e-6, big, pumped) - expect),
                                  std::abs(conditional_probability_engine(p, o, 1e-6, big, pumped) - expect)});
            long_err = std::max({long_err, std::abs(conditional_probability(p, o, 20.0, kAlpha5, pumped) - 0.5),
                                 std::abs(conditional_probability_engine(p, o, 20.0, kAlpha5, pumped) - 0.5)});
        }
    }
    return make(7, "conditional detection probabilities", spread < 1e-6 && short_err < 1e-3 && long_err < 1e-3,
                "route_spread=" + sci(spread) + " short_limit_err=" + sci(short_err) +
                    " saturation_err=" + sci(long_err));
}

CheckResult check_monte_carlo(const ValidationOptions& options) {
    const auto params = CavityParams::resonant_pump(1.0, 1.0);
    ProtocolConfig cfg;
    cfg.alpha = kAlpha5;
    cfg.params = params;
    cfg.delay = 0.1;
    cfg.n_atoms = 5;
    cfg.seed = options.seed;
    cfg.n_trajectories = options.mc_trajectories;
    cfg.keep_final_states = false;
    const auto runs = run_sequence(cfg);
    const auto n = static_cast<double>(runs.size());

    // worst |observed - expected| in units of the binomial standard error
    double worst_z = 0.0;
    double record_err = 0.0;

    auto pg_of = [](const DetectionRecord& r) { return r.outcome == Outcome::g ? r.probability : 1.0 - r.probability; };

    {
        const double p = 0.5 * (1.0 + std::exp(-2.0 * std::norm(kAlpha5)));
        double count = 0.0;
        for (const auto& t : runs) count += t.records[0].outcome == Outcome::g ? 1.0 : 0.0;
        worst_z = std::max(worst_z, std::abs(count / n - p) / std::sqrt(p * (1.0 - p) / n));
    }
    for (Outcome first : {Outcome::g, Outcome::e}) {
        const double p = conditional_probability(parity_of(first), Outcome::g, cfg.delay, kAlpha5, params);
        double m = 0.0;
        double count = 0.0;
        for (const auto& t : runs) {
            if (t.records[0].outcome != first) continue;
            m += 1.0;
            count += t.records[1].outcome == Outcome::g ? 1.0 : 0.0;
            record_err = std::max(record_err, std::abs(pg_of(t.records[1]) - p));
        }
        if (m > 0.0) worst_z = std::max(worst_z, std::abs(count / m - p) / std::sqrt(p * (1.0 - p) / m));
    }
    for (std::size_t k = 2; k < cfg.n_atoms; ++k) {
        double count = 0.0;
        double mean = 0.0;
        double var = 0.0;
        for (const auto& t : runs) {
            const double p = pg_of(t.records[k]);
            count += t.records[k].outcome == Outcome::g ? 1.0 : 0.0;
            mean += p;
            var += p * (1.0 - p);
        }
        if (var > 0.0) worst_z = std::max(worst_z, std::abs(count - mean) / std::sqrt(var));
    }

    ProtocolConfig zeno = cfg;
    zeno.delay = 1e-4;
    zeno.n_atoms = 10;
    double repeat = 0.0;
    for (const auto& t : run_sequence(zeno)) {
        const bool same = std::all_of(t.records.begin(), t.records.end(),
                                      [&](const DetectionRecord& r) { return r.outcome == t.records[0].outcome; });
        repeat += same ? 1.0 : 0.0;
    }
    const double zeno_frac = repeat / n;
    return make(8, "Monte Carlo outcome statistics", worst_z <= 3.0 && record_err < 1e-9 && zeno_frac >= 0.95,
                "worst_z=" + sci(worst_z) + " step2_prob_err=" + sci(record_err) + " zeno_repeat=" + sci(zeno_frac));
}

CheckResult check_thermal_char_fn() {
    double err = 0.0;
    const DyadState cat = make_cat(kAlpha5, CatParity::Even);
    const CharFn chi0 = symmetric_char_fn(cat);
    constexpr double kT = 1.0;
    for (double nbar : {0.5, 2.0}) {
        CavityParams params = CavityParams::resonant_pump(1.0, 1.0);
        params.nbar = nbar;
        const std::size_t dim = fock::recommended_dimension(cat, kT, params);
        const auto run = fock::integrate(fock::dyads_to_fock(cat, dim), kT, params);
        for (int k = 1; k <= 10; ++k) {
            const Complex eta = std::polar(0.25 * k, 0.9 * k);
            err = std::max(err, std::abs(char_fn_symmetric(chi0, eta, kT, params) - fock::char_fn_point(run.rho, eta)));
        }
    }
    return make(9, "thermal characteristic function", err < 1e-5, "max_err=" + sci(err));
}

CheckResult check_monte_carlo_determinism(const ValidationOptions& options) {
    ProtocolConfig cfg;
    cfg.alpha = kAlpha5;
    cfg.params = CavityParams::resonant_pump(1.0, 1.0);
    cfg.n_atoms = 4;
    cfg.seed = options.seed;
    cfg.n_trajectories = 1000;
    cfg.feedback = true;
    const std::string a = trajectories_to_json(run_sequence(cfg)).dump();
    const std::string b = trajectories_to_json(run_sequence(cfg)).dump();
    return make(10, "Monte Carlo determinism", a == b, "bytes=" + std::to_string(a.size()));
}

std::vector<CheckResult> run_validation_suite(const ValidationOptions& options) {
    return {check_fixed_point(),
            check_attractor_convergence(),
            check_free_decay(),
            check_pumped_cat(),
            check_wigner(),
            check_entropy(),
            check_conditional_probabilities(),
            check_monte_carlo(options),
            check_thermal_char_fn(),
            check_monte_carlo_determinism(options)};
}

std::string format_report(const std::vector<CheckResult>& results) {
    std::ostringstream out;
    std::size_t passed = 0;
    for (const auto& r : results) {
        char head[96];
        std::snprintf(head, sizeof head, "%-3d %-46s %s  ", r.id, r.name.c_str(), r.pass ? "PASS" : "FAIL");
        out << head << r.detail << '\n';
        passed += r.pass ? 1 : 0;
    }
    out << passed << "/" << results.size() << " checks passed\n";
    return out.str();
}

} // namespace pumpcat
