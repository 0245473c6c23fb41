#include "pumpcat/evolution.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "pumpcat/error.hpp"
#include "pumpcat/fock_oracle.hpp"
#include "test_util.hpp"

using namespace pumpcat;
using pumpcat::testing::dyad_distance;
using pumpcat::testing::kRoot5;

namespace {

const Complex kI{0.0, 1.0};

double max_label_gap(const DyadState& a, const DyadState& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        m = std::max({m, std::abs(a.dyads[k].ket - b.dyads[k].ket), std::abs(a.dyads[k].bra - b.dyads[k].bra),
                      std::abs(a.dyads[k].coeff - b.dyads[k].coeff)});
    }
    return m;
}

} // namespace

TEST(evolution, coefficients) {
    const CavityParams p = CavityParams::resonant_pump(0.8, {0.5, 0.25}, 3.0);
    const double t = 1.3;
    ASSERT_NEAR(std::abs(coeff_u(t, p) - std::exp(-0.4 * t)), 0.0, 1e-16);
    ASSERT_NEAR(std::abs(coeff_u(t, p, Frame::Lab) - std::polar(std::exp(-0.4 * t), -3.0 * t)), 0.0, 1e-15);
    const Complex w = -kI * (2.0 * p.pump_amp / 0.8) * (1.0 - std::exp(-0.4 * t));
    ASSERT_NEAR(std::abs(coeff_w(t, p) - w), 0.0, 1e-15);
    ASSERT_NEAR(std::abs(coeff_w(t, p, Frame::Lab) - w * std::polar(1.0, -3.0 * t)), 0.0, 1e-15);
    ASSERT_NEAR(thermal_factor(t, p), (1.0 - std::exp(-0.8 * t)) * 0.5, 1e-16);

    // Small gamma t keeps full relative precision.
    const double tiny = 1e-12;
    ASSERT_NEAR(std::abs(coeff_w(tiny, p) / (-kI * p.pump_amp * tiny) - 1.0), 0.0, 1e-11);
    ASSERT_THROW(coeff_u(-1.0, p), Error);
}

TEST(evolution, detuned_displacement_solves_amplitude_equation) {
    // dw/dt = -(gamma/2) w - i F e^{-i delta t}, w(0) = 0
    CavityParams p = CavityParams::resonant_pump(1.0, {1.0, 0.3});
    p.pump_freq = 0.7;
    const double h = 1e-5;
    for (double t : {0.2, 1.0, 4.0}) {
        const Complex dw = (coeff_w(t + h, p) - coeff_w(t - h, p)) / (2.0 * h);
        const Complex expect = -0.5 * coeff_w(t, p) - kI * p.pump_amp * std::polar(1.0, -0.7 * t);
        ASSERT_NEAR(std::abs(dw - expect), 0.0, 1e-9);
    }
    ASSERT_NEAR(std::abs(coeff_w(0.0, p)), 0.0, 1e-16);
    // Approaches the resonant form as the detuning vanishes.
    CavityParams q = p;
    q.pump_freq = 1e-9;
    ASSERT_NEAR(std::abs(coeff_w(2.0, q) - coeff_w(2.0, CavityParams::resonant_pump(1.0, p.pump_amp))), 0.0, 1e-8);
}

TEST(evolution, detuned_amplitude_matches_lindblad_reference) {
    // Lindblad RK4 reference (tests/oracle/derive_values.py), cavity frame.
    CavityParams p = CavityParams::resonant_pump(1.0, 1.0);
    p.pump_freq = 0.7;
    const DyadState s = evolve_state(coherent_state(0.0), 2.0, p);
    ASSERT_NEAR(std::abs(mean_amplitude(s) - Complex{-0.8530587483568545, -0.798457651157194}), 0.0, 1e-9);
}

TEST(evolution, pump_lock_fixed_point) {
    const CavityParams base;
    const CavityParams p = CavityParams::resonant_pump(1.0, pump_lock(kRoot5, base));
    ASSERT_NEAR(std::abs(p.pump_amp - kI * kRoot5 * 0.5), 0.0, 1e-16);
    for (double t : {0.5, 1.0, 3.0, 50.0}) {
        const DyadState s = evolve_state(coherent_state(kRoot5), t, p);
        ASSERT_LT(std::abs(s.dyads[0].ket - kRoot5), 1e-12);
        ASSERT_LT(std::abs(s.dyads[0].bra - kRoot5), 1e-12);
        ASSERT_NEAR(s.dyads[0].coeff.real(), 1.0, 1e-12);
    }
}

TEST(evolution, attractor) {
    const CavityParams p = CavityParams::resonant_pump(1.0, 1.0);
    ASSERT_NEAR(std::abs(stationary_amplitude(p) - Complex{0.0, -2.0}), 0.0, 1e-16);
    const DyadState s10 = evolve_state(coherent_state(0.0), 10.0, p);
    // The approach is e^{-gamma t/2}: still 2 e^{-5} away at gamma t = 10.
    ASSERT_NEAR(std::abs(s10.dyads[0].ket - Complex{0.0, -2.0}), 2.0 * std::exp(-5.0), 1e-15);
    const DyadState s40 = evolve_state(coherent_state(0.0), 40.0, p);
    ASSERT_LT(std::abs(s40.dyads[0].ket - Complex{0.0, -2.0}), 1e-8);

    CavityParams detuned = p;
    detuned.pump_freq = 0.1;
    ASSERT_THROW(stationary_amplitude(detuned), Error);
}

TEST(evolution, free_decay_of_coherences) {
    const CavityParams p = CavityParams::resonant_pump(1.0, 0.0);
    for (double t : {0.1, 1.0}) {
        const double u = std::exp(-0.5 * t);
        const DyadState s = evolve_state(make_cat(kRoot5, CatParity::Even), t, p);
        Complex off{};
        Complex diag{};
        for (const auto& d : s.dyads) {
            if (std::abs(d.ket - u * kRoot5) < 1e-12 && std::abs(d.bra + u * kRoot5) < 1e-12) off = d.coeff;
            if (std::abs(d.ket - u * kRoot5) < 1e-12 && std::abs(d.bra - u * kRoot5) < 1e-12) diag = d.coeff;
        }
        ASSERT_NEAR((off / diag).real(), std::exp(-10.0 * (1.0 - std::exp(-t))), 1e-12);
    }
    ASSERT_NEAR(free_decoherence_time(kRoot5, p), 0.1, 1e-16);
    ASSERT_THROW(free_decoherence_time(0.0, p), Error);
}

TEST(evolution, semigroup_and_bookkeeping) {
    CavityParams p = CavityParams::resonant_pump(0.7, {0.4, -0.9});
    const DyadState cat = make_cat({1.5, 0.5}, CatParity::Odd);
    const DyadState direct = evolve_state(cat, 1.7, p);
    const DyadState split = evolve_state(evolve_state(cat, 0.6, p), 1.1, p);
    ASSERT_LT(max_label_gap(direct, split), 1e-12);
    ASSERT_NEAR(direct.time, 1.7, 1e-16);
    ASSERT_NEAR(trace(direct).real(), 1.0, 1e-12);
    ASSERT_TRUE(is_hermitian(direct));

    // A detuned pump depends on absolute time; splitting must still compose.
    p.pump_freq = 1.3;
    ASSERT_LT(max_label_gap(evolve_state(cat, 1.7, p), evolve_state(evolve_state(cat, 0.6, p), 1.1, p)), 1e-12);
}

TEST(evolution, preconditions) {
    CavityParams p = CavityParams::resonant_pump(1.0, 1.0);
    const DyadState cat = make_cat(kRoot5, CatParity::Even);
    try {
        evolve_state(cat, -0.1, p);
        FAIL();
    } catch (const Error& e) {
        ASSERT_EQ(e.code(), ErrorCode::NegativeTime);
    }
    p.nbar = 0.5;
    try {
        evolve_state(cat, 0.1, p);
        FAIL();
    } catch (const Error& e) {
        ASSERT_EQ(e.code(), ErrorCode::ThermalNotSupported);
    }
    ASSERT_THROW(evolve_state(to_lab(cat, 1.0), 0.1, CavityParams::resonant_pump(1.0, 1.0)), Error);
}

TEST(evolution, cross_term_phase_against_lindblad) {
    // Coherence |A><B| of the pumped cat carries exp(u (conj(a) w - a conj(w))) with u = e^{-gamma t/2}.
    const CavityParams p = CavityParams::resonant_pump(1.0, 1.0);
    const double t = 0.1;
    const DyadState cat = make_cat(kRoot5, CatParity::Even);
    const std::size_t dim = fock::recommended_dimension(cat, t, p);
    const auto oracle = fock::integrate(fock::dyads_to_fock(cat, dim), t, p).rho;
    const DyadState engine = evolve_state(cat, t, p);
    ASSERT_LT(fock::trace_distance(fock::dyads_to_fock(engine, dim), oracle), 1e-9);

    // Same state with the phase exponent e^{-gamma t} instead.
    const double u = std::exp(-0.5 * t);
    const Complex w = coeff_w(t, p);
    const Complex a = kRoot5;
    const Complex wrong = std::exp((std::exp(-t) - u) * (std::conj(a) * w - a * std::conj(w)));
    DyadState alt = engine;
    for (auto& d : alt.dyads) {
        if (std::abs(d.ket - (u * a + w)) < 1e-12 && std::abs(d.bra - (-u * a + w)) < 1e-12) d.coeff *= wrong;
        if (std::abs(d.ket - (-u * a + w)) < 1e-12 && std::abs(d.bra - (u * a + w)) < 1e-12) d.coeff *= std::conj(wrong);
    }
    ASSERT_GT(fock::trace_distance(fock::dyads_to_fock(alt, dim), oracle), 1e-3);
}

TEST(evolution, characteristic_functions) {
    const CavityParams p = CavityParams::resonant_pump(1.0, {0.6, 0.2});
    const DyadState cat = make_cat({1.0, 1.5}, CatParity::Even);
    const double t = 0.8;
    const DyadState later = evolve_state(cat, t, p);
    for (Complex eta : {Complex{0.3, 0.1}, Complex{-1.0, 0.7}, Complex{0.0, 2.0}}) {
        ASSERT_NEAR(std::abs(char_fn_normal(cat, eta, t, p) - char_fn_normal_initial(later, eta)), 0.0, 1e-13);
        // Zero temperature: chi_S(t) from chi_S(0) and the dyad state at t agree.
        const Complex from_map = char_fn_symmetric(symmetric_char_fn(cat), eta, t, p);
        ASSERT_NEAR(std::abs(from_map - symmetric_char_fn(later)(eta)), 0.0, 1e-13);
    }
    // Coherent state: exp(-|eta|^2/2 + eta conj(a) - conj(eta) a)
    const Amplitude a{0.4, -1.1};
    const Complex eta{0.7, 0.2};
    const Complex expect = std::exp(-0.5 * std::norm(eta) + eta * std::conj(a) - std::conj(eta) * a);
    ASSERT_NEAR(std::abs(symmetric_char_fn(coherent_state(a))(eta) - expect), 0.0, 1e-15);
}

TEST(evolution, thermal_char_fn_reference) {
    // Lindblad RK4 reference at nbar = 0.5 (tests/oracle/derive_values.py).
    CavityParams p = CavityParams::resonant_pump(1.0, 1.0);
    p.nbar = 0.5;
    const Complex chi = char_fn_symmetric(symmetric_char_fn(make_cat(kRoot5, CatParity::Even)), {0.5, 0.25}, 1.0, p);
    ASSERT_NEAR(std::abs(chi - Complex{0.4260824769169588, 0.42739727818025747}), 0.0, 1e-9);
}
