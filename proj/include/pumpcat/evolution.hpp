// evolution.hpp: closed-form pumped-dissipative evolution of the cavity field.
//
// The Heisenberg solution a(t) = u(t) a(0) + w(t) + (reservoir noise) maps a
// coherent dyad |a><b| at zero temperature onto a single dyad |u a + w><u b + w|;
// the coefficient follows from trace conservation of every dyad.

#pragma once

#include <functional>

#include "pumpcat/params.hpp"
#include "pumpcat/states.hpp"

namespace pumpcat {

struct EvolutionCoefficients {
    Complex u{1.0};
    Complex w{};
    double noise{0.0};
};

Complex coeff_u(double t, const CavityParams& params, Frame frame = Frame::Rotating);

// Pump displacement accumulated over [0, t] for a drive that starts with phase
// F at t = 0. Resonant rotating frame: -i (2F/gamma)(1 - exp(-gamma t / 2)).
Complex coeff_w(double t, const CavityParams& params, Frame frame = Frame::Rotating);

// (1 - exp(-gamma t)) (1/2 + nbar)
double thermal_factor(double t, const CavityParams& params);

EvolutionCoefficients coefficients(double t, const CavityParams& params, Frame frame = Frame::Rotating);

// Zero-temperature map of one dyad over an interval t starting at absolute time t0
// (t0 only matters for a detuned pump, whose phase depends on absolute time).
CoherentDyad evolve_dyad(const CoherentDyad& dyad, double t, const CavityParams& params, double t0 = 0.0);

// Evolves every dyad by t; state.time advances by t. Requires a rotating-frame state.
DyadState evolve_state(const DyadState& state, double t, const CavityParams& params);

// chi_N(eta, t) = chi_N(eta conj(u), 0) exp(eta conj(w) - conj(eta) w), from the state at t = 0.
Complex char_fn_normal(const DyadState& state0, Complex eta, double t, const CavityParams& params);

// Normal-ordered characteristic function of a dyad sum at its own time.
Complex char_fn_normal_initial(const DyadState& state, Complex eta);

using CharFn = std::function<Complex(Complex)>;

// chi_S(eta, t) = chi0(eta conj(u)) exp(eta conj(w) - conj(eta) w) exp(-|eta|^2 (1 - e^{-gamma t})(1/2 + nbar)).
// Valid for nbar > 0.
Complex char_fn_symmetric(const CharFn& chi0, Complex eta, double t, const CavityParams& params);

// Symmetric-ordered characteristic function of a dyad sum: exp(-|eta|^2/2) chi_N(eta).
CharFn symmetric_char_fn(const DyadState& state);

// Fixed point -i 2F/gamma of a resonant pump.
Amplitude stationary_amplitude(const CavityParams& params);

// Pump F = i alpha gamma / 2 that holds |alpha> stationary.
Complex pump_lock(Amplitude alpha, const CavityParams& params);

// t_d = 1 / (2 gamma |alpha|^2)
double free_decoherence_time(Amplitude alpha, const CavityParams& params);

} // namespace pumpcat
