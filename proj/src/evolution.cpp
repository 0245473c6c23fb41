#include "pumpcat/evolution.hpp"

#include <cmath>

#include "pumpcat/error.hpp"

namespace pumpcat {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_nonnegative(double t) {
    if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "evolution time must be nonnegative");
}

void require_zero_temperature(const CavityParams& params) {
    if (params.nbar > 0.0) {
        throw Error(ErrorCode::ThermalNotSupported,
                    "dyad evolution is exact only for a zero-temperature reservoir");
    }
}

// Rotating-frame displacement for a drive whose phase at the start of the interval is F e^{-i delta t0}.
Complex displacement(double t, const CavityParams& params, double t0) {
    const double g = params.gamma;
    const double delta = params.detuning();
    if (delta == 0.0) {
        // 1 - e^{-gamma t/2}, accurate for small gamma t
        return -kI * (2.0 * params.pump_amp / g) * (-std::expm1(-0.5 * g * t));
    }
    const Complex drive = params.pump_amp * std::polar(1.0, -delta * t0);
    return drive * (std::polar(1.0, -delta * t) - std::exp(-0.5 * g * t)) / Complex(delta, 0.5 * g);
}

} // namespace

Complex coeff_u(double t, const CavityParams& params, Frame frame) {
    require_nonnegative(t);
    const double damp = std::exp(-0.5 * params.gamma * t);
    if (frame == Frame::Lab) return std::polar(damp, -params.omega0 * t);
    return damp;
}

Complex coeff_w(double t, const CavityParams& params, Frame frame) {
    require_nonnegative(t);
    const Complex w = displacement(t, params, 0.0);
    if (frame == Frame::Lab) return w * std::polar(1.0, -params.omega0 * t);
    return w;
}

double thermal_factor(double t, const CavityParams& params) {
    require_nonnegative(t);
    return -std::expm1(-params.gamma * t) * (0.5 + params.nbar);
}

EvolutionCoefficients coefficients(double t, const CavityParams& params, Frame frame) {
    return {coeff_u(t, params, frame), coeff_w(t, params, frame), thermal_factor(t, params)};
}

CoherentDyad evolve_dyad(const CoherentDyad& dyad, double t, const CavityParams& params, double t0) {
    require_nonnegative(t);
    require_zero_temperature(params);
    const double u = std::exp(-0.5 * params.gamma * t);
    const Complex w = displacement(t, params, t0);
    CoherentDyad out;
    out.ket = u * dyad.ket + w;
    out.bra = u * dyad.bra + w;
    // c' <b'|a'> = c <b|a>, combined in log space
    out.coeff = dyad.coeff *
                std::exp(log_overlap(dyad.ket, dyad.bra) - log_overlap(out.ket, out.bra));
    return out;
}

DyadState evolve_state(const DyadState& state, double t, const CavityParams& params) {
    require_nonnegative(t);
    require_zero_temperature(params);
    if (state.frame != Frame::Rotating) {
        throw Error(ErrorCode::InvalidArgument, "evolution requires a rotating-frame state");
    }
    DyadState out;
    out.frame = state.frame;
    out.time = state.time + t;
    out.dyads.reserve(state.dyads.size());
    for (const auto& d : state.dyads) out.dyads.push_back(evolve_dyad(d, t, params, state.time));
    return out;
}

Complex char_fn_normal_initial(const DyadState& state, Complex eta) {
    Complex acc{};
    for (const auto& d : state.dyads) {
        acc += d.coeff * std::exp(log_overlap(d.ket, d.bra) + eta * std::conj(d.bra) - std::conj(eta) * d.ket);
    }
    return acc;
}

Complex char_fn_normal(const DyadState& state0, Complex eta, double t, const CavityParams& params) {
    require_zero_temperature(params);
    const auto c = coefficients(t, params);
    return char_fn_normal_initial(state0, eta * std::conj(c.u)) *
           std::exp(eta * std::conj(c.w) - std::conj(eta) * c.w);
}

CharFn symmetric_char_fn(const DyadState& state) {
    return [state](Complex eta) { return std::exp(-0.5 * std::norm(eta)) * char_fn_normal_initial(state, eta); };
}

Complex char_fn_symmetric(const CharFn& chi0, Complex eta, double t, const CavityParams& params) {
    const auto c = coefficients(t, params);
    return chi0(eta * std::conj(c.u)) * std::exp(eta * std::conj(c.w) - std::conj(eta) * c.w) *
           std::exp(-std::norm(eta) * c.noise);
}

Amplitude stationary_amplitude(const CavityParams& params) {
    if (!params.resonant()) {
        throw Error(ErrorCode::InvalidArgument, "stationary amplitude requires a resonant pump");
    }
    return -kI * 2.0 * params.pump_amp / params.gamma;
}

Complex pump_lock(Amplitude alpha, const CavityParams& params) { return kI * alpha * params.gamma / 2.0; }

double free_decoherence_time(Amplitude alpha, const CavityParams& params) {
    const double n = std::norm(alpha);
    if (!(n > 0.0)) throw Error(ErrorCode::ZeroAmplitude, "decoherence time needs a nonzero amplitude");
    return 1.0 / (2.0 * params.gamma * n);
}

} // namespace pumpcat
