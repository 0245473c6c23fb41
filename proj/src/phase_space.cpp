#include "pumpcat/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pumpcat/error.hpp"
#include "pumpcat/evolution.hpp"

namespace pumpcat {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;
constexpr double kImagResidueTol = 1e-10;

} // namespace

void validate(const GridSpec& spec) {
    if (!(spec.re_max > spec.re_min) || !(spec.im_max > spec.im_min)) {
        throw Error(ErrorCode::InvalidArgument, "grid window must have max > min on both axes");
    }
    if (spec.n_re < 2 || spec.n_im < 2) {
        throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 samples per axis");
    }
}

Complex wigner_dyad(const CoherentDyad& dyad, Complex zeta) {
    const Complex gauss = -2.0 * (zeta - dyad.ket) * (std::conj(zeta) - std::conj(dyad.bra));
    return kTwoOverPi * dyad.coeff * std::exp(log_overlap(dyad.ket, dyad.bra) + gauss);
}

double wigner_point(const DyadState& state, Complex zeta) {
    Complex acc{};
    for (const auto& d : state.dyads) acc += wigner_dyad(d, zeta);
    if (std::abs(acc.imag()) > kImagResidueTol) {
        std::ostringstream msg;
        msg << "Wigner value at " << zeta << " has imaginary residue " << acc.imag();
        throw Error(ErrorCode::NonHermitianState, msg.str());
    }
    return acc.real();
}

WignerGrid wigner_state(const DyadState& state, const GridSpec& spec) {
    validate(spec);
    WignerGrid grid;
    grid.spec = spec;
    grid.time = state.time;
    grid.values.resize(spec.n_re * spec.n_im);
    for (std::size_t j = 0; j < spec.n_im; ++j) {
        for (std::size_t i = 0; i < spec.n_re; ++i) {
            grid.values[j * spec.n_re + i] = wigner_point(state, spec.point(i, j));
        }
    }
    return grid;
}

double wigner_cat_closed_form(Amplitude alpha, CatParity parity, double t, const CavityParams& params,
                              Complex zeta) {
    const double n2 = cat_norm_sq(alpha, parity);
    if (!(n2 > 1e-300)) throw Error(ErrorCode::DegenerateCat, "odd cat of the vacuum has no Wigner function");
    const double u = coeff_u(t, params).real();
    const Complex w = coeff_w(t, params);
    const double a2 = std::norm(alpha);

    const double plus = std::exp(-2.0 * std::norm(zeta - u * alpha - w));
    const double minus = std::exp(-2.0 * std::norm(zeta + u * alpha - w));
    const double envelope = std::exp(-2.0 * std::norm(zeta - w));
    const double damping = std::exp(-2.0 * a2 * (-std::expm1(-params.gamma * t)));
    const double fringes = std::cos(4.0 * u * ((zeta - w) * std::conj(alpha)).imag());
    return kTwoOverPi / n2 * (plus + minus + 2.0 * cos_phi(parity) * envelope * damping * fringes);
}

double grid_normalization(const WignerGrid& grid) {
    double acc = 0.0;
    for (double v : grid.values) acc += v;
    return acc * grid.spec.d_re() * grid.spec.d_im();
}

double boundary_max(const WignerGrid& grid) {
    const auto& s = grid.spec;
    double m = 0.0;
    for (std::size_t i = 0; i < s.n_re; ++i) {
        m = std::max({m, std::abs(grid.at(i, 0)), std::abs(grid.at(i, s.n_im - 1))});
    }
    for (std::size_t j = 0; j < s.n_im; ++j) {
        m = std::max({m, std::abs(grid.at(0, j)), std::abs(grid.at(s.n_re - 1, j))});
    }
    return m;
}

GridSpec default_window(const DyadState& state, std::size_t n_re, std::size_t n_im) {
    const Complex center = mean_amplitude(state);
    double spread = 0.0;
    for (const auto& d : state.dyads) {
        spread = std::max({spread, std::abs(d.ket - center), std::abs(d.bra - center)});
    }
    const double half = 4.0 + spread;
    return {center.real() - half, center.real() + half, center.imag() - half, center.imag() + half, n_re, n_im};
}

double wigner_from_char_fn(const std::function<Complex(Complex)>& chi_s, Complex zeta, double half_width,
                           std::size_t n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "characteristic-function grid needs n >= 2");
    const double h = 2.0 * half_width / static_cast<double>(n - 1);
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) {
        const double y = -half_width + h * static_cast<double>(j);
        const double wy = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = -half_width + h * static_cast<double>(i);
            const double wx = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            const Complex eta{x, y};
            acc += wx * wy * std::exp(zeta * std::conj(eta) - std::conj(zeta) * eta) * chi_s(eta);
        }
    }
    return (acc * h * h).real() / (std::numbers::pi * std::numbers::pi);
}

} // namespace pumpcat
