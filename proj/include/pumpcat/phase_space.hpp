// phase_space.hpp: Wigner functions of dyad states on rectangular grids.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "pumpcat/params.hpp"
#include "pumpcat/states.hpp"

namespace pumpcat {

struct GridSpec {
    double re_min{-6.0};
    double re_max{6.0};
    double im_min{-6.0};
    double im_max{6.0};
    std::size_t n_re{200};
    std::size_t n_im{200};

    double d_re() const noexcept { return (re_max - re_min) / static_cast<double>(n_re - 1); }
    double d_im() const noexcept { return (im_max - im_min) / static_cast<double>(n_im - 1); }
    Complex point(std::size_t i_re, std::size_t i_im) const noexcept {
        return {re_min + d_re() * static_cast<double>(i_re), im_min + d_im() * static_cast<double>(i_im)};
    }
};

// Throws InvalidArgument unless the window is nonempty and both counts are >= 2.
void validate(const GridSpec& spec);

// Values are row-major with Re(zeta) varying fastest: values[i_im * n_re + i_re].
struct WignerGrid {
    GridSpec spec;
    std::vector<double> values;
    double time{0.0};

    double at(std::size_t i_re, std::size_t i_im) const { return values[i_im * spec.n_re + i_re]; }
};

// (2/pi) c <b|a> exp(-2 (zeta - a)(conj(zeta) - conj(b)))
Complex wigner_dyad(const CoherentDyad& dyad, Complex zeta);

// Pointwise Wigner value of a Hermitian dyad sum. Throws NonHermitianState when
// the imaginary residue exceeds 1e-10.
double wigner_point(const DyadState& state, Complex zeta);

WignerGrid wigner_state(const DyadState& state, const GridSpec& spec);

// Reference transcription of the cat Wigner function (two Gaussians at +-e^{-gt/2}a + w
// plus the interference term), independent of the dyad engine. Rotating frame, resonant pump.
double wigner_cat_closed_form(Amplitude alpha, CatParity parity, double t, const CavityParams& params, Complex zeta);

// Riemann sum of W over the grid.
double grid_normalization(const WignerGrid& grid);

// Largest |W| on the outer rows and columns.
double boundary_max(const WignerGrid& grid);

constexpr double kWindowWarnThreshold = 1e-6;

inline bool window_too_small(const WignerGrid& grid) { return boundary_max(grid) > kWindowWarnThreshold; }

// Window centred on the mean amplitude with half-width 4 + the largest label deviation.
GridSpec default_window(const DyadState& state, std::size_t n_re = 200, std::size_t n_im = 200);

// Low-resolution probe: W(zeta) = (1/pi^2) int d^2eta exp(zeta conj(eta) - conj(zeta) eta) chi_S(eta),
// trapezoid rule on the square [-half_width, half_width]^2 with n x n nodes.
double wigner_from_char_fn(const std::function<Complex(Complex)>& chi_s, Complex zeta, double half_width,
                           std::size_t n);

} // namespace pumpcat
