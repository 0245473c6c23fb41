// states.hpp: field states as finite sums of coherent-state dyads c |alpha><beta|.
//
// Labels are stored in the frame rotating at the cavity frequency. The lab
// frame is only an output transformation (see to_lab).

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "pumpcat/params.hpp"

namespace pumpcat {

using Amplitude = Complex;

enum class Frame { Rotating, Lab };

// Cat parity: even cat (phi = 0) or odd cat (phi = pi).
enum class CatParity { Even, Odd };

constexpr double cos_phi(CatParity p) noexcept { return p == CatParity::Even ? 1.0 : -1.0; }
constexpr CatParity flipped(CatParity p) noexcept {
    return p == CatParity::Even ? CatParity::Odd : CatParity::Even;
}

struct CoherentDyad {
    Amplitude ket{};
    Amplitude bra{};
    Complex coeff{};
};

struct DyadState {
    std::vector<CoherentDyad> dyads;
    Frame frame{Frame::Rotating};
    double time{0.0};

    std::size_t size() const noexcept { return dyads.size(); }
    bool empty() const noexcept { return dyads.empty(); }
};

struct CompactOptions {
    double merge_tol{1e-12}; // label distance below which two dyads share a slot
    double prune_tol{1e-15}; // dyads with |coeff| below this are dropped
    bool renormalize{true};
};

// <beta|alpha> = exp(conj(beta) alpha - |alpha|^2/2 - |beta|^2/2)
Complex overlap(Amplitude alpha, Amplitude beta);

// log <beta|alpha>, for callers that combine several exponentials.
Complex log_overlap(Amplitude alpha, Amplitude beta);

DyadState coherent_state(Amplitude alpha);

// (1/N^2)(|a><a| + |-a><-a| + cos(phi)(|a><-a| + |-a><a|)),  N^2 = 2(1 + cos(phi) e^{-2|a|^2}).
// The even cat of the vacuum collapses to |0><0|; the odd one throws DegenerateCat.
DyadState make_cat(Amplitude alpha, CatParity parity);

// Squared cat normalization N^2.
double cat_norm_sq(Amplitude alpha, CatParity parity);

Complex trace(const DyadState& state);

double purity(const DyadState& state);
double linear_entropy(const DyadState& state);

// Closed-form linear entropy of a cat |alpha> + cos(phi)|-alpha> evolved for t under a
// zero-temperature pumped cavity. Independent of the pump: the displacement drops out of Tr rho^2.
double linear_entropy_closed_form(Amplitude alpha, CatParity parity, double t, const CavityParams& params);

// Re Tr[exp(-i pi a^dag a) rho]
double parity_expectation(const DyadState& state);

double mean_photon_number(const DyadState& state);

// Tr[a rho]
Complex mean_amplitude(const DyadState& state);

// Largest |label| over kets and bras; zero for an empty state.
double max_label_magnitude(const DyadState& state);

// Merge coincident labels, prune negligible dyads, optionally renormalize the trace.
// Pruning is on the trace norm |coeff| of each dyad, which bounds its contribution
// to every bounded observable (parity, Wigner values, overlaps).
DyadState compact(const DyadState& state, const CompactOptions& options = {});

// True when every dyad (a, b, c) has a partner (b, a, conj(c)) within tol,
// and self-paired dyads carry real coefficients.
bool is_hermitian(const DyadState& state, double tol = 1e-12);

// Throws NonHermitianState with a description of the first unpaired dyad.
void require_hermitian(const DyadState& state, double tol = 1e-12);

DyadState scaled(const DyadState& state, Complex factor);

// Divide by the real trace. Throws ZeroProbabilityBranch when the trace vanishes.
DyadState normalized(const DyadState& state);

// Operator sum a + b; frame and time are taken from a.
DyadState sum(const DyadState& a, const DyadState& b);

// exp(-i pi a^dag a) rho exp(i pi a^dag a): every label negated.
DyadState parity_conjugated(const DyadState& state);

// Multiply every label by exp(-i omega0 t) and tag the state as lab frame.
DyadState to_lab(const DyadState& state, double omega0);

} // namespace pumpcat
