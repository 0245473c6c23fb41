// fock_oracle.hpp: brute-force reference in a truncated Fock basis.
//
// Density matrices are plain Eigen matrices indexed by photon number. The Lindblad
// integrator works in the frame rotating at the pump frequency, where the drive is static:
//   H = D a^dag a + F a^dag + conj(F) a,  D = omega0 - omega.

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "pumpcat/params.hpp"
#include "pumpcat/protocol.hpp"
#include "pumpcat/states.hpp"

namespace pumpcat::fock {

using FockMatrix = Eigen::MatrixXcd;

// ceil(mu^2 + 8 mu + 10), plus the geometric tail length of a thermal reservoir with occupation nbar.
std::size_t required_dimension(double mu, double nbar = 0.0);

// Bound for integrating `state` over [0, t]: mu = largest label + sup |w| on the interval.
std::size_t recommended_dimension(const DyadState& state, double t, const CavityParams& params);

// Entrywise expansion of sum c |a><b| using <n|a> = exp(-|a|^2/2) a^n / sqrt(n!).
// Throws TruncationTooSmall when dim is below required_dimension(largest label).
FockMatrix dyads_to_fock(const DyadState& state, std::size_t dim);

FockMatrix vacuum(std::size_t dim);
FockMatrix number_state(std::size_t n, std::size_t dim);

double tail_mass(const FockMatrix& rho);
double hermiticity_deviation(const FockMatrix& rho);
double min_eigenvalue(const FockMatrix& rho);

// min(1e-3 / gamma, 0.1 / (|F| + gamma + |D|))
double max_step(const CavityParams& params);

// Right-hand side of the master equation, O(N^2) without forming operator matrices.
FockMatrix lindblad_rhs(const FockMatrix& rho, const CavityParams& params);

FockMatrix rk4_step(const FockMatrix& rho, double dt, const CavityParams& params);

struct IntegrationOptions {
    double dt{0.0};                // 0 picks the largest admissible step
    std::vector<double> checkpoints; // extra output times in (0, t], ascending
    double tail_tol{1e-10};
    double drift_tol{1e-8};
};

struct IntegrationReport {
    std::size_t steps{0};
    double dt{0.0};
    double cumulative_drift{0.0};     // sum of |Tr - 1| before each renormalization
    double max_hermiticity_deviation{0.0};
    double max_tail_mass{0.0};
    double min_eigenvalue{0.0};       // of the final matrix
};

struct IntegrationResult {
    FockMatrix rho;
    std::vector<FockMatrix> checkpoints;
    IntegrationReport report;
};

// Fixed-step RK4 from rho0 over [0, t]. Each step renormalizes the trace, symmetrizes, and
// checks the tail mass. Throws StepTooLarge, TruncationTooSmall, or InconsistentState (drift).
IntegrationResult integrate(const FockMatrix& rho0, double t, const CavityParams& params,
                            const IntegrationOptions& options = {});

// (1/2) sum |eig(r1 - r2)|. Throws DimMismatch.
double trace_distance(const FockMatrix& r1, const FockMatrix& r2);

// diag((-1)^n) rho diag((-1)^n)
FockMatrix pi_phase(const FockMatrix& rho);

struct FockDetection {
    FockMatrix rho; // normalized
    double probability{0.0};
};

// (1/4)(P rho P + rho +- P rho +- rho P), + for g.
FockDetection detect_matrix(const FockMatrix& rho, Outcome outcome);

// <m|D(eta)|n> for m, n < dim, from the associated-Laguerre closed form.
FockMatrix displacement_matrix(Complex eta, std::size_t dim);

// Tr[rho exp(eta a^dag - conj(eta) a)]
Complex char_fn_point(const FockMatrix& rho, Complex eta);

// (2/pi) Tr[rho D(2 zeta) P]
double wigner_point(const FockMatrix& rho, Complex zeta);

Complex mean_amplitude(const FockMatrix& rho);
double parity_expectation(const FockMatrix& rho);
double purity(const FockMatrix& rho);

} // namespace pumpcat::fock
