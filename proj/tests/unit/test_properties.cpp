// Randomized invariants. Generators are seeded, so failures reproduce.

#include <cmath>

#include "gtest/gtest.h"

#include "pumpcat/evolution.hpp"
#include "pumpcat/fock_oracle.hpp"
#include "pumpcat/phase_space.hpp"
#include "pumpcat/protocol.hpp"
#include "pumpcat/states.hpp"
#include "test_util.hpp"

using namespace pumpcat;
using pumpcat::testing::dyad_distance;
using pumpcat::testing::random_amplitude;
using pumpcat::testing::uniform;

namespace {

CavityParams random_params() {
    CavityParams p = CavityParams::resonant_pump(uniform(0.2, 2.0), random_amplitude(1.5));
    if (uniform(0.0, 1.0) < 0.3) p.pump_freq = uniform(-1.0, 1.0);
    return p;
}

CatParity random_parity() { return uniform(0.0, 1.0) < 0.5 ? CatParity::Even : CatParity::Odd; }

// A random pure-cat or mixed field within a few photons.
DyadState random_state() {
    const Amplitude a = random_amplitude(2.0);
    if (std::abs(a) < 0.2) return coherent_state(a);
    DyadState s = make_cat(a, random_parity());
    if (uniform(0.0, 1.0) < 0.5) {
        const DyadState other = coherent_state(random_amplitude(2.0));
        s = normalized(sum(scaled(s, 0.6), scaled(other, 0.4)));
    }
    return s;
}

} // namespace

TEST(properties, evolution_preserves_trace_hermiticity_and_purity_bound) {
    for (int trial = 0; trial < 200; ++trial) {
        const DyadState s = random_state();
        const CavityParams p = random_params();
        const DyadState e = evolve_state(s, uniform(0.0, 3.0), p);
        ASSERT_NEAR(trace(e).real(), 1.0, 1e-12);
        ASSERT_NEAR(trace(e).imag(), 0.0, 1e-12);
        ASSERT_TRUE(is_hermitian(e, 1e-10));
        ASSERT_LE(purity(e), 1.0 + 1e-12);
        ASSERT_GE(purity(e), 0.0);
        const double parity = parity_expectation(e);
        ASSERT_LE(std::abs(parity), 1.0 + 1e-12);
    }
}

TEST(properties, purity_never_increases_without_pump_reset) {
    // The pump is a displacement, so purity decays exactly as in the unpumped cavity.
    for (int trial = 0; trial < 100; ++trial) {
        const DyadState s = random_state();
        const CavityParams p = random_params();
        CavityParams unpumped = p;
        unpumped.pump_amp = 0.0;
        const double t = uniform(0.0, 2.0);
        ASSERT_NEAR(purity(evolve_state(s, t, p)), purity(evolve_state(s, t, unpumped)), 1e-10);
    }
}

TEST(properties, semigroup) {
    for (int trial = 0; trial < 100; ++trial) {
        const DyadState s = random_state();
        const CavityParams p = random_params();
        const double t1 = uniform(0.0, 1.5);
        const double t2 = uniform(0.0, 1.5);
        const DyadState a = evolve_state(s, t1 + t2, p);
        const DyadState b = evolve_state(evolve_state(s, t1, p), t2, p);
        for (std::size_t k = 0; k < a.size(); ++k) {
            ASSERT_LT(std::abs(a.dyads[k].ket - b.dyads[k].ket), 1e-12);
            ASSERT_LT(std::abs(a.dyads[k].coeff - b.dyads[k].coeff), 1e-10);
        }
    }
}

TEST(properties, wigner_is_real_and_bounded) {
    for (int trial = 0; trial < 100; ++trial) {
        const DyadState s = evolve_state(random_state(), uniform(0.0, 1.0), random_params());
        for (int k = 0; k < 10; ++k) {
            const double w = wigner_point(s, random_amplitude(4.0));
            ASSERT_LE(std::abs(w), 2.0 / M_PI + 1e-12);
        }
    }
}

TEST(properties, detection_branches_partition_the_state) {
    for (int trial = 0; trial < 60; ++trial) {
        const DyadState s = evolve_state(random_state(), uniform(0.0, 1.0), random_params());
        const double pg = branch_probability(s, Outcome::g);
        const double pe = branch_probability(s, Outcome::e);
        ASSERT_NEAR(pg + pe, 1.0, 1e-12);
        const AtomFieldState joint = atom_passage(s);
        ASSERT_NEAR(total_trace(joint), 1.0, 1e-12);
        ASSERT_TRUE(is_hermitian(joint, 1e-10));
        if (pg < 1e-9 || pe < 1e-9) continue;
        const Detection g = project_parity(s, Outcome::g);
        const Detection e = project_parity(s, Outcome::e);
        ASSERT_NEAR(g.probability, pg, 1e-12);
        // g and e blocks add back to the diagonal-in-parity part of rho.
        const std::size_t dim = fock::required_dimension(max_label_magnitude(s));
        const auto rho = fock::dyads_to_fock(s, dim);
        const fock::FockMatrix sum_blocks = pg * fock::dyads_to_fock(g.field, dim) + pe * fock::dyads_to_fock(e.field, dim);
        const fock::FockMatrix dephased = 0.5 * (rho + fock::pi_phase(rho));
        ASSERT_LT((sum_blocks - dephased).cwiseAbs().maxCoeff(), 1e-10);
        ASSERT_NEAR(fock::detect_matrix(rho, Outcome::g).probability, pg, 1e-10);
    }
}

TEST(properties, feedback_flip_is_an_involution_on_the_manifold) {
    for (int trial = 0; trial < 100; ++trial) {
        const Amplitude a = random_amplitude(2.5);
        if (std::abs(a) < 0.3) continue;
        DyadState s;
        const double w = uniform(0.0, 1.0);
        const Complex c = random_amplitude(0.4);
        s.dyads = {{a, a, w}, {-a, -a, 1.0 - w}, {a, -a, c}, {-a, a, std::conj(c)}};
        s = normalized(s);
        if (fock::min_eigenvalue(fock::dyads_to_fock(s, fock::required_dimension(std::abs(a)))) < 0.0) continue;
        const DyadState once = feedback_flip(s, a);
        ASSERT_NEAR(trace(once).real(), 1.0, 1e-12);
        ASSERT_LT(dyad_distance(feedback_flip(once, a), s), 1e-10);
        ASSERT_NEAR(parity_expectation(once), -parity_expectation(s), 1e-10);
    }
}

TEST(properties, engine_matches_oracle_on_random_cases) {
    for (int trial = 0; trial < 6; ++trial) {
        const DyadState s = random_state();
        CavityParams p = random_params();
        p.pump_freq = p.omega0;
        const double t = uniform(0.05, 0.6);
        const std::size_t dim = fock::recommended_dimension(s, t, p);
        const auto oracle = fock::integrate(fock::dyads_to_fock(s, dim), t, p).rho;
        ASSERT_LT(fock::trace_distance(fock::dyads_to_fock(evolve_state(s, t, p), dim), oracle), 1e-8);
    }
}

TEST(properties, characteristic_function_bounds) {
    for (int trial = 0; trial < 100; ++trial) {
        const DyadState s = random_state();
        const CharFn chi = symmetric_char_fn(s);
        ASSERT_NEAR(std::abs(chi(0.0) - 1.0), 0.0, 1e-12);
        const Complex eta = random_amplitude(3.0);
        ASSERT_LE(std::abs(chi(eta)), 1.0 + 1e-12);
        ASSERT_NEAR(std::abs(chi(-eta) - std::conj(chi(eta))), 0.0, 1e-12);
    }
}
