// protocol.hpp: Ramsey / dispersive atom sequence through the pumped cavity.
//
// Each atom enters in |e>, gets a pi/2 pulse (|e> -> (|e>+|g>)/sqrt2, |g> -> (-|e>+|g>)/sqrt2),
// imprints exp(-i pi a^dag a) on the field when excited, gets a second pi/2 pulse, and is
// detected. Detection in g leaves the even-parity part of the field, e the odd part.

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "pumpcat/params.hpp"
#include "pumpcat/states.hpp"

namespace pumpcat {

enum class Outcome { g, e };

constexpr char to_char(Outcome o) noexcept { return o == Outcome::g ? 'g' : 'e'; }

// g prepares the even cat (phi = 0), e the odd cat (phi = pi).
constexpr CatParity parity_of(Outcome o) noexcept { return o == Outcome::g ? CatParity::Even : CatParity::Odd; }

// Field operators attached to the atomic dyads |e><e|, |e><g|, |g><e|, |g><g|.
struct AtomFieldState {
    DyadState ee;
    DyadState eg;
    DyadState ge;
    DyadState gg;

    // |e><e| (x) field
    static AtomFieldState excited(const DyadState& field);
};

// trace(ee) + trace(gg)
double total_trace(const AtomFieldState& joint);

// gg, ee Hermitian and ge the adjoint of eg.
bool is_hermitian(const AtomFieldState& joint, double tol = 1e-12);

AtomFieldState ramsey_rotation(const AtomFieldState& joint);
AtomFieldState dispersive_shift(const AtomFieldState& joint);

// R2 . C . R1 applied to |e><e| (x) field.
AtomFieldState atom_passage(const DyadState& field);

struct Detection {
    Outcome outcome{Outcome::g};
    DyadState field;
    double probability{0.0};
};

// Deterministic branch selection. Throws ZeroProbabilityBranch when the branch trace is below 1e-300.
Detection detect(const AtomFieldState& joint, Outcome outcome, const CompactOptions& compaction = {});

// Stochastic variant: outcome g when uniform < P_g (inverse CDF on one draw).
Detection detect(const AtomFieldState& joint, double uniform, const CompactOptions& compaction = {});

// Probability of a detection outcome for a field entering the interferometer: (1 +- <P>)/2.
double branch_probability(const DyadState& field, Outcome outcome);

// Collapsed field (1/4)(P rho P + rho +- P rho +- rho P), normalized and compacted.
// Same map as atom_passage followed by detect, without the joint-state bookkeeping.
Detection project_parity(const DyadState& field, Outcome outcome, const CompactOptions& compaction = {});

// Closed-form probability that the second atom is detected in `second` a delay T after the
// first atom prepared the cat of the given parity (resonant pump, zero temperature).
double conditional_probability(CatParity first, Outcome second, double delay, Amplitude alpha,
                               const CavityParams& params);

// Same quantity through the dyad engine: evolve the cat, pass the atom, take the branch trace.
double conditional_probability_engine(CatParity first, Outcome second, double delay, Amplitude alpha,
                                      const CavityParams& params);

// Swap the even and odd cat components of a state in span{|a>, |-a>} (unitary |E> -> |O>, |O> -> -|E>).
// Throws OutsideCatManifold when more than 1e-6 of the trace lies outside the span.
DyadState feedback_flip(const DyadState& state, Amplitude alpha_ref);

// Parity flip valid for any state: a rho a^dag / Tr(a rho a^dag). On a parity eigenstate inside a
// cat manifold it coincides with feedback_flip.
DyadState flip_parity(const DyadState& state);

struct ProtocolConfig {
    Amplitude alpha{2.23606797749979};
    CavityParams params{};
    double delay{0.1};
    std::size_t n_atoms{2};
    bool feedback{false};
    std::uint64_t seed{0};
    std::size_t n_trajectories{1};
    bool keep_final_states{true};
    CompactOptions compaction{};
};

void validate(const ProtocolConfig& config);

struct DetectionRecord {
    std::size_t atom_index{0}; // 1-based
    Outcome outcome{Outcome::g};
    double probability{0.0};   // probability of the recorded outcome
    double time{0.0};
    bool feedback_applied{false};
};

struct Trajectory {
    std::vector<DetectionRecord> records;
    std::shared_ptr<const DyadState> final_state; // shared between trajectories with identical records
    std::uint64_t seed{0};
    std::size_t index{0};
};

// Counter-based uniform deviate in [0, 1) for (seed, stream, counter).
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept;

// Runs n_trajectories independent atom sequences. Trajectory i draws its k-th outcome from
// counter_uniform(seed, i, k), so results do not depend on evaluation order.
std::vector<Trajectory> run_sequence(const ProtocolConfig& config);

} // namespace pumpcat
