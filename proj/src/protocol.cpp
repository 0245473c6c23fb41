#include "pumpcat/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>

#include "pumpcat/error.hpp"
#include "pumpcat/evolution.hpp"

namespace pumpcat {

namespace {

constexpr double kMinBranchTrace = 1e-300;
constexpr double kManifoldTol = 1e-6;

// Weighted operator sum, merged but not renormalized.
DyadState combine(std::initializer_list<std::pair<double, const DyadState*>> terms, const CompactOptions& opts) {
    DyadState out;
    std::size_t total = 0;
    for (const auto& [w, s] : terms) total += s->dyads.size();
    out.dyads.reserve(total);
    bool first = true;
    for (const auto& [w, s] : terms) {
        if (first) {
            out.frame = s->frame;
            out.time = s->time;
            first = false;
        }
        for (const auto& d : s->dyads) out.dyads.push_back({d.ket, d.bra, w * d.coeff});
    }
    CompactOptions merge_only = opts;
    merge_only.renormalize = false;
    return compact(out, merge_only);
}

DyadState negate_kets(const DyadState& s) {
    DyadState out = s;
    for (auto& d : out.dyads) d.ket = -d.ket;
    return out;
}

DyadState negate_bras(const DyadState& s) {
    DyadState out = s;
    for (auto& d : out.dyads) d.bra = -d.bra;
    return out;
}

DyadState empty_like(const DyadState& s) {
    DyadState out;
    out.frame = s.frame;
    out.time = s.time;
    return out;
}

double sign_of(Outcome o) { return o == Outcome::g ? 1.0 : -1.0; }

std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

AtomFieldState AtomFieldState::excited(const DyadState& field) {
    return {field, empty_like(field), empty_like(field), empty_like(field)};
}

double total_trace(const AtomFieldState& joint) { return trace(joint.ee).real() + trace(joint.gg).real(); }

bool is_hermitian(const AtomFieldState& joint, double tol) {
    if (!is_hermitian(joint.ee, tol) || !is_hermitian(joint.gg, tol)) return false;
    // ge must equal eg^dagger: eg plus the adjoint-negated ge has to vanish.
    DyadState adj;
    adj.dyads.reserve(joint.ge.size());
    for (const auto& d : joint.ge.dyads) adj.dyads.push_back({d.bra, d.ket, -std::conj(d.coeff)});
    const DyadState diff = combine({{1.0, &joint.eg}, {1.0, &adj}}, CompactOptions{1e-12, 0.0, false});
    for (const auto& d : diff.dyads) {
        if (std::abs(d.coeff) > tol) return false;
    }
    return true;
}

AtomFieldState ramsey_rotation(const AtomFieldState& j) {
    // M' = U M U^dagger with U = (1/sqrt2) [[1, -1], [1, 1]] in the (e, g) basis.
    const CompactOptions opts{1e-12, 0.0, false};
    AtomFieldState out;
    out.ee = combine({{0.5, &j.ee}, {-0.5, &j.eg}, {-0.5, &j.ge}, {0.5, &j.gg}}, opts);
    out.eg = combine({{0.5, &j.ee}, {0.5, &j.eg}, {-0.5, &j.ge}, {-0.5, &j.gg}}, opts);
    out.ge = combine({{0.5, &j.ee}, {-0.5, &j.eg}, {0.5, &j.ge}, {-0.5, &j.gg}}, opts);
    out.gg = combine({{0.5, &j.ee}, {0.5, &j.eg}, {0.5, &j.ge}, {0.5, &j.gg}}, opts);
    return out;
}

AtomFieldState dispersive_shift(const AtomFieldState& j) {
    return {parity_conjugated(j.ee), negate_kets(j.eg), negate_bras(j.ge), j.gg};
}

AtomFieldState atom_passage(const DyadState& field) {
    return ramsey_rotation(dispersive_shift(ramsey_rotation(AtomFieldState::excited(field))));
}

Detection detect(const AtomFieldState& joint, Outcome outcome, const CompactOptions& compaction) {
    const DyadState& block = outcome == Outcome::g ? joint.gg : joint.ee;
    const double p = trace(block).real();
    if (!(p >= kMinBranchTrace)) {
        throw Error(ErrorCode::ZeroProbabilityBranch, std::string("branch ") + to_char(outcome) + " has zero trace");
    }
    CompactOptions opts = compaction;
    opts.renormalize = true;
    return {outcome, compact(block, opts), std::min(p, 1.0)};
}

Detection detect(const AtomFieldState& joint, double uniform, const CompactOptions& compaction) {
    const double total = total_trace(joint);
    const double pg = trace(joint.gg).real() / total;
    return detect(joint, uniform < pg ? Outcome::g : Outcome::e, compaction);
}

double branch_probability(const DyadState& field, Outcome outcome) {
    const double p = 0.5 * (1.0 + sign_of(outcome) * parity_expectation(field) / trace(field).real());
    return std::clamp(p, 0.0, 1.0);
}

Detection project_parity(const DyadState& field, Outcome outcome, const CompactOptions& compaction) {
    const double s = sign_of(outcome);
    const DyadState p_rho_p = parity_conjugated(field);
    const DyadState p_rho = negate_kets(field);
    const DyadState rho_p = negate_bras(field);
    CompactOptions merge_only = compaction;
    merge_only.renormalize = false;
    const DyadState block =
        combine({{0.25, &p_rho_p}, {0.25, &field}, {0.25 * s, &p_rho}, {0.25 * s, &rho_p}}, merge_only);
    const double p = trace(block).real() / trace(field).real();
    if (!(p >= kMinBranchTrace)) {
        throw Error(ErrorCode::ZeroProbabilityBranch, std::string("branch ") + to_char(outcome) + " has zero trace");
    }
    return {outcome, normalized(block), std::min(p, 1.0)};
}

double conditional_probability(CatParity first, Outcome second, double delay, Amplitude alpha,
                               const CavityParams& params) {
    if (!(delay >= 0.0)) throw Error(ErrorCode::NegativeTime, "delay must be nonnegative");
    const double a2 = std::norm(alpha);
    const double c = cos_phi(first);
    const double u = std::exp(-0.5 * params.gamma * delay);
    const Complex w = coeff_w(delay, params);
    const Complex aw = alpha * std::conj(w);
    const double diag = std::exp(-2.0 * a2 * u * u) * std::cosh(4.0 * u * aw.real());
    const double cross = c * std::exp(-2.0 * a2 * (-std::expm1(-params.gamma * delay))) * std::cos(4.0 * u * aw.imag());
    const double parity = std::exp(-2.0 * std::norm(w)) / (1.0 + c * std::exp(-2.0 * a2)) * (diag + cross);
    return 0.5 * (1.0 + sign_of(second) * parity);
}

double conditional_probability_engine(CatParity first, Outcome second, double delay, Amplitude alpha,
                                      const CavityParams& params) {
    const DyadState evolved = evolve_state(make_cat(alpha, first), delay, params);
    const AtomFieldState joint = atom_passage(evolved);
    const DyadState& block = second == Outcome::g ? joint.gg : joint.ee;
    return trace(block).real() / total_trace(joint);
}

DyadState feedback_flip(const DyadState& state, Amplitude alpha_ref) {
    const double x = std::exp(-2.0 * std::norm(alpha_ref));
    const double n_even = std::sqrt(2.0 * (1.0 + x));
    const double n_odd_sq = 2.0 * (1.0 - x);
    if (!(n_odd_sq > 1e-300)) {
        throw Error(ErrorCode::DegenerateCat, "reference amplitude too small to define an odd cat");
    }
    const double n_odd = std::sqrt(n_odd_sq);

    // <E|v> and <O|v> for a coherent |v>
    auto proj = [&](Amplitude v) {
        const Complex plus = overlap(v, alpha_ref);
        const Complex minus = overlap(v, -alpha_ref);
        return std::array<Complex, 2>{(plus + minus) / n_even, (plus - minus) / n_odd};
    };

    // M_ij = <i|rho|j>, i, j in {E, O}
    std::array<std::array<Complex, 2>, 2> m{};
    for (const auto& d : state.dyads) {
        const auto l = proj(d.ket);
        const auto r = proj(d.bra);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) m[i][j] += d.coeff * l[i] * std::conj(r[j]);
        }
    }
    const double tr = trace(state).real();
    const double inside = (m[0][0] + m[1][1]).real();
    if (!(std::abs(tr - inside) <= kManifoldTol * std::abs(tr))) {
        throw Error(ErrorCode::OutsideCatManifold, "state has weight outside span{|a>, |-a>}");
    }

    const std::array<std::array<Complex, 2>, 2> flipped{{{m[1][1], -m[1][0]}, {-m[0][1], m[0][0]}}};

    // |E> = (|a> + |-a>)/N+, |O> = (|a> - |-a>)/N-: component of basis vector i on label sign s.
    const std::array<std::array<double, 2>, 2> comp{{{1.0 / n_even, 1.0 / n_even}, {1.0 / n_odd, -1.0 / n_odd}}};
    const std::array<Amplitude, 2> label{alpha_ref, -alpha_ref};

    DyadState out;
    out.frame = state.frame;
    out.time = state.time;
    for (int s = 0; s < 2; ++s) {
        for (int sp = 0; sp < 2; ++sp) {
            Complex c{};
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) c += flipped[i][j] * comp[i][s] * comp[j][sp];
            }
            out.dyads.push_back({label[s], label[sp], c});
        }
    }
    return normalized(compact(out, CompactOptions{1e-12, 0.0, false}));
}

DyadState flip_parity(const DyadState& state) {
    DyadState out = state;
    for (auto& d : out.dyads) d.coeff *= d.ket * std::conj(d.bra);
    const double tr = trace(out).real();
    if (!(tr > kMinBranchTrace)) {
        throw Error(ErrorCode::ZeroProbabilityBranch, "photon subtraction from a vacuum-like state");
    }
    return scaled(out, 1.0 / tr);
}

void validate(const ProtocolConfig& config) {
    validate(config.params);
    if (!std::isfinite(config.alpha.real()) || !std::isfinite(config.alpha.imag())) {
        throw Error(ErrorCode::InvalidArgument, "alpha must be finite");
    }
    if (!(config.delay >= 0.0)) throw Error(ErrorCode::NegativeTime, "delay must be nonnegative");
    if (config.n_atoms < 1) throw Error(ErrorCode::InvalidArgument, "need at least one atom");
    if (config.n_trajectories < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trajectory");
    if (config.params.nbar > 0.0) {
        throw Error(ErrorCode::ThermalNotSupported, "atom sequences run at zero temperature only");
    }
    if (!config.params.resonant()) {
        throw Error(ErrorCode::InvalidArgument, "atom sequences assume a resonant pump");
    }
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept {
    const std::uint64_t bits = mix64(mix64(mix64(seed) ^ stream) ^ counter);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

namespace {

// Post-detection field shared by every trajectory with the same outcome prefix.
struct Node {
    std::shared_ptr<const DyadState> field;
    Outcome target{Outcome::g};
    std::array<std::optional<std::size_t>, 2> child{};
};

} // namespace

std::vector<Trajectory> run_sequence(const ProtocolConfig& config) {
    validate(config);
    const std::size_t n = config.n_trajectories;

    std::vector<Trajectory> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i].seed = config.seed;
        out[i].index = i;
        out[i].records.reserve(config.n_atoms);
    }

    // Atom 1 turns the coherent field into a cat and fixes the target parity.
    std::vector<Node> level;
    std::vector<std::size_t> at(n, 0);
    {
        const DyadState field = coherent_state(config.alpha);
        const double pg = branch_probability(field, Outcome::g);
        for (std::size_t i = 0; i < n; ++i) {
            const Outcome o = counter_uniform(config.seed, i, 0) < pg ? Outcome::g : Outcome::e;
            const auto it = std::find_if(level.begin(), level.end(), [o](const Node& nd) { return nd.target == o; });
            if (it == level.end()) {
                auto det = project_parity(field, o, config.compaction);
                level.push_back({std::make_shared<const DyadState>(std::move(det.field)), o, {}});
                at[i] = level.size() - 1;
            } else {
                at[i] = static_cast<std::size_t>(it - level.begin());
            }
            out[i].records.push_back({1, o, o == Outcome::g ? pg : 1.0 - pg, 0.0, false});
        }
    }

    for (std::size_t atom = 2; atom <= config.n_atoms; ++atom) {
        const double time = static_cast<double>(atom - 1) * config.delay;
        std::vector<Node> next;
        std::vector<std::optional<DyadState>> evolved(level.size());
        std::vector<double> pg(level.size(), 0.0);

        for (std::size_t i = 0; i < n; ++i) {
            Node& node = level[at[i]];
            auto& ev = evolved[at[i]];
            if (!ev) {
                ev = evolve_state(*node.field, config.delay, config.params);
                pg[at[i]] = branch_probability(*ev, Outcome::g);
            }
            const double p = pg[at[i]];
            const Outcome o = counter_uniform(config.seed, i, atom - 1) < p ? Outcome::g : Outcome::e;
            const int k = o == Outcome::g ? 0 : 1;
            const bool flip = config.feedback && o != node.target;
            if (!node.child[k]) {
                auto det = project_parity(*ev, o, config.compaction);
                DyadState field = flip ? flip_parity(det.field) : std::move(det.field);
                next.push_back({std::make_shared<const DyadState>(std::move(field)), node.target, {}});
                node.child[k] = next.size() - 1;
            }
            at[i] = *node.child[k];
            out[i].records.push_back({atom, o, k == 0 ? p : 1.0 - p, time, flip});
        }
        level = std::move(next);
    }

    if (config.keep_final_states) {
        for (std::size_t i = 0; i < n; ++i) out[i].final_state = level[at[i]].field;
    }
    return out;
}

} // namespace pumpcat
