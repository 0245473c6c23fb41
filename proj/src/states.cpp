#include "pumpcat/states.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <unordered_map>

#include "pumpcat/error.hpp"

namespace pumpcat {

namespace {

using LabelKey = std::array<std::int64_t, 4>;

struct LabelKeyHash {
    std::size_t operator()(const LabelKey& k) const noexcept {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL;
        for (auto v : k) {
            h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

std::int64_t quantize(double x, double tol) {
    const double q = std::round(x / tol);
    if (!(std::abs(q) < 9.0e18)) {
        throw Error(ErrorCode::InvalidArgument, "label magnitude too large for merge tolerance");
    }
    return static_cast<std::int64_t>(q);
}

LabelKey key_of(Amplitude ket, Amplitude bra, double tol) {
    return {quantize(ket.real(), tol), quantize(ket.imag(), tol), quantize(bra.real(), tol),
            quantize(bra.imag(), tol)};
}

} // namespace

void validate(const CavityParams& params) {
    const bool finite = std::isfinite(params.omega0) && std::isfinite(params.gamma) &&
                        std::isfinite(params.pump_amp.real()) &&
                        std::isfinite(params.pump_amp.imag()) &&
                        std::isfinite(params.pump_freq) && std::isfinite(params.nbar);
    if (!finite) throw Error(ErrorCode::InvalidArgument, "cavity parameters must be finite");
    if (!(params.gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
    if (params.nbar < 0.0) throw Error(ErrorCode::InvalidArgument, "nbar must be nonnegative");
}

Complex log_overlap(Amplitude alpha, Amplitude beta) {
    return std::conj(beta) * alpha - 0.5 * std::norm(alpha) - 0.5 * std::norm(beta);
}

Complex overlap(Amplitude alpha, Amplitude beta) { return std::exp(log_overlap(alpha, beta)); }

DyadState coherent_state(Amplitude alpha) {
    DyadState s;
    s.dyads.push_back({alpha, alpha, 1.0});
    return s;
}

double cat_norm_sq(Amplitude alpha, CatParity parity) {
    return 2.0 * (1.0 + cos_phi(parity) * std::exp(-2.0 * std::norm(alpha)));
}

DyadState make_cat(Amplitude alpha, CatParity parity) {
    const double n2 = cat_norm_sq(alpha, parity);
    if (!(n2 > 1e-300)) {
        throw Error(ErrorCode::DegenerateCat, "odd cat of a vacuum-like amplitude has zero norm");
    }
    if (alpha == Amplitude{}) return coherent_state(alpha);
    const double c = cos_phi(parity);
    DyadState s;
    s.dyads = {
        {alpha, alpha, 1.0 / n2},
        {-alpha, -alpha, 1.0 / n2},
        {alpha, -alpha, c / n2},
        {-alpha, alpha, c / n2},
    };
    return s;
}

Complex trace(const DyadState& state) {
    Complex acc{};
    for (const auto& d : state.dyads) acc += d.coeff * overlap(d.ket, d.bra);
    return acc;
}

double purity(const DyadState& state) {
    // Tr rho^2 = sum_ij c_i c_j <b_i|a_j><b_j|a_i>
    const auto& ds = state.dyads;
    Complex acc{};
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < ds.size(); ++j) {
            acc += ds[i].coeff * ds[j].coeff *
                   std::exp(log_overlap(ds[j].ket, ds[i].bra) + log_overlap(ds[i].ket, ds[j].bra));
        }
    }
    const double p = acc.real();
    if (p > 1.0 + 1e-8) {
        std::ostringstream msg;
        msg << "purity " << p << " exceeds 1";
        throw Error(ErrorCode::InconsistentState, msg.str());
    }
    return std::clamp(p, 0.0, 1.0);
}

double linear_entropy(const DyadState& state) { return 1.0 - purity(state); }

double linear_entropy_closed_form(Amplitude alpha, CatParity parity, double t, const CavityParams& params) {
    if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "evolution time must be nonnegative");
    const double a2 = std::norm(alpha);
    const double c = cos_phi(parity);
    const double decay = std::exp(-params.gamma * t);
    const double n2 = cat_norm_sq(alpha, parity);
    const double bracket = 1.0 + 4.0 * c * std::exp(-2.0 * a2) + std::exp(-4.0 * a2 * decay) +
                           std::exp(-4.0 * a2 * (-std::expm1(-params.gamma * t))) + std::exp(-4.0 * a2);
    return 1.0 - 2.0 * bracket / (n2 * n2);
}

double parity_expectation(const DyadState& state) {
    Complex acc{};
    for (const auto& d : state.dyads) acc += d.coeff * overlap(-d.ket, d.bra);
    return acc.real();
}

double mean_photon_number(const DyadState& state) {
    Complex acc{};
    for (const auto& d : state.dyads) acc += d.coeff * std::conj(d.bra) * d.ket * overlap(d.ket, d.bra);
    return acc.real();
}

Complex mean_amplitude(const DyadState& state) {
    Complex acc{};
    for (const auto& d : state.dyads) acc += d.coeff * d.ket * overlap(d.ket, d.bra);
    return acc;
}

double max_label_magnitude(const DyadState& state) {
    double m = 0.0;
    for (const auto& d : state.dyads) m = std::max({m, std::abs(d.ket), std::abs(d.bra)});
    return m;
}

DyadState compact(const DyadState& state, const CompactOptions& options) {
    DyadState out;
    out.frame = state.frame;
    out.time = state.time;
    out.dyads.reserve(state.dyads.size());

    std::unordered_map<LabelKey, std::size_t, LabelKeyHash> slot;
    slot.reserve(state.dyads.size());
    for (const auto& d : state.dyads) {
        const auto [it, inserted] = slot.try_emplace(key_of(d.ket, d.bra, options.merge_tol), out.dyads.size());
        if (inserted) {
            out.dyads.push_back(d);
        } else {
            out.dyads[it->second].coeff += d.coeff;
        }
    }
    std::erase_if(out.dyads, [&](const CoherentDyad& d) { return std::abs(d.coeff) < options.prune_tol; });

    if (options.renormalize && !out.dyads.empty()) return normalized(out);
    return out;
}

namespace {

// Describes the first dyad without a Hermitian partner, or returns an empty string.
std::string find_unpaired(const DyadState& state, double tol) {
    constexpr double kKeyTol = 1e-12;
    std::unordered_map<LabelKey, CoherentDyad, LabelKeyHash> agg;
    agg.reserve(state.dyads.size());
    for (const auto& d : state.dyads) {
        auto [it, inserted] = agg.try_emplace(key_of(d.ket, d.bra, kKeyTol), d);
        if (!inserted) it->second.coeff += d.coeff;
    }
    for (const auto& [key, d] : agg) {
        const LabelKey swapped{key[2], key[3], key[0], key[1]};
        const double scale = 1.0 + std::abs(d.coeff);
        Complex partner{};
        if (auto it = agg.find(swapped); it != agg.end()) partner = it->second.coeff;
        if (std::abs(partner - std::conj(d.coeff)) > tol * scale) {
            std::ostringstream msg;
            msg << "dyad ket=" << d.ket << " bra=" << d.bra << " coeff=" << d.coeff
                << " has partner coeff " << partner;
            return msg.str();
        }
    }
    return {};
}

} // namespace

bool is_hermitian(const DyadState& state, double tol) { return find_unpaired(state, tol).empty(); }

void require_hermitian(const DyadState& state, double tol) {
    if (auto msg = find_unpaired(state, tol); !msg.empty()) {
        throw Error(ErrorCode::NonHermitianState, msg);
    }
}

DyadState scaled(const DyadState& state, Complex factor) {
    DyadState out = state;
    for (auto& d : out.dyads) d.coeff *= factor;
    return out;
}

DyadState normalized(const DyadState& state) {
    const double tr = trace(state).real();
    if (!(std::abs(tr) > 1e-300)) {
        throw Error(ErrorCode::ZeroProbabilityBranch, "cannot normalize an operator with zero trace");
    }
    return scaled(state, 1.0 / tr);
}

DyadState sum(const DyadState& a, const DyadState& b) {
    DyadState out = a;
    out.dyads.insert(out.dyads.end(), b.dyads.begin(), b.dyads.end());
    return out;
}

DyadState parity_conjugated(const DyadState& state) {
    DyadState out = state;
    for (auto& d : out.dyads) {
        d.ket = -d.ket;
        d.bra = -d.bra;
    }
    return out;
}

DyadState to_lab(const DyadState& state, double omega0) {
    if (state.frame == Frame::Lab) return state;
    const Complex rot = std::polar(1.0, -omega0 * state.time);
    DyadState out = state;
    for (auto& d : out.dyads) {
        d.ket *= rot;
        d.bra *= rot;
    }
    out.frame = Frame::Lab;
    return out;
}

} // namespace pumpcat
