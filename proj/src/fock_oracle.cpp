#include "pumpcat/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pumpcat/error.hpp"
#include "pumpcat/evolution.hpp"

namespace pumpcat::fock {

namespace {

constexpr double kThermalTail = 1e-12;

Eigen::VectorXcd coherent_vector(Amplitude a, std::size_t dim) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    v(0) = std::exp(-0.5 * std::norm(a));
    for (std::size_t n = 1; n < dim; ++n) {
        v(static_cast<Eigen::Index>(n)) = v(static_cast<Eigen::Index>(n - 1)) * a / std::sqrt(static_cast<double>(n));
    }
    return v;
}

void require_same_dim(const FockMatrix& a, const FockMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream msg;
        msg << "matrices are " << a.rows() << "x" << a.cols() << " and " << b.rows() << "x" << b.cols();
        throw Error(ErrorCode::DimMismatch, msg.str());
    }
}

// sup over [0, t] of |w|, loose enough to cover a detuned drive.
double displacement_bound(double t, const CavityParams& params) {
    if (params.resonant()) return std::abs(coeff_w(t, params));
    const double d = params.detuning();
    return 2.0 * std::abs(params.pump_amp) / std::sqrt(d * d + 0.25 * params.gamma * params.gamma);
}

} // namespace

std::size_t required_dimension(double mu, double nbar) {
    if (!(mu >= 0.0) || !(nbar >= 0.0)) throw Error(ErrorCode::InvalidArgument, "mu and nbar must be nonnegative");
    auto n = static_cast<std::size_t>(std::ceil(mu * mu + 8.0 * mu + 10.0));
    if (nbar > 0.0) n += static_cast<std::size_t>(std::ceil(std::log(kThermalTail) / std::log(nbar / (nbar + 1.0))));
    return n;
}

std::size_t recommended_dimension(const DyadState& state, double t, const CavityParams& params) {
    return required_dimension(max_label_magnitude(state) + displacement_bound(t, params), params.nbar);
}

FockMatrix dyads_to_fock(const DyadState& state, std::size_t dim) {
    const std::size_t need = required_dimension(max_label_magnitude(state));
    if (dim < need) {
        std::ostringstream msg;
        msg << "dimension " << dim << " below the truncation bound " << need;
        throw Error(ErrorCode::TruncationTooSmall, msg.str());
    }
    const auto n = static_cast<Eigen::Index>(dim);
    FockMatrix rho = FockMatrix::Zero(n, n);
    for (const auto& d : state.dyads) {
        rho.noalias() += d.coeff * coherent_vector(d.ket, dim) * coherent_vector(d.bra, dim).adjoint();
    }
    return rho;
}

FockMatrix vacuum(std::size_t dim) { return number_state(0, dim); }

FockMatrix number_state(std::size_t n, std::size_t dim) {
    if (n >= dim) throw Error(ErrorCode::TruncationTooSmall, "number state outside the truncated space");
    const auto d = static_cast<Eigen::Index>(dim);
    FockMatrix rho = FockMatrix::Zero(d, d);
    rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = 1.0;
    return rho;
}

double tail_mass(const FockMatrix& rho) {
    const auto last = rho.rows() - 1;
    return rho(last, last).real();
}

double hermiticity_deviation(const FockMatrix& rho) { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

double min_eigenvalue(const FockMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<FockMatrix> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double max_step(const CavityParams& params) {
    return std::min(1e-3 / params.gamma, 0.1 / (std::abs(params.pump_amp) + params.gamma + std::abs(params.detuning())));
}

FockMatrix lindblad_rhs(const FockMatrix& rho, const CavityParams& params) {
    const Eigen::Index n = rho.rows();
    const Complex i{0.0, 1.0};
    const double delta = -params.detuning();
    const Complex f = params.pump_amp;
    const Complex fc = std::conj(f);
    const double down = params.gamma * (params.nbar + 1.0);
    const double up = params.gamma * params.nbar;

    std::vector<double> sq(static_cast<std::size_t>(n) + 1);
    for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = std::sqrt(static_cast<double>(k));
    auto at = [&](Eigen::Index r, Eigen::Index c) -> Complex {
        return (r < 0 || c < 0 || r >= n || c >= n) ? Complex{} : rho(r, c);
    };

    FockMatrix out(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto m = static_cast<std::size_t>(r);
            const auto k = static_cast<std::size_t>(c);
            const Complex x = rho(r, c);
            const double aad_m = (r + 1 < n) ? static_cast<double>(m + 1) : 0.0;
            const double aad_k = (c + 1 < n) ? static_cast<double>(k + 1) : 0.0;

            // H rho - rho H
            Complex comm = delta * static_cast<double>(static_cast<long>(m) - static_cast<long>(k)) * x;
            comm += f * (sq[m] * at(r - 1, c) - sq[k + 1] * at(r, c + 1));
            comm += fc * (sq[m + 1] * at(r + 1, c) - sq[k] * at(r, c - 1));

            Complex v = -i * comm;
            v += down * (sq[m + 1] * sq[k + 1] * at(r + 1, c + 1) - 0.5 * static_cast<double>(m + k) * x);
            if (up > 0.0) v += up * (sq[m] * sq[k] * at(r - 1, c - 1) - 0.5 * (aad_m + aad_k) * x);
            out(r, c) = v;
        }
    }
    return out;
}

FockMatrix rk4_step(const FockMatrix& rho, double dt, const CavityParams& params) {
    const FockMatrix k1 = lindblad_rhs(rho, params);
    const FockMatrix k2 = lindblad_rhs(rho + 0.5 * dt * k1, params);
    const FockMatrix k3 = lindblad_rhs(rho + 0.5 * dt * k2, params);
    const FockMatrix k4 = lindblad_rhs(rho + dt * k3, params);
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

IntegrationResult integrate(const FockMatrix& rho0, double t, const CavityParams& params,
                            const IntegrationOptions& options) {
    validate(params);
    if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "integration time must be nonnegative");
    if (rho0.rows() != rho0.cols() || rho0.rows() < 2) throw Error(ErrorCode::DimMismatch, "rho0 must be square, N >= 2");
    const double limit = max_step(params);
    const double h_max = options.dt > 0.0 ? options.dt : limit;
    if (h_max > limit * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "dt " << h_max << " exceeds the stability bound " << limit;
        throw Error(ErrorCode::StepTooLarge, msg.str());
    }

    std::vector<double> stops = options.checkpoints;
    for (double s : stops) {
        if (!(s > 0.0) || s > t) throw Error(ErrorCode::InvalidArgument, "checkpoints must lie in (0, t]");
    }
    if (!std::is_sorted(stops.begin(), stops.end())) throw Error(ErrorCode::InvalidArgument, "checkpoints must ascend");
    stops.push_back(t);

    IntegrationResult res;
    res.rho = rho0;
    res.report.dt = h_max;
    double now = 0.0;
    for (std::size_t s = 0; s < stops.size(); ++s) {
        const double span = stops[s] - now;
        const auto steps = static_cast<std::size_t>(std::ceil(span / h_max - 1e-9));
        const double h = steps ? span / static_cast<double>(steps) : 0.0;
        for (std::size_t k = 0; k < steps; ++k) {
            res.rho = rk4_step(res.rho, h, params);
            const double tr = res.rho.trace().real();
            res.report.cumulative_drift += std::abs(tr - 1.0);
            if (res.report.cumulative_drift > options.drift_tol) {
                throw Error(ErrorCode::InconsistentState, "trace drift exceeded tolerance");
            }
            res.rho /= tr;
            res.report.max_hermiticity_deviation =
                std::max(res.report.max_hermiticity_deviation, hermiticity_deviation(res.rho));
            res.rho = 0.5 * (res.rho + res.rho.adjoint()).eval();
            const double tail = tail_mass(res.rho);
            res.report.max_tail_mass = std::max(res.report.max_tail_mass, tail);
            if (tail > options.tail_tol) {
                std::ostringstream msg;
                msg << "tail mass " << tail << " at N = " << res.rho.rows();
                throw Error(ErrorCode::TruncationTooSmall, msg.str());
            }
        }
        res.report.steps += steps;
        now = stops[s];
        if (s + 1 < stops.size()) res.checkpoints.push_back(res.rho);
    }
    res.report.min_eigenvalue = min_eigenvalue(res.rho);
    return res;
}

double trace_distance(const FockMatrix& r1, const FockMatrix& r2) {
    require_same_dim(r1, r2);
    const FockMatrix d = r1 - r2;
    Eigen::SelfAdjointEigenSolver<FockMatrix> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
    return std::clamp(0.5 * es.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

FockMatrix pi_phase(const FockMatrix& rho) {
    FockMatrix out = rho;
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        for (Eigen::Index r = 0; r < rho.rows(); ++r) {
            if ((r + c) % 2) out(r, c) = -out(r, c);
        }
    }
    return out;
}

FockDetection detect_matrix(const FockMatrix& rho, Outcome outcome) {
    // (1 +- P)/2 rho (1 +- P)/2 keeps entries whose indices both have the selected parity.
    const int keep = outcome == Outcome::g ? 0 : 1;
    FockMatrix block = FockMatrix::Zero(rho.rows(), rho.cols());
    for (Eigen::Index c = keep; c < rho.cols(); c += 2) {
        for (Eigen::Index r = keep; r < rho.rows(); r += 2) block(r, c) = rho(r, c);
    }
    const double p = block.trace().real() / rho.trace().real();
    if (!(p >= 1e-300)) throw Error(ErrorCode::ZeroProbabilityBranch, "parity branch has zero weight");
    return {block / block.trace().real(), p};
}

FockMatrix displacement_matrix(Complex eta, std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    if (eta == Complex{}) return FockMatrix::Identity(n, n);
    const double x = std::norm(eta);
    const double log_r = std::log(std::abs(eta));
    const double theta = std::arg(eta);
    FockMatrix out(n, n);
    std::vector<double> lag(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        // L_s^{(k)}(x) for s = 0 .. dim-1-k
        const std::size_t len = dim - k;
        lag[0] = 1.0;
        if (len > 1) lag[1] = 1.0 + static_cast<double>(k) - x;
        for (std::size_t s = 1; s + 1 < len; ++s) {
            const double sd = static_cast<double>(s);
            lag[s + 1] = ((2.0 * sd + 1.0 + static_cast<double>(k) - x) * lag[s] - (sd + static_cast<double>(k)) * lag[s - 1]) /
                         (sd + 1.0);
        }
        const double kd = static_cast<double>(k);
        for (std::size_t s = 0; s < len; ++s) {
            const double sd = static_cast<double>(s);
            const double mag =
                std::exp(0.5 * (std::lgamma(sd + 1.0) - std::lgamma(sd + kd + 1.0)) + kd * log_r - 0.5 * x) * lag[s];
            const auto lo = static_cast<Eigen::Index>(s);
            const auto hi = static_cast<Eigen::Index>(s + k);
            // <s+k|D|s> carries eta^k, <s|D|s+k> carries (-conj(eta))^k
            out(hi, lo) = mag * std::polar(1.0, kd * theta);
            if (k) out(lo, hi) = mag * std::polar(1.0, kd * (std::numbers::pi - theta));
        }
    }
    return out;
}

Complex char_fn_point(const FockMatrix& rho, Complex eta) {
    const FockMatrix d = displacement_matrix(eta, static_cast<std::size_t>(rho.rows()));
    return (rho.transpose().cwiseProduct(d)).sum();
}

double wigner_point(const FockMatrix& rho, Complex zeta) {
    const FockMatrix d = displacement_matrix(2.0 * zeta, static_cast<std::size_t>(rho.rows()));
    // Tr[rho D P] = sum_{m,n} rho_mn D_nm (-1)^m
    Complex acc{};
    for (Eigen::Index m = 0; m < rho.rows(); ++m) {
        const double sign = (m % 2) ? -1.0 : 1.0;
        acc += sign * rho.row(m).transpose().cwiseProduct(d.col(m)).sum();
    }
    return 2.0 / std::numbers::pi * acc.real();
}

Complex mean_amplitude(const FockMatrix& rho) {
    Complex acc{};
    for (Eigen::Index m = 0; m + 1 < rho.rows(); ++m) acc += std::sqrt(static_cast<double>(m + 1)) * rho(m + 1, m);
    return acc;
}

double parity_expectation(const FockMatrix& rho) {
    double acc = 0.0;
    for (Eigen::Index m = 0; m < rho.rows(); ++m) acc += ((m % 2) ? -1.0 : 1.0) * rho(m, m).real();
    return acc;
}

double purity(const FockMatrix& rho) { return rho.cwiseAbs2().sum(); }

} // namespace pumpcat::fock
