// params.hpp: physical constants of the pumped, lossy cavity mode.

#pragma once

#include <complex>

namespace pumpcat {

using Complex = std::complex<double>;

struct CavityParams {
    double omega0{0.0};    // cavity mode frequency [rad/s]
    double gamma{1.0};     // energy damping rate [1/s]
    Complex pump_amp{};    // pump coupling F [rad/s]
    double pump_freq{0.0}; // pump frequency [rad/s]
    double nbar{0.0};      // thermal occupation of the reservoir

    bool resonant() const noexcept { return pump_freq == omega0; }
    double detuning() const noexcept { return pump_freq - omega0; }

    // Resonant, zero-temperature cavity with the given damping and pump.
    static CavityParams resonant_pump(double gamma, Complex pump, double omega0 = 0.0) {
        return CavityParams{omega0, gamma, pump, omega0, 0.0};
    }
};

// Throws InvalidArgument unless gamma > 0, nbar >= 0 and every field is finite.
void validate(const CavityParams& params);

} // namespace pumpcat
