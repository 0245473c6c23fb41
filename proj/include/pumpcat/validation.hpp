// validation.hpp: analytic engine vs closed forms vs Fock oracle, one check per scenario.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pumpcat {

struct CheckResult {
    int id{0};
    std::string name;
    bool pass{false};
    std::string detail; // measured values; no timings, so reports are reproducible
};

struct ValidationOptions {
    std::size_t mc_trajectories{100000};
    std::uint64_t seed{20240601};
};

CheckResult check_fixed_point();
// As stated: distance to |-2i> below 1e-5 at gamma t = 10.
CheckResult check_attractor();
// Attractor check at a time where the residual 2 e^{-gamma t/2} is below tolerance, plus the
// analytic/oracle agreement and the exact size of the residual at gamma t = 10.
CheckResult check_attractor_convergence();
CheckResult check_free_decay();
CheckResult check_pumped_cat();
CheckResult check_wigner();
CheckResult check_entropy();
CheckResult check_conditional_probabilities();
CheckResult check_monte_carlo(const ValidationOptions& options = {});
CheckResult check_thermal_char_fn();

// Two identical Monte Carlo runs serialize to the same bytes.
CheckResult check_monte_carlo_determinism(const ValidationOptions& options = {});

// Full suite run by `pumpcat validate`.
std::vector<CheckResult> run_validation_suite(const ValidationOptions& options = {});

// Fixed-width table, one row per check, followed by a summary line.
std::string format_report(const std::vector<CheckResult>& results);

} // namespace pumpcat
