// cli.hpp: command-line front end. Exit codes: 0 ok, 1 numeric failure, 2 usage, 3 validation failure.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pumpcat/params.hpp"
#include "pumpcat/phase_space.hpp"
#include "pumpcat/serialization.hpp"
#include "pumpcat/states.hpp"

namespace pumpcat::cli {

enum class Command { wigner, entropy, probs, montecarlo, evolve, validate };

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse requested --help; text is the help screen.
struct HelpRequested {
    std::string text;
};

// Times are in the same units as 1/gamma; CSV columns report gamma * t.
struct RunConfig {
    Command command{Command::validate};
    double alpha_sq{5.0};
    double alpha_arg{0.0};
    Complex pump{1.0, 0.0};
    bool pump_lock{false};
    double gamma{1.0};
    double omega0{0.0};
    std::optional<double> pump_freq; // resonant when unset
    double nbar{0.0};
    CatParity parity{CatParity::Even};
    double time{0.0};
    std::vector<double> times{0.0, 1.0};
    double tmax{10.0};
    std::size_t samples{200};
    std::vector<double> pumps{1.0};
    std::size_t atoms{2};
    double delay{0.1};
    std::size_t trajectories{1000};
    std::uint64_t seed{0};
    bool feedback{false};
    bool omit_final_state{false};
    GridSpec grid{};
    std::optional<std::string> out;

    Amplitude alpha() const;
    // Physical parameters with the pump amplitude resolved (lock, or the given F).
    CavityParams params() const;
    CavityParams params_for_pump(Complex f) const;
};

// "re_min:re_max:im_min:im_max:NxM"
GridSpec parse_grid(const std::string& text);
std::string format_grid(const GridSpec& grid);

// Full resolved configuration; the output path is left out so reruns to another path match.
Json to_json(const RunConfig& config);

// Apply JSON keys (flag names with '_' for '-') onto config. Unknown keys throw UsageError.
void apply_json(const Json& j, RunConfig& config);

// Throws UsageError on bad values, HelpRequested for --help.
RunConfig parse_config(const std::vector<std::string>& args);

// Executes one command. Files go to config.out (stdout when unset); diagnostics to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_config + run with exceptions mapped to exit codes.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "_F0.5" inserted before the extension of path.
std::string suffixed_path(const std::string& path, double pump);

} // namespace pumpcat::cli
