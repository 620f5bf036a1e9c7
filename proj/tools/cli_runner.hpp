#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eprlab::cli {

/// Bad flag values or combinations; exit status 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output could not be written; exit status 1.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string subcommand;
    std::uint64_t seed = 1;
    std::uint64_t samples = 100000;
    std::string model = "p1";
    std::string rule = "deterministic";   // p2 outcome rule: deterministic | probabilistic
    std::string mode = "paper-prediction";
    std::vector<std::pair<double, double>> angles;  // (polar, azimuth) in degrees

    // hydrogen
    std::optional<double> r_max;
    std::optional<std::size_t> points;
    int n_max = 4;

    // epr / commutator-check
    std::optional<double> extent;
    std::optional<std::size_t> grid_points;
    double sigma = 0.5;
    double x0 = 0.0;
    double condition_x = 1.0;
    std::optional<double> condition_p;
    std::string distribution = "position";

    std::string format = "json";
    std::string output;
    unsigned workers = 0;  // never echoed: output must not depend on it
};

inline const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names{"hydrogen",  "commutator-check", "epr",     "singlet-correlation",
                                                "chsh",      "switch",           "untangle"};
    return names;
}

/// Parses "0,90,45,135" (polar angles, azimuth 0) or "90:0,90:45" pairs.
std::vector<std::pair<double, double>> parse_angles(const std::string& text);

/// Checks value ranges and per-subcommand requirements; throws ValidationError.
void validate(const ExperimentConfig& cfg);

/// Runs the experiment and returns the rendered artifact (CSV or JSON text).
std::string execute(const ExperimentConfig& cfg);

/// Full command-line entry point; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eprlab::cli
