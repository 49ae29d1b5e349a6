#pragma once

#include "tlft/zeromode.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tlft::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 20240607;

// Parses "1.5", "-0.3+0.2i", "0.2i", "re,im".
Complex parse_complex(const std::string& s);
Json complex_json(Complex z);
Complex complex_from_json(const Json& j);

// Representative parameter points used by `verify` and the acceptance run.
struct Panel {
    std::vector<double> mu;
    // (mu, c) points for the series/contour identity; mu e^{sqrt2 c} must stay moderate
    std::vector<std::pair<double, double>> points;
    std::vector<Complex> one_point;
    std::vector<std::pair<Complex, Complex>> two_point;
    std::pair<Complex, Complex> two_point_degenerate;
    std::pair<double, double> two_point_imaginary;  // (P1, P2)
    std::vector<std::pair<Complex, Complex>> three_point;
    struct Pairing {
        double eps = 0.02;
        double mu = 0.5;
        double radius = 0.25;
        std::vector<double> on_center;
        std::vector<double> off_center;
    } pairing;
};

// Unknown keys are rejected with UsageError.
Panel load_panel(const std::string& path);
std::string default_panel_path();

std::vector<CorrelatorCase> panel_cases(const Panel& p);

struct RegistryEntry {
    std::string operation;
    std::string subcommand;
    std::string invocation;
};
// Every public library operation and one CLI invocation that reaches it.
const std::vector<RegistryEntry>& registry();

// Flattens report["values"] into CSV; complex fields become <key>_re, <key>_im.
std::string to_csv(const Json& report);

// Entry point: argv excludes the program name. Exit code 0 ok, 1 failed check or
// numerical error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tlft::cli
