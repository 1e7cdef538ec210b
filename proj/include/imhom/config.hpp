#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "imhom/fields.hpp"

namespace imhom {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structured key-value config with [sections]; strict: unknown keys abort
// before any computation, every numeric field must be positive.
struct RunConfig {
    // [run]
    int dimension = 2;
    uint64_t seed = 1;
    std::string output = "out";

    // [coefficients]
    std::string preset;  // empty when entries are given explicitly
    std::map<std::string, std::string> entries;  // "plus.a[1][2]" -> expression
    double q_plus = 1.0;

    // [cell]
    int cell_n = 64;
    double cell_tol = 1e-10;

    // [interface]
    int R = 8;
    int n_transverse = 64;
    double interface_tol = 1e-8;
    int r_stability = 0;  // 0: skip the R-doubling study

    // [convergence]
    std::vector<double> epsilons;
    int resolution = 16;  // fine grid: n = resolution / eps
    double convergence_tol = 1e-8;

    // [budget]
    double max_seconds = 600.0;
    long max_unknowns = 4'000'000;

    // ordered echo of every key actually present, for the run summary
    std::vector<std::pair<std::string, std::string>> echo;
};

// Throws ConfigError naming the offending key and line. The command decides
// which sections are required.
RunConfig parse_config(const std::filesystem::path& path, const std::string& command);

// Builds the coefficient field from the preset name or the explicit
// expression entries.
CoefficientField build_field(const RunConfig& cfg);

}  // namespace imhom
