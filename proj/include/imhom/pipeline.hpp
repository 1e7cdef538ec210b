#pragma once

#include <nlohmann/json_fwd.hpp>

#include "imhom/config.hpp"
#include "imhom/homogen.hpp"

namespace imhom {

// Hard gate failure: standing assumptions on the coefficients do not hold
// (exit code 1, before any computation).
struct GateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct PipelineResult {
    std::vector<CheckResult> checks;
    std::string summary_json;      // ordered, deterministic except "timing"
    std::string slices_csv;        // per-slice diagnostics (decay stage)
    std::string convergence_csv;   // epsilon sweep table
    bool all_passed = true;

    // artifacts for callers that keep computing (tests, field dumps)
    std::shared_ptr<CellSide> plus, minus;
    std::shared_ptr<InterfaceResult> interface_result;
    std::shared_ptr<ConvergenceExperiment> experiment;
    CoefficientField field;
};

// Runs the requested stage chain: cell -> interface -> decay -> convergence
// ("all" = everything). Throws GateError when validation fails, ConfigError
// and solver errors propagate; check failures are recorded, not thrown.
PipelineResult run_pipeline(const std::string& command, const RunConfig& cfg, bool verbose);

// Writes summary.json and the CSV tables into the output directory.
void write_outputs(const PipelineResult& result, const std::filesystem::path& outdir,
                   bool dump_fields);

}  // namespace imhom
