#include <CLI11.hpp>
#include <iostream>

#include "imhom/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"invariant measures and effective tensors for non-divergence elliptic "
                 "operators with a periodic interface"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    bool verbose = false;
    bool dump_fields = false;

    for (const std::string& name : {"cell", "interface", "decay", "convergence", "all"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "config file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_flag("--verbose", verbose, "progress to stderr");
        sub->add_flag("--dump-fields", dump_fields, "write field dumps");
    }

    CLI11_PARSE(app, argc, argv);
    std::string command = app.get_subcommands().front()->get_name();

    try {
        imhom::RunConfig cfg = imhom::parse_config(config_path, command);
        imhom::PipelineResult result = imhom::run_pipeline(command, cfg, verbose);
        std::filesystem::path outdir = out_dir.empty() ? cfg.output : out_dir;
        imhom::write_outputs(result, outdir, dump_fields);

        int failed = 0;
        for (const auto& c : result.checks)
            if (!c.pass) {
                ++failed;
                std::cerr << "check failed: " << c.name << " (measured " << c.measured
                          << ", threshold " << c.threshold << ")\n";
            }
        std::cout << result.checks.size() - failed << "/" << result.checks.size()
                  << " checks passed; summary written to " << (outdir / "summary.json").string()
                  << "\n";
        return failed == 0 ? 0 : 2;
    } catch (const imhom::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const imhom::GateError& e) {
        std::cerr << "validation gate: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
