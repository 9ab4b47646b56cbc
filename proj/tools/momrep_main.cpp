#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "momrep/config.hpp"
#include "momrep/errors.hpp"
#include "momrep/runner.hpp"

namespace {

// Exit codes: 0 success, 2 bad invocation or config, 3 numerical failure
// during the run, 4 validation report with failing suites.
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

void print_error(const char* phase, std::string what) {
    const std::string prefix = std::string(phase) + ": ";
    if (what.rfind(prefix, 0) == 0) what.erase(0, prefix.size());
    std::fprintf(stderr, "momrep: %s: %s\n", phase, what.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"equilibrium momentum distributions for fluids, crystals and condensates"};
    app.set_help_flag("--help", "print usage and exit");

    std::string mode_arg;
    std::string config_path;
    std::string out_path;
    std::string format;
    double broaden_sigma = 0.0;

    app.add_option("mode", mode_arg, "fluid | crystal | condensate | wigner | validate")
        ->required();
    app.add_option("--config", config_path, "path to the json run description")->required();
    app.add_option("--out", out_path, "output file (default momrep_<mode>.<ext>)");
    app.add_option("--format", format, "csv or json (overrides the config)");
    app.add_option("--broaden", broaden_sigma,
                   "condensate only: also write a gaussian-broadened raster with this sigma");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        app.exit(help);
        return 0;
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return kExitUsage;
    }

    momrep::config::RunConfig cfg;
    try {
        const momrep::config::RunMode mode = momrep::config::mode_from_string(mode_arg);
        cfg = momrep::config::load_config(config_path);
        if (cfg.mode != mode) {
            throw momrep::ValidationError("config declares mode \"" +
                                          momrep::config::to_string(cfg.mode) +
                                          "\" but the command line asked for \"" + mode_arg +
                                          "\"");
        }
        if (!format.empty() && format != "csv" && format != "json") {
            throw momrep::ValidationError("--format must be csv or json");
        }
        if (broaden_sigma < 0.0) {
            throw momrep::ValidationError("--broaden expects a positive sigma");
        }
        if (broaden_sigma > 0.0 && mode != momrep::config::RunMode::condensate) {
            throw momrep::ValidationError("--broaden applies to the condensate mode only");
        }
    } catch (const momrep::Error& err) {
        print_error("config", err.what());
        return kExitUsage;
    }

    try {
        momrep::cli::RunOverrides overrides;
        overrides.out_path = out_path;
        overrides.format = format;
        overrides.broaden_sigma = broaden_sigma;
        const momrep::cli::RunResult result = momrep::cli::run(cfg, overrides);
        for (const std::string& file : result.files_written) {
            std::fprintf(stdout, "wrote %s\n", file.c_str());
        }
        return result.exit_code;
    } catch (const momrep::Error& err) {
        print_error("run", err.what());
        return kExitNumerical;
    } catch (const std::exception& err) {
        print_error("run", err.what());
        return kExitNumerical;
    }
}
