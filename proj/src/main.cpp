#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "casimir/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"casimir: irreducible N-body Casimir energies in 2D"};
    std::string mode_arg;
    std::string config_path;
    std::optional<int> threads;
    bool analytic = false;
    app.add_option("mode", mode_arg,
                   "tictactoe-sweep | triangle-sweep | energy | spectral-check | "
                   "monotonicity | convergence-study")
        ->required();
    app.add_option("--config", config_path, "path to the JSON run config")->required();
    app.add_option("--threads", threads, "worker count (default: CASIMIR_THREADS or all cores)");
    app.add_flag("--analytic", analytic, "also write the exact row (energy mode, tictactoe)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const auto mode = casimir::mode_from_name(mode_arg);
    if (!mode) {
        std::cerr << "error: unknown mode " << mode_arg << "\n";
        return 2;
    }
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read config file: " << config_path << "\n";
        return 2;
    }
    std::ostringstream text;
    text << in.rdbuf();

    try {
        const casimir::RunConfig config = casimir::parse_config(text.str(), *mode);
        const int t = casimir::resolve_threads(threads);
        return casimir::run(config, t, analytic);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
