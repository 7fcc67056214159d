#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "casimir/bridges.hpp"
#include "casimir/geometry.hpp"
#include "casimir/spectral.hpp"

namespace casimir {

enum class Mode {
    tictactoe_sweep,
    triangle_sweep,
    energy,
    spectral_check,
    monotonicity,
    convergence_study,
};

std::string mode_name(Mode mode);
std::optional<Mode> mode_from_name(const std::string& name);

struct RunConfig {
    Mode mode = Mode::energy;
    EnsembleSpec ensemble{};
    std::string output_path;

    // sweeps
    double ratio_min = 0.2;
    double ratio_max = 5.0;
    int ratio_count = 21;

    // energy
    std::string geometry = "tictactoe";  // "tictactoe" | "triangle"
    double w = 1.0;
    double h = 1.0;
    double base = 1.0;
    double height = 1.0;
    double exact_tol = 1e-10;
    bool analytic = false;  // also write the exact row

    // spectral-check / monotonicity
    double beta = 1.0;
    std::vector<Disk> disks;
    double strength = 0.0;  // 0 marks Dirichlet disks
    std::vector<LineObject> lines;
    double radius = 0.5;
    std::vector<double> separations;

    // convergence-study
    std::vector<int> point_counts = {256, 1024, 4096};
};

// Parses the flat JSON config for the given mode, applying defaults
// (loops=1000, points=1024, rotations=6); the seed has no default.
RunConfig parse_config(const std::string& text, Mode mode);

// Executes the run and writes the CSV plus a JSON sidecar at
// <output_path>.json holding the fully resolved config. Returns the process
// exit status: 0 success, 2 invalid config, 3 numerical failure.
int run(const RunConfig& config, int threads, bool analytic);

int resolve_threads(std::optional<int> cli_threads);

}  // namespace casimir
