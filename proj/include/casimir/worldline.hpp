#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "casimir/bridges.hpp"
#include "casimir/geometry.hpp"

namespace casimir {

struct EnergyEstimate {
    double value = 0.0;      // energy in units hbar*c / length
    double std_error = 0.0;  // jackknife over parent loops
    long long loop_count = 0;
    double epsilon = 0.0;  // value * sqrt(enclosed area)
};

// Closed-form per-loop weight for two pairs of parallel lines with gaps w, h:
// s_min^2 (s_max - s_min/3) / sqrt(w h), s = {dx sqrt(h/w), dy sqrt(w/h)}.
double weight_tictactoe(const UnitBridge& bridge, double w, double h);

// Closed-form per-loop weight 2A/(3 beta0^{3/2}) with beta0 from
// minimal_scale on the three triangle lines.
double weight_triangle(const UnitBridge& bridge, const IsoTriangle& tri);

// Quadrature weight: integral of beta^{-5/2} support_area over
// [beta0, infinity), log-spaced composite Simpson on [beta0, 1e4*beta0] plus
// an analytic tail from the exact eventually-quadratic growth of the slab
// intersection area in sqrt(beta).
double weight_numeric(const UnitBridge& bridge, const Configuration& config);

EnergyEstimate estimate_energy(const Configuration& config, const EnsembleSpec& spec,
                               int threads = 1);

using SweepFamily = std::variant<TicTacToe, IsoTriangle>;

// One estimate per aspect ratio at fixed enclosed area 1, sharing the loop
// ensemble across ratios (common random numbers).
std::vector<std::pair<double, EnergyEstimate>> sweep(const SweepFamily& family,
                                                     const std::vector<double>& ratios,
                                                     const EnsembleSpec& spec,
                                                     int threads = 1);

// Shared-skeleton discretization study: bridges are generated at the finest
// point count and subsampled for the coarser ones, so successive estimates
// differ by discretization bias rather than sampling noise.
std::vector<std::pair<int, EnergyEstimate>> convergence_study(
    double w, double h, const std::vector<int>& point_counts, const EnsembleSpec& spec,
    int threads = 1);

}  // namespace casimir
