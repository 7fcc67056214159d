#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "casimir/bridges.hpp"
#include "casimir/geometry.hpp"

namespace casimir {

struct Disk {
    Vec2 center;
    double radius = 1.0;
};

// A positive soft potential of constant strength on a disk, or a Dirichlet
// disk (infinite strength).
struct PotentialObject {
    Disk shape;
    double strength = 0.0;
    bool dirichlet = false;
};

PotentialObject make_dirichlet_disk(Vec2 center, double radius);
PotentialObject make_soft_disk(Vec2 center, double radius, double strength);

struct SpectralEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double beta = 0.0;
};

// exp(-sum_k strength_k * occupation_k) with trapezoidal occupation times
// (one level of segment subdivision where a vertex pair straddles a
// boundary); 0 if the path touches any Dirichlet object.
double survival_probability(std::span<const Vec2> path, double dt,
                            std::span<const PotentialObject> objects);

// Alternating subset sum sum_{r subset s} (-1)^{|r|} p_r = probability the
// path is killed by every object in s.
double kill_all_probability(std::span<const Vec2> path, double dt,
                            std::span<const PotentialObject> objects);

// All 2^{s_size} subset masks with sign (-1)^{s_size} (-1)^{|r|}.
std::vector<std::pair<std::uint32_t, int>> inclusion_exclusion_terms(int s_size);

struct SamplingBox {
    Vec2 lo;
    Vec2 hi;
};

// Monte Carlo estimate of the irreducible spectral density
// (-1)^{|s|} * integral dx P[x;beta] / (2 pi beta), sampling anchor points
// uniformly in the box; the box must cover every object inflated by
// 5*sqrt(beta) per side.
SpectralEstimate estimate_irreducible_spectral_density(std::span<const PotentialObject> objects,
                                                       double beta, const EnsembleSpec& spec,
                                                       const SamplingBox& box, int threads = 1);

// Raw alternating sum of survival probabilities for one path; exactly 0 (up
// to floating cancellation) whenever the path misses at least one object.
// touched_mask records which objects the test geometry makes the path touch.
double cancellation_check(std::span<const PotentialObject> objects, std::uint32_t touched_mask,
                          std::span<const Vec2> path, double dt);

// phi_12(beta) for two objects re-centered on the x-axis with the given
// surface gaps, one estimate per gap, sharing bridges and anchor points
// across gaps (common random numbers).
std::vector<SpectralEstimate> monotonicity_curve(const PotentialObject& obj1,
                                                 const PotentialObject& obj2,
                                                 std::span<const double> separations, double beta,
                                                 const EnsembleSpec& spec, int threads = 1);

}  // namespace casimir
