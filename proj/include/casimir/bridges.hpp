#pragma once

#include <cstdint>
#include <vector>

#include "casimir/geometry.hpp"

namespace casimir {

struct EnsembleSpec {
    long long loop_count = 1000;  // M
    int points_per_loop = 1024;   // N, power of two
    std::uint64_t seed = 0;
    int rotations = 6;  // rotated duplicates per generated bridge
};

void validate(const EnsembleSpec& spec);

std::uint64_t splitmix64(std::uint64_t x);

// Independent substream for one loop index: Gaussian and uniform draws for
// the bridge skeleton, plus the key for midpoint-refinement draws.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id);
    double gauss();
    double uniform();  // in [0, 1)
    std::uint64_t refine_key() const { return refine_key_; }

  private:
    std::uint64_t next_u64();
    std::uint64_t state_;
    std::uint64_t refine_key_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

RandomStream make_loop_stream(std::uint64_t seed, long long loop_index);

// A discretized standard 2D Brownian bridge over unit time, pinned to the
// origin at both ends. Directional extents are evaluated by conditional
// dyadic refinement of the polyline (see extent()).
struct UnitBridge {
    std::vector<Vec2> points;       // N+1 points, points[0] = points[N] = (0,0)
    std::uint64_t refine_key = 0;   // substream key for midpoint draws
    int base_level = 0;             // log2(N)
    int refine_depth = 0;           // extra dyadic levels; 0 = vertex extents
    double rot_c = 1.0;             // rotation applied after generation
    double rot_s = 0.0;

    // (min, max) projections onto a unit direction. Each polyline segment is
    // conditionally a Brownian bridge; segments that could beat the current
    // extremum are bisected with deterministic midpoint draws down to
    // refine_depth levels, which removes the discrete-extrema bias of
    // vertex-only scans.
    Extent extent(Vec2 direction) const;
};

UnitBridge generate_unit_bridge(RandomStream& stream, int n_points);

// Wraps a synthetic polyline as a bridge; extents are vertex-only.
UnitBridge bridge_from_points(std::vector<Vec2> points);

std::vector<Vec2> rescale_translate(const UnitBridge& bridge, double beta, Vec2 x);

// k copies rotated by 2*pi*j/(k+1), j = 1..k; the original is the caller's.
std::vector<UnitBridge> rotated_duplicates(const UnitBridge& bridge, int k);

// refine_depth so that the effective dyadic resolution is 2^-22.
int default_refine_depth(int n_points);

}  // namespace casimir
