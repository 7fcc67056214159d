#include "casimir/bridges.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace casimir {

namespace {

bool power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

int int_log2(int n) { return std::bit_width(static_cast<unsigned>(n)) - 1; }

}  // namespace

void validate(const EnsembleSpec& spec) {
    if (spec.loop_count < 1) throw std::invalid_argument("loops must be at least 1");
    if (spec.points_per_loop < 2) throw std::invalid_argument("points_per_loop must be at least 2");
    if (!power_of_two(spec.points_per_loop))
        throw std::invalid_argument("points_per_loop must be a power of two");
    if (spec.rotations < 0 || spec.rotations > 6)
        throw std::invalid_argument("rotations must be in [0,6]");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id) {
    state_ = splitmix64(splitmix64(seed) ^ stream_id * 0x9e3779b97f4a7c15ULL);
    refine_key_ = splitmix64(state_ ^ 0xd1b54a32d192ed03ULL);
}

std::uint64_t RandomStream::next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::gauss() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

RandomStream make_loop_stream(std::uint64_t seed, long long loop_index) {
    return RandomStream(seed, static_cast<std::uint64_t>(loop_index));
}

int default_refine_depth(int n_points) {
    return std::max(0, 22 - int_log2(n_points));
}

UnitBridge generate_unit_bridge(RandomStream& stream, int n_points) {
    if (n_points < 2) throw std::invalid_argument("points_per_loop must be at least 2");
    if (!power_of_two(n_points)) throw std::invalid_argument("points_per_loop must be a power of two");
    const int n = n_points;
    const double sd = std::sqrt(1.0 / n);
    UnitBridge b;
    b.points.resize(n + 1);
    Vec2 w{0.0, 0.0};
    b.points[0] = {0.0, 0.0};
    for (int k = 1; k <= n; ++k) {
        w = w + Vec2{sd * stream.gauss(), sd * stream.gauss()};
        b.points[k] = w;
    }
    const Vec2 drift = b.points[n];
    for (int k = 1; k < n; ++k) {
        const double t = static_cast<double>(k) / n;
        b.points[k] = b.points[k] - t * drift;
    }
    b.points[n] = {0.0, 0.0};
    b.refine_key = stream.refine_key();
    b.base_level = int_log2(n);
    b.refine_depth = default_refine_depth(n);
    return b;
}

UnitBridge bridge_from_points(std::vector<Vec2> points) {
    if (points.size() < 3) throw std::invalid_argument("points_per_loop must be at least 2");
    const long long n = static_cast<long long>(points.size()) - 1;
    if (!power_of_two(n)) throw std::invalid_argument("points_per_loop must be a power of two");
    if (points.front().x != 0.0 || points.front().y != 0.0 || points.back().x != 0.0 ||
        points.back().y != 0.0)
        throw std::invalid_argument("bridge must start and end at the origin");
    UnitBridge b;
    b.points = std::move(points);
    b.base_level = int_log2(static_cast<int>(n));
    b.refine_depth = 0;
    return b;
}

std::vector<Vec2> rescale_translate(const UnitBridge& bridge, double beta, Vec2 x) {
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    const double s = std::sqrt(beta);
    std::vector<Vec2> path(bridge.points.size());
    for (std::size_t k = 0; k < path.size(); ++k) path[k] = x + s * bridge.points[k];
    return path;
}

std::vector<UnitBridge> rotated_duplicates(const UnitBridge& bridge, int k) {
    if (k < 0 || k > 6) throw std::invalid_argument("rotations must be in [0,6]");
    std::vector<UnitBridge> dups;
    dups.reserve(k);
    for (int j = 1; j <= k; ++j) {
        const double a = 2.0 * std::numbers::pi * j / (k + 1);
        const double c = std::cos(a);
        const double s = std::sin(a);
        UnitBridge d;
        d.points.resize(bridge.points.size());
        for (std::size_t i = 0; i < d.points.size(); ++i)
            d.points[i] = rotate(bridge.points[i], c, s);
        d.refine_key = bridge.refine_key;
        d.base_level = bridge.base_level;
        d.refine_depth = bridge.refine_depth;
        d.rot_c = c * bridge.rot_c - s * bridge.rot_s;
        d.rot_s = s * bridge.rot_c + c * bridge.rot_s;
        dups.push_back(std::move(d));
    }
    return dups;
}

namespace {

// Midpoint draw for the dyadic segment (level_abs, idx); keyed by absolute
// position so that coarse subsamples of one skeleton share their draws.
Vec2 node_gauss(std::uint64_t key, int level_abs, std::uint64_t idx) {
    std::uint64_t k =
        splitmix64(key ^ splitmix64((static_cast<std::uint64_t>(level_abs) << 48) ^
                                    idx * 0x9e3779b97f4a7c15ULL));
    const std::uint64_t a = splitmix64(k);
    const std::uint64_t b = splitmix64(a);
    const double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(ang), r * std::sin(ang)};
}

struct Node {
    double prio;        // potential improvement over the bounds at push time
    double a, b;        // endpoint projections
    int level;          // 0 = whole polyline segment
    std::uint64_t idx;  // dyadic index at base_level + level
};

struct NodeLess {
    bool operator()(const Node& x, const Node& y) const {
        if (x.prio != y.prio) return x.prio < y.prio;
        if (x.level != y.level) return x.level > y.level;
        return x.idx > y.idx;
    }
};

}  // namespace

Extent UnitBridge::extent(Vec2 direction) const {
    if (points.empty()) throw std::invalid_argument("empty path");
    const std::size_t n = points.size() - 1;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> proj(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double s = dot(points[k], direction);
        proj[k] = s;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    if (refine_depth <= 0) return {lo, hi};

    // Draws live in the generation frame; project them onto the back-rotated
    // direction so rotated duplicates reuse the parent's randomness.
    const Vec2 u{rot_c * direction.x + rot_s * direction.y,
                 -rot_s * direction.x + rot_c * direction.y};

    // A segment with endpoint projections a, b over time h beats m > max(a,b)
    // with probability exp(-2 (m-a)(m-b) / h); truncating at e^-18 puts the
    // reachable band at (a+b)/2 +- sqrt(((a-b)/2)^2 + 9h). Best-first
    // expansion keeps the explored tree near the true extrema.
    std::vector<double> reach(refine_depth + 1);
    for (int l = 0; l <= refine_depth; ++l)
        reach[l] = 9.0 * std::exp2(-(base_level + l));
    const auto improvement = [&](const Node& nd) {
        const double mid = 0.5 * (nd.a + nd.b);
        const double half = 0.5 * (nd.a - nd.b);
        const double band = std::sqrt(half * half + reach[nd.level]);
        return std::max(mid + band - hi, lo - (mid - band));
    };

    std::priority_queue<Node, std::vector<Node>, NodeLess> queue;
    for (std::size_t k = 0; k < n; ++k) {
        Node nd{0.0, proj[k], proj[k + 1], 0, k};
        nd.prio = improvement(nd);
        if (nd.prio > 0.0) queue.push(nd);
    }
    while (!queue.empty()) {
        Node nd = queue.top();
        queue.pop();
        if (improvement(nd) <= 0.0) continue;
        if (nd.level >= refine_depth) continue;
        const int child_abs = base_level + nd.level + 1;
        const Vec2 g = node_gauss(refine_key, child_abs, 2 * nd.idx + 1);
        const double mid =
            0.5 * (nd.a + nd.b) + 0.5 * std::exp2(-0.5 * (base_level + nd.level)) * dot(g, u);
        lo = std::min(lo, mid);
        hi = std::max(hi, mid);
        Node left{0.0, nd.a, mid, nd.level + 1, 2 * nd.idx};
        left.prio = improvement(left);
        if (left.prio > 0.0) queue.push(left);
        Node right{0.0, mid, nd.b, nd.level + 1, 2 * nd.idx + 1};
        right.prio = improvement(right);
        if (right.prio > 0.0) queue.push(right);
    }
    return {lo, hi};
}

}  // namespace casimir
