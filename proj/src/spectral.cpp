#include "casimir/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "casimir/stats.hpp"

namespace casimir {

PotentialObject make_dirichlet_disk(Vec2 center, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
    return {{center, radius}, 0.0, true};
}

PotentialObject make_soft_disk(Vec2 center, double radius, double strength) {
    if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
    if (strength <= 0.0) throw std::invalid_argument("potentials must be positive");
    return {{center, radius}, strength, false};
}

namespace {

bool inside(const Disk& d, Vec2 p) {
    const Vec2 e = p - d.center;
    return dot(e, e) <= d.radius * d.radius;
}

bool segment_crosses(const Disk& d, Vec2 a, Vec2 b) {
    const Vec2 e = b - a;
    const Vec2 f = a - d.center;
    const double qa = dot(e, e);
    if (qa == 0.0) return false;
    const double qb = dot(e, f);
    const double qc = dot(f, f) - d.radius * d.radius;
    const double disc = qb * qb - qa * qc;
    if (disc < 0.0) return false;
    const double t = (-qb - std::sqrt(disc)) / qa;  // first entry point
    return t >= 0.0 && t <= 1.0;
}

bool dirichlet_killed(const Disk& d, std::span<const Vec2> path) {
    for (const Vec2& p : path)
        if (inside(d, p)) return true;
    for (std::size_t k = 0; k + 1 < path.size(); ++k)
        if (segment_crosses(d, path[k], path[k + 1])) return true;
    return false;
}

// Trapezoidal occupation time with one midpoint subdivision on segments that
// straddle the boundary.
double occupation_time(const Disk& d, std::span<const Vec2> path, double dt) {
    double occ = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const bool ia = inside(d, path[k]);
        const bool ib = inside(d, path[k + 1]);
        if (ia && ib) {
            occ += dt;
        } else if (ia != ib) {
            const Vec2 m = 0.5 * (path[k] + path[k + 1]);
            occ += dt * 0.25 * (static_cast<int>(ia) + 2 * static_cast<int>(inside(d, m)) +
                                static_cast<int>(ib));
        }
    }
    return occ;
}

void check_soft(const PotentialObject& o) {
    if (!o.dirichlet && o.strength <= 0.0)
        throw std::invalid_argument("potentials must be positive");
}

}  // namespace

double survival_probability(std::span<const Vec2> path, double dt,
                            std::span<const PotentialObject> objects) {
    if (path.empty()) throw std::invalid_argument("empty path");
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    double v = 0.0;
    for (const auto& o : objects) {
        check_soft(o);
        if (o.dirichlet) {
            if (dirichlet_killed(o.shape, path)) return 0.0;
        } else {
            v += o.strength * occupation_time(o.shape, path, dt);
        }
    }
    return std::exp(-v);
}

double kill_all_probability(std::span<const Vec2> path, double dt,
                            std::span<const PotentialObject> objects) {
    if (objects.empty()) throw std::invalid_argument("at least one object required");
    if (objects.size() > 16) throw std::invalid_argument("subset explosion");
    if (path.empty()) throw std::invalid_argument("empty path");
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");

    const int n = static_cast<int>(objects.size());
    std::vector<double> action(n);  // strength * occupation, 0 for Dirichlet
    std::vector<char> killed(n);
    for (int k = 0; k < n; ++k) {
        const auto& o = objects[k];
        check_soft(o);
        if (o.dirichlet) {
            killed[k] = dirichlet_killed(o.shape, path);
            action[k] = 0.0;
        } else {
            killed[k] = 0;
            action[k] = o.strength * occupation_time(o.shape, path, dt);
        }
    }

    const std::uint32_t masks = 1u << n;
    std::vector<double> mask_action(masks, 0.0);
    std::vector<char> mask_killed(masks, 0);
    double sum = 0.0;
    for (std::uint32_t m = 0; m < masks; ++m) {
        if (m != 0) {
            const int low = std::countr_zero(m);
            const std::uint32_t rest = m & (m - 1);
            mask_action[m] = mask_action[rest] + action[low];
            mask_killed[m] = mask_killed[rest] | killed[low];
        }
        const double p = mask_killed[m] ? 0.0 : std::exp(-mask_action[m]);
        sum += (std::popcount(m) % 2 == 0) ? p : -p;
    }

    if (sum < 0.0) {
        if (sum < -1e-12) throw std::runtime_error("inclusion-exclusion inconsistency");
        sum = 0.0;
    } else if (sum > 1.0) {
        if (sum > 1.0 + 1e-12) throw std::runtime_error("inclusion-exclusion inconsistency");
        sum = 1.0;
    }
    return sum;
}

std::vector<std::pair<std::uint32_t, int>> inclusion_exclusion_terms(int s_size) {
    if (s_size < 1) throw std::invalid_argument("subset size must be at least 1");
    if (s_size > 16) throw std::invalid_argument("subset explosion");
    std::vector<std::pair<std::uint32_t, int>> terms;
    const std::uint32_t masks = 1u << s_size;
    terms.reserve(masks);
    for (std::uint32_t m = 0; m < masks; ++m) {
        const int sign = ((s_size + std::popcount(m)) % 2 == 0) ? 1 : -1;
        terms.emplace_back(m, sign);
    }
    return terms;
}

double cancellation_check(std::span<const PotentialObject> objects, std::uint32_t touched_mask,
                          std::span<const Vec2> path, double dt) {
    if (objects.empty()) throw std::invalid_argument("at least one object required");
    if (objects.size() > 16) throw std::invalid_argument("subset explosion");
    if (touched_mask >= (1u << objects.size()))
        throw std::invalid_argument("touched_mask exceeds object count");

    const int n = static_cast<int>(objects.size());
    std::vector<double> action(n);
    std::vector<char> killed(n);
    for (int k = 0; k < n; ++k) {
        const auto& o = objects[k];
        if (o.dirichlet) {
            killed[k] = dirichlet_killed(o.shape, path);
            action[k] = 0.0;
        } else {
            check_soft(o);
            killed[k] = 0;
            action[k] = o.strength * occupation_time(o.shape, path, dt);
        }
    }
    double sum = 0.0;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        double a = 0.0;
        bool dead = false;
        for (int k = 0; k < n; ++k)
            if (m & (1u << k)) {
                a += action[k];
                dead = dead || killed[k];
            }
        const double p = dead ? 0.0 : std::exp(-a);
        sum += (std::popcount(m) % 2 == 0) ? p : -p;
    }
    return sum;
}

SpectralEstimate estimate_irreducible_spectral_density(std::span<const PotentialObject> objects,
                                                       double beta, const EnsembleSpec& spec,
                                                       const SamplingBox& box, int threads) {
    validate(spec);
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    if (objects.empty()) throw std::invalid_argument("at least one object required");
    if (objects.size() > 16) throw std::invalid_argument("subset explosion");
    const double wx = box.hi.x - box.lo.x;
    const double wy = box.hi.y - box.lo.y;
    if (wx <= 0.0 || wy <= 0.0)
        throw std::invalid_argument("sampling box must have positive extent");

    const double pad = 5.0 * std::sqrt(beta);
    const double tol = 1e-9 * (1.0 + std::max(wx, wy));
    for (const auto& o : objects) {
        const Disk& d = o.shape;
        const bool covered = d.center.x - d.radius - pad >= box.lo.x - tol &&
                             d.center.x + d.radius + pad <= box.hi.x + tol &&
                             d.center.y - d.radius - pad >= box.lo.y - tol &&
                             d.center.y + d.radius + pad <= box.hi.y + tol;
        if (!covered) throw std::invalid_argument("sampling box too small");
    }

    const double dt = beta / spec.points_per_loop;
    std::vector<double> parents(spec.loop_count, 0.0);
    parallel_for_index(spec.loop_count, threads, [&](long long i) {
        RandomStream stream = make_loop_stream(spec.seed, i);
        const UnitBridge bridge = generate_unit_bridge(stream, spec.points_per_loop);
        const auto dups = rotated_duplicates(bridge, spec.rotations);
        const Vec2 x{box.lo.x + stream.uniform() * wx, box.lo.y + stream.uniform() * wy};
        double acc = kill_all_probability(rescale_translate(bridge, beta, x), dt, objects);
        for (const auto& d : dups)
            acc += kill_all_probability(rescale_translate(d, beta, x), dt, objects);
        parents[i] = acc / (1.0 + spec.rotations);
    });

    const auto ms = block_mean_stderr(parents);
    const double sign = (objects.size() % 2 == 0) ? 1.0 : -1.0;
    const double scale = wx * wy / (2.0 * std::numbers::pi * beta);
    return {sign * scale * ms.mean, scale * ms.std_error, beta};
}

std::vector<SpectralEstimate> monotonicity_curve(const PotentialObject& obj1,
                                                 const PotentialObject& obj2,
                                                 std::span<const double> separations, double beta,
                                                 const EnsembleSpec& spec, int threads) {
    validate(spec);
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    if (separations.empty()) throw std::invalid_argument("separations must be nonempty");
    for (double s : separations)
        if (!(s > 0.0)) throw std::invalid_argument("objects must be separable by a plane");
    for (std::size_t i = 0; i + 1 < separations.size(); ++i)
        if (separations[i + 1] <= separations[i])
            throw std::invalid_argument("separations must be increasing");

    const double r1 = obj1.shape.radius;
    const double r2 = obj2.shape.radius;
    const double pad = 5.0 * std::sqrt(beta);
    const double d_max = r1 + r2 + separations.back();
    SamplingBox box;
    box.lo = {-(0.5 * d_max + r1 + pad), -(std::max(r1, r2) + pad)};
    box.hi = {0.5 * d_max + r2 + pad, std::max(r1, r2) + pad};

    std::vector<SpectralEstimate> out;
    out.reserve(separations.size());
    for (double sep : separations) {
        const double d = r1 + r2 + sep;
        PotentialObject o1 = obj1;
        PotentialObject o2 = obj2;
        o1.shape.center = {-0.5 * d, 0.0};
        o2.shape.center = {0.5 * d, 0.0};
        const PotentialObject objs[2] = {o1, o2};
        out.push_back(estimate_irreducible_spectral_density(objs, beta, spec, box, threads));
    }
    return out;
}

}  // namespace casimir
