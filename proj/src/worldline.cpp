#include "casimir/worldline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "casimir/stats.hpp"

namespace casimir {

namespace {

// -(-1)^N / (2 (2 pi)^{3/2})
double energy_coefficient(std::size_t n_objects) {
    const double c = 0.5 / std::pow(2.0 * std::numbers::pi, 1.5);
    return (n_objects % 2 == 0) ? -c : c;
}

double weight_from_gaps(double dx, double dy, double w, double h) {
    const double sx = dx * std::sqrt(h / w);
    const double sy = dy * std::sqrt(w / h);
    const double smin = std::min(sx, sy);
    const double smax = std::max(sx, sy);
    return smin * smin * (smax - smin / 3.0) / std::sqrt(w * h);
}

void guard_common_point(const Configuration& config) {
    const auto cp = common_point_check(config.lines);
    double scale = 1.0;
    for (const auto& l : config.lines) scale = std::max(scale, std::abs(l.offset));
    if (cp.max_residual <= 1e-9 * scale)
        throw std::runtime_error("divergent weight: objects share a common point");
}

// For a triangle's inward normals sum_i d_i(x)/h_i = 1 identically (h_i =
// altitude to edge i), so the touching scale is exactly
// sigma* = 1 / sum_i |m_i|/h_i; seed the bisection with that bracket.
double triangle_beta0(const Configuration& config, std::span<const Extent> extents,
                      const double (&altitudes)[3]) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += std::max(0.0, -extents[i].min) / altitudes[i];
    if (!(s > 0.0)) return minimal_scale_from_extents(config.lines, extents);
    const double beta_star = 1.0 / (s * s);
    return minimal_scale_from_extents(config.lines, extents, beta_star * (1.0 - 1e-9),
                                      beta_star * (1.0 + 1e-9));
}

void triangle_altitudes(const IsoTriangle& tri, double (&altitudes)[3]) {
    const double area2 = tri.base * tri.height;  // 2A
    const double slant = std::sqrt(0.25 * tri.base * tri.base + tri.height * tri.height);
    altitudes[0] = tri.height;
    altitudes[1] = area2 / slant;
    altitudes[2] = area2 / slant;
}

}  // namespace

double weight_tictactoe(const UnitBridge& bridge, double w, double h) {
    if (w <= 0.0 || h <= 0.0) throw std::invalid_argument("w and h must be positive");
    const Extent ex = bridge.extent({1.0, 0.0});
    const Extent ey = bridge.extent({0.0, 1.0});
    const double dx = ex.max - ex.min;
    const double dy = ey.max - ey.min;
    if (!(dx > 0.0) || !(dy > 0.0)) throw std::invalid_argument("degenerate loop");
    return weight_from_gaps(dx, dy, w, h);
}

double weight_triangle(const UnitBridge& bridge, const IsoTriangle& tri) {
    const Configuration config = make_triangle(tri);
    std::vector<Extent> extents;
    extents.reserve(3);
    for (const auto& l : config.lines) extents.push_back(bridge.extent(l.normal));
    double altitudes[3];
    triangle_altitudes(tri, altitudes);
    const double beta0 = triangle_beta0(config, extents, altitudes);
    const double area = 0.5 * tri.base * tri.height;
    return 2.0 * area / (3.0 * beta0 * std::sqrt(beta0));
}

double weight_numeric(const UnitBridge& bridge, const Configuration& config) {
    if (config.lines.size() < 2) throw std::invalid_argument("at least two objects required");
    guard_common_point(config);

    std::vector<Extent> extents;
    extents.reserve(config.lines.size());
    for (const auto& l : config.lines) extents.push_back(bridge.extent(l.normal));
    const double beta0 = minimal_scale_from_extents(config.lines, extents);

    const double betac = 1e4 * beta0;
    const int n = 1024;  // Simpson intervals in log beta
    const double t0 = std::log(beta0);
    const double dt = std::log(betac / beta0) / n;
    // integrand in t = log beta: beta^{-5/2} A(beta) * beta
    const auto f = [&](double t) {
        const double beta = std::exp(t);
        const double area = support_area_from_extents(config.lines, extents, beta);
        return area * std::pow(beta, -1.5);
    };
    double sum = f(t0) + f(t0 + n * dt);
    for (int i = 1; i < n; ++i) sum += f(t0 + i * dt) * (i % 2 == 1 ? 4.0 : 2.0);
    const double body = sum * dt / 3.0;

    // Beyond the last combinatorial change of the slab intersection the area
    // is exactly quadratic in sigma = sqrt(beta); fit it and integrate the
    // tail analytically.
    const double sc = std::sqrt(betac);
    const double s1 = 0.8 * sc, s2 = 0.9 * sc, s3 = sc;
    const double a1 = support_area_from_extents(config.lines, extents, s1 * s1);
    const double a2 = support_area_from_extents(config.lines, extents, s2 * s2);
    const double a3 = support_area_from_extents(config.lines, extents, s3 * s3);
    const double d21 = (a2 - a1) / (s2 - s1);
    const double d32 = (a3 - a2) / (s3 - s2);
    const double q2 = (d32 - d21) / (s3 - s1);
    const double q1 = d21 - q2 * (s1 + s2);
    const double q0 = a1 - s1 * (q1 + q2 * s1);
    const double tail = q2 * 2.0 / std::sqrt(betac) + q1 / betac +
                        q0 * (2.0 / 3.0) / (betac * std::sqrt(betac));
    return body + tail;
}

namespace {

template <typename WeightFn>
void run_parents(const EnsembleSpec& spec, int threads, std::vector<double>& out,
                 const WeightFn& weight) {
    out.assign(spec.loop_count, 0.0);
    parallel_for_index(spec.loop_count, threads, [&](long long i) {
        RandomStream stream = make_loop_stream(spec.seed, i);
        const UnitBridge bridge = generate_unit_bridge(stream, spec.points_per_loop);
        const auto dups = rotated_duplicates(bridge, spec.rotations);
        double acc = weight(bridge);
        for (const auto& d : dups) acc += weight(d);
        out[i] = acc / (1.0 + spec.rotations);
    });
}

}  // namespace

EnergyEstimate estimate_energy(const Configuration& config, const EnsembleSpec& spec,
                               int threads) {
    validate(spec);
    if (config.lines.size() < 2) throw std::invalid_argument("at least two objects required");
    if (config.kind == Configuration::Kind::generic) guard_common_point(config);

    std::vector<double> parents;
    switch (config.kind) {
        case Configuration::Kind::tictactoe:
            run_parents(spec, threads, parents, [&](const UnitBridge& b) {
                return weight_tictactoe(b, config.ttt.w, config.ttt.h);
            });
            break;
        case Configuration::Kind::triangle:
            run_parents(spec, threads, parents, [&](const UnitBridge& b) {
                return weight_triangle(b, config.tri);
            });
            break;
        case Configuration::Kind::generic:
            run_parents(spec, threads, parents,
                        [&](const UnitBridge& b) { return weight_numeric(b, config); });
            break;
    }
    for (double p : parents)
        if (p < 0.0) throw std::logic_error("negative loop weight");

    const auto ms = block_mean_stderr(parents);
    const double coeff = energy_coefficient(config.lines.size());
    EnergyEstimate est;
    est.value = coeff * ms.mean;
    est.std_error = std::abs(coeff) * ms.std_error;
    est.loop_count = spec.loop_count;
    est.epsilon = est.value * std::sqrt(config.enclosed_area());
    return est;
}

std::vector<std::pair<double, EnergyEstimate>> sweep(const SweepFamily& family,
                                                     const std::vector<double>& ratios,
                                                     const EnsembleSpec& spec, int threads) {
    validate(spec);
    if (ratios.empty()) throw std::invalid_argument("ratios must be nonempty");
    for (double r : ratios)
        if (!(r > 0.0)) throw std::invalid_argument("ratios must be positive");

    const std::size_t nr = ratios.size();
    const bool is_ttt = std::holds_alternative<TicTacToe>(family);

    // Unit enclosed area throughout: ttt (w, h) = (sqrt r, 1/sqrt r);
    // triangle (base, height) = (sqrt 2r, sqrt 2/r).
    std::vector<Configuration> tri_configs;
    if (!is_ttt) {
        tri_configs.reserve(nr);
        for (double r : ratios)
            tri_configs.push_back(make_triangle({std::sqrt(2.0 * r), std::sqrt(2.0 / r)}));
    }

    std::vector<std::vector<double>> parents(nr);
    for (auto& v : parents) v.assign(spec.loop_count, 0.0);

    parallel_for_index(spec.loop_count, threads, [&](long long i) {
        RandomStream stream = make_loop_stream(spec.seed, i);
        const UnitBridge bridge = generate_unit_bridge(stream, spec.points_per_loop);
        auto dups = rotated_duplicates(bridge, spec.rotations);
        std::vector<const UnitBridge*> loops;
        loops.reserve(1 + dups.size());
        loops.push_back(&bridge);
        for (const auto& d : dups) loops.push_back(&d);

        if (is_ttt) {
            for (const UnitBridge* b : loops) {
                const Extent ex = b->extent({1.0, 0.0});
                const Extent ey = b->extent({0.0, 1.0});
                const double dx = ex.max - ex.min;
                const double dy = ey.max - ey.min;
                for (std::size_t ri = 0; ri < nr; ++ri) {
                    const double w = std::sqrt(ratios[ri]);
                    parents[ri][i] += weight_from_gaps(dx, dy, w, 1.0 / w);
                }
            }
        } else {
            std::vector<Extent> extents(3);
            for (const UnitBridge* b : loops) {
                const Extent base_ext = b->extent({0.0, 1.0});  // shared by all ratios
                for (std::size_t ri = 0; ri < nr; ++ri) {
                    const auto& cfg = tri_configs[ri];
                    double altitudes[3];
                    triangle_altitudes(cfg.tri, altitudes);
                    extents[0] = base_ext;
                    for (int k = 1; k < 3; ++k) extents[k] = b->extent(cfg.lines[k].normal);
                    const double beta0 = triangle_beta0(cfg, extents, altitudes);
                    parents[ri][i] += 2.0 / (3.0 * beta0 * std::sqrt(beta0));
                }
            }
        }
        const double inv = 1.0 / (1.0 + spec.rotations);
        for (std::size_t ri = 0; ri < nr; ++ri) parents[ri][i] *= inv;
    });

    const double coeff = energy_coefficient(is_ttt ? 4 : 3);
    std::vector<std::pair<double, EnergyEstimate>> out;
    out.reserve(nr);
    for (std::size_t ri = 0; ri < nr; ++ri) {
        const auto ms = block_mean_stderr(parents[ri]);
        EnergyEstimate est;
        est.value = coeff * ms.mean;
        est.std_error = std::abs(coeff) * ms.std_error;
        est.loop_count = spec.loop_count;
        est.epsilon = est.value;  // enclosed area fixed to 1
        out.emplace_back(ratios[ri], est);
    }
    return out;
}

std::vector<std::pair<int, EnergyEstimate>> convergence_study(double w, double h,
                                                              const std::vector<int>& point_counts,
                                                              const EnsembleSpec& spec,
                                                              int threads) {
    validate(spec);
    if (w <= 0.0 || h <= 0.0) throw std::invalid_argument("w and h must be positive");
    if (point_counts.empty()) throw std::invalid_argument("point_counts must be nonempty");
    for (int n : point_counts)
        if (n < 2 || (n & (n - 1)) != 0)
            throw std::invalid_argument("point_counts must be powers of two");
    const int n_max = *std::max_element(point_counts.begin(), point_counts.end());

    const std::size_t nc = point_counts.size();
    std::vector<std::vector<double>> parents(nc);
    for (auto& v : parents) v.assign(spec.loop_count, 0.0);

    parallel_for_index(spec.loop_count, threads, [&](long long i) {
        RandomStream stream = make_loop_stream(spec.seed, i);
        const UnitBridge fine = generate_unit_bridge(stream, n_max);
        for (std::size_t ci = 0; ci < nc; ++ci) {
            const int n = point_counts[ci];
            const int stride = n_max / n;
            UnitBridge sub;
            sub.points.resize(n + 1);
            for (int k = 0; k <= n; ++k) sub.points[k] = fine.points[k * stride];
            sub.refine_key = fine.refine_key;
            sub.base_level = fine.base_level - std::countr_zero(static_cast<unsigned>(stride));
            sub.refine_depth = default_refine_depth(n);
            double acc = weight_tictactoe(sub, w, h);
            for (const auto& d : rotated_duplicates(sub, spec.rotations))
                acc += weight_tictactoe(d, w, h);
            parents[ci][i] = acc / (1.0 + spec.rotations);
        }
    });

    const double coeff = energy_coefficient(4);
    std::vector<std::pair<int, EnergyEstimate>> out;
    out.reserve(nc);
    for (std::size_t ci = 0; ci < nc; ++ci) {
        const auto ms = block_mean_stderr(parents[ci]);
        EnergyEstimate est;
        est.value = coeff * ms.mean;
        est.std_error = std::abs(coeff) * ms.std_error;
        est.loop_count = spec.loop_count;
        est.epsilon = est.value * std::sqrt(w * h);
        out.emplace_back(point_counts[ci], est);
    }
    return out;
}

}  // namespace casimir
