#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "casimir/bridges.hpp"

using namespace casimir;

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

struct MeanSd {
    double mean;
    double sd;
};

MeanSd mean_sd(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    const double m = acc / v.size();
    double s2 = 0.0;
    for (double x : v) s2 += (x - m) * (x - m);
    return {m, std::sqrt(s2 / (v.size() - 1))};
}

}  // namespace

TEST_CASE("ensemble validation pins the failure messages") {
    EnsembleSpec spec;
    spec.seed = 1;
    CHECK_NOTHROW(validate(spec));
    spec.loop_count = 0;
    CHECK_THROWS_WITH_AS(validate(spec), "loops must be at least 1", std::invalid_argument);
    spec.loop_count = 10;
    spec.points_per_loop = 1;
    CHECK_THROWS_WITH_AS(validate(spec), "points_per_loop must be at least 2",
                         std::invalid_argument);
    spec.points_per_loop = 100;
    CHECK_THROWS_WITH_AS(validate(spec), "points_per_loop must be a power of two",
                         std::invalid_argument);
    spec.points_per_loop = 128;
    spec.rotations = 7;
    CHECK_THROWS_WITH_AS(validate(spec), "rotations must be in [0,6]", std::invalid_argument);
    spec.rotations = -1;
    CHECK_THROWS_WITH_AS(validate(spec), "rotations must be in [0,6]", std::invalid_argument);
}

TEST_CASE("bridges are pinned at both ends") {
    RandomStream stream = make_loop_stream(1, 0);
    const UnitBridge b = generate_unit_bridge(stream, 256);
    REQUIRE(b.points.size() == 257);
    CHECK(b.points.front().x == 0.0);
    CHECK(b.points.front().y == 0.0);
    CHECK(b.points.back().x == 0.0);
    CHECK(b.points.back().y == 0.0);
    CHECK(b.base_level == 8);
    CHECK(b.refine_depth == 14);
    CHECK_THROWS_WITH_AS(generate_unit_bridge(stream, 100), "points_per_loop must be a power of two",
                         std::invalid_argument);
}

TEST_CASE("stream moments: gauss is standard normal, uniform is flat") {
    RandomStream stream(42, 7);
    const int n = 1000000;
    double su = 0.0, sg = 0.0, sg2 = 0.0;
    for (int i = 0; i < n; ++i) su += stream.uniform();
    for (int i = 0; i < n; ++i) {
        const double g = stream.gauss();
        sg += g;
        sg2 += g * g;
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.005));
    CHECK(sg / n == doctest::Approx(0.0).scale(1.0).epsilon(0.005));
    CHECK(sg2 / n == doctest::Approx(1.0).epsilon(0.006));
}

TEST_CASE("bridge covariance matches t(1-s) at the lattice points") {
    const int n = 64, m = 100000;
    // Pool x and y components; both are independent standard bridges.
    std::vector<double> mid, quarter;
    mid.reserve(2 * m);
    quarter.reserve(2 * m);
    for (int i = 0; i < m; ++i) {
        RandomStream stream = make_loop_stream(123, i);
        const UnitBridge b = generate_unit_bridge(stream, n);
        mid.push_back(b.points[n / 2].x);
        mid.push_back(b.points[n / 2].y);
        quarter.push_back(b.points[n / 4].x);
        quarter.push_back(b.points[n / 4].y);
    }
    const auto vm = mean_sd(mid);
    const auto vq = mean_sd(quarter);
    CHECK(vm.mean == doctest::Approx(0.0).scale(1.0).epsilon(0.005));
    // Var x(1/2) = 1/4, Var x(1/4) = 3/16, Cov(x(1/4), x(1/2)) = 1/8.
    CHECK(vm.sd * vm.sd == doctest::Approx(0.25).epsilon(0.02));
    CHECK(vq.sd * vq.sd == doctest::Approx(0.1875).epsilon(0.02));
    double cov = 0.0;
    for (std::size_t k = 0; k < mid.size(); ++k)
        cov += (mid[k] - vm.mean) * (quarter[k] - vq.mean);
    cov /= mid.size() - 1;
    CHECK(cov == doctest::Approx(0.125).epsilon(0.03));
}

TEST_CASE("bridge midpoint passes a Kolmogorov-Smirnov normality test") {
    const int n = 64, m = 10000;
    std::vector<double> z;
    z.reserve(m);
    for (int i = 0; i < m; ++i) {
        RandomStream stream = make_loop_stream(321, i);
        const UnitBridge b = generate_unit_bridge(stream, n);
        z.push_back(b.points[n / 2].x / 0.5);  // standardized by sd = 1/2
    }
    std::sort(z.begin(), z.end());
    double d = 0.0;
    for (int i = 0; i < m; ++i) {
        const double f = normal_cdf(z[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / m,
                                 static_cast<double>(i + 1) / m - f));
    }
    CHECK(d < 1.628 / std::sqrt(static_cast<double>(m)));  // 1% critical value
}

TEST_CASE("refined extents reproduce the Brownian bridge extreme-value laws") {
    // E max = sqrt(pi/8), E range = sqrt(pi/2), E range^2 = pi^2/6.
    const int m = 30000;
    std::vector<double> maxs, ranges, ranges2;
    maxs.reserve(m);
    ranges.reserve(m);
    ranges2.reserve(m);
    for (int i = 0; i < m; ++i) {
        RandomStream stream = make_loop_stream(77, i);
        const UnitBridge b = generate_unit_bridge(stream, 256);
        const Extent e = b.extent({1.0, 0.0});
        maxs.push_back(e.max);
        const double r = e.max - e.min;
        ranges.push_back(r);
        ranges2.push_back(r * r);
    }
    const auto sm = mean_sd(maxs);
    const auto sr = mean_sd(ranges);
    const auto sr2 = mean_sd(ranges2);
    const double root = std::sqrt(static_cast<double>(m));
    CHECK(std::abs(sm.mean - std::sqrt(std::numbers::pi / 8.0)) < 4.0 * sm.sd / root);
    CHECK(std::abs(sr.mean - std::sqrt(std::numbers::pi / 2.0)) < 4.0 * sr.sd / root);
    CHECK(std::abs(sr2.mean - std::numbers::pi * std::numbers::pi / 6.0) <
          4.0 * sr2.sd / root);
}

TEST_CASE("refinement only widens the vertex extent, deterministically") {
    RandomStream stream = make_loop_stream(3, 11);
    const UnitBridge b = generate_unit_bridge(stream, 512);
    const Vec2 dir{0.6, 0.8};
    const Extent vertex = projection_extent(b.points, dir);
    const Extent fine = b.extent(dir);
    CHECK(fine.max >= vertex.max);
    CHECK(fine.min <= vertex.min);
    CHECK(fine.max > vertex.max);  // almost surely strict at depth 13
    const Extent again = b.extent(dir);
    CHECK(fine.min == again.min);
    CHECK(fine.max == again.max);
}

TEST_CASE("rotated duplicates reuse the parent's randomness") {
    RandomStream stream = make_loop_stream(15, 2);
    const UnitBridge b = generate_unit_bridge(stream, 256);
    const auto dups = rotated_duplicates(b, 3);
    REQUIRE(dups.size() == 3);
    // First duplicate is rotated by pi/2, so its extent along +x is the
    // parent's extent along -y, refinement draws included.
    const Extent d0 = dups[0].extent({1.0, 0.0});
    const Extent p = b.extent({0.0, -1.0});
    CHECK(d0.min == doctest::Approx(p.min).epsilon(1e-12));
    CHECK(d0.max == doctest::Approx(p.max).epsilon(1e-12));
    // Full turn partition: duplicate j is rotated by 2 pi j / (k+1).
    const auto six = rotated_duplicates(b, 6);
    REQUIRE(six.size() == 6);
    const double a = 2.0 * std::numbers::pi / 7.0;
    CHECK(six[0].rot_c == doctest::Approx(std::cos(a)).epsilon(1e-15));
    CHECK(six[0].rot_s == doctest::Approx(std::sin(a)).epsilon(1e-15));
    CHECK_THROWS_WITH_AS(rotated_duplicates(b, 7), "rotations must be in [0,6]",
                         std::invalid_argument);
}

TEST_CASE("rescale_translate applies sqrt(beta) and the anchor") {
    RandomStream stream = make_loop_stream(8, 0);
    const UnitBridge b = generate_unit_bridge(stream, 64);
    const auto path = rescale_translate(b, 4.0, {1.0, -2.0});
    REQUIRE(path.size() == b.points.size());
    CHECK(path[10].x == doctest::Approx(1.0 + 2.0 * b.points[10].x).epsilon(1e-15));
    CHECK(path[10].y == doctest::Approx(-2.0 + 2.0 * b.points[10].y).epsilon(1e-15));
    CHECK(path.front().x == 1.0);
    CHECK(path.front().y == -2.0);
    CHECK_THROWS_WITH_AS(rescale_translate(b, 0.0, {0.0, 0.0}), "beta must be positive",
                         std::invalid_argument);
}

TEST_CASE("bridge_from_points validation") {
    CHECK_THROWS_WITH_AS(bridge_from_points({{0.0, 0.0}, {1.0, 1.0}}),
                         "points_per_loop must be at least 2", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        bridge_from_points({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.0, 0.0},
                            {0.0, 0.0}}),
        "points_per_loop must be a power of two", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        bridge_from_points({{0.1, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.1, 0.0}}),
        "bridge must start and end at the origin", std::invalid_argument);
    const UnitBridge b =
        bridge_from_points({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.0, 0.0}});
    CHECK(b.refine_depth == 0);
    CHECK(b.base_level == 2);
    const Extent e = b.extent({1.0, 0.0});
    CHECK(e.min == 0.0);
    CHECK(e.max == 1.0);
}

TEST_CASE("independent loop streams decorrelate bridges") {
    RandomStream s0 = make_loop_stream(5, 0);
    RandomStream s1 = make_loop_stream(5, 1);
    const UnitBridge a = generate_unit_bridge(s0, 128);
    const UnitBridge b = generate_unit_bridge(s1, 128);
    double corr = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < a.points.size(); ++k) {
        corr += a.points[k].x * b.points[k].x;
        na += a.points[k].x * a.points[k].x;
        nb += b.points[k].x * b.points[k].x;
    }
    CHECK(std::abs(corr) / std::sqrt(na * nb) < 0.5);
    CHECK(a.refine_key != b.refine_key);
}
