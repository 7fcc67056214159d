#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "casimir/analytic.hpp"

using namespace casimir;

namespace {

constexpr double kPi = std::numbers::pi;

// Frozen high-precision references for the interaction energy of the
// tic-tac-toe lattice sum (independently computed; rel. accuracy ~1e-19).
constexpr double kE11 = -0.042030772051581426402;
constexpr double kE12 = -0.026747017364626304632;
constexpr double kEHalf2 = -0.0297356531964853699606;
constexpr double kS31 = 0.1605101468795366714;  // S(3,1): E = -wh S/(8 pi)

// Literal 16-term alternating subset sum over the four chords: each subset
// partitions the box into rectangular cells whose traces factorize per axis
// and add up per subset.
double literal_box_sum(const BoxPartition& box, double beta) {
    const double x1 = box.x_cuts[0], x2 = box.x_cuts[1];
    const double y1 = box.y_cuts[0], y2 = box.y_cuts[1];
    const auto cells = [](double a, double b, double whole,
                          unsigned mask) -> std::vector<double> {
        switch (mask) {
            case 0: return {whole};
            case 1: return {a, whole - a};
            case 2: return {b, whole - b};
            default: return {a, b - a, whole - b};
        }
    };
    double total = 0.0;
    for (unsigned mx = 0; mx < 4; ++mx) {
        for (unsigned my = 0; my < 4; ++my) {
            double sx = 0.0, sy = 0.0;
            for (double c : cells(x1, x2, box.W, mx)) sx += interval_spectral(c, beta);
            for (double c : cells(y1, y2, box.H, my)) sy += interval_spectral(c, beta);
            const int bits = __builtin_popcount(mx) + __builtin_popcount(my);
            total += (bits % 2 ? -1.0 : 1.0) * sx * sy;
        }
    }
    return total;
}

}  // namespace

TEST_CASE("tic-tac-toe exact energy reproduces frozen references") {
    CHECK(tictactoe_exact(1.0, 1.0, 1e-12) == doctest::Approx(kE11).epsilon(1e-13));
    CHECK(tictactoe_exact(1.0, 2.0, 1e-12) == doctest::Approx(kE12).epsilon(1e-13));
    CHECK(tictactoe_exact(0.5, 2.0, 1e-12) == doctest::Approx(kEHalf2).epsilon(1e-13));
    CHECK(tictactoe_exact(3.0, 1.0, 1e-12) ==
          doctest::Approx(-3.0 / (8.0 * kPi) * kS31).epsilon(1e-13));
}

TEST_CASE("exact energy symmetry and scaling") {
    CHECK(tictactoe_exact(2.3, 0.9) == doctest::Approx(tictactoe_exact(0.9, 2.3)).epsilon(1e-13));
    // E(c w, c h) = E(w, h) / c.
    CHECK(tictactoe_exact(2.0, 2.0, 1e-12) ==
          doctest::Approx(0.5 * tictactoe_exact(1.0, 1.0, 1e-12)).epsilon(1e-12));
    CHECK(tictactoe_exact(1.5, 3.0, 1e-12) ==
          doctest::Approx(tictactoe_exact(0.5, 1.0, 1e-12) / 3.0).epsilon(1e-12));
}

TEST_CASE("exact energy truncation is controlled by tol") {
    const double ref = tictactoe_exact(1.0, 1.0, 1e-12);
    CHECK(std::abs(tictactoe_exact(1.0, 1.0, 1e-6) / ref - 1.0) < 1e-8);
    CHECK(std::abs(tictactoe_exact(1.0, 1.0, 1e-8) / ref - 1.0) < 1e-9);
    CHECK_THROWS_WITH_AS(tictactoe_exact(-1.0, 1.0), "w and h must be positive",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(tictactoe_exact(1.0, 1.0, 0.0), "tol must be positive",
                         std::invalid_argument);
}

TEST_CASE("interval spectral sum: direct branch against brute force") {
    for (double beta : {0.5, 1.0, 2.0}) {
        long double brute = 0.0L;
        for (int n = 40; n >= 1; --n)
            brute += std::exp(-static_cast<long double>(beta) * kPi * kPi * n * n / 2.0L);
        CHECK(interval_spectral(1.0, beta) ==
              doctest::Approx(static_cast<double>(brute)).epsilon(1e-14));
    }
    CHECK_THROWS_WITH_AS(interval_spectral(0.0, 1.0), "interval length must be positive",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(interval_spectral(1.0, -1.0), "beta must be positive",
                         std::invalid_argument);
}

TEST_CASE("interval spectral sum: Poisson branch matches the small-beta asymptote") {
    const double a = 1.3, beta = 1e-4 * a * a;
    // The theta relation gives S = a/sqrt(2 pi beta) - 1/2 up to
    // exp(-2 a^2 / beta), which underflows here.
    const double asym = a / std::sqrt(2.0 * kPi * beta) - 0.5;
    CHECK(interval_spectral(a, beta) == doctest::Approx(asym).epsilon(1e-14));
    CHECK(interval_spectral_reduced(a, beta) >= 0.0);
    CHECK(interval_spectral_reduced(a, beta) < 1e-300);
}

TEST_CASE("interval spectral branches join smoothly") {
    // Public switch at beta = 0.01 a^2, reduced switch at beta = a^2.
    const double a = 1.0;
    CHECK(interval_spectral(a, 0.01 * (1.0 - 1e-12)) ==
          doctest::Approx(interval_spectral(a, 0.01 * (1.0 + 1e-12))).epsilon(1e-12));
    CHECK(interval_spectral_reduced(a, 1.0 - 1e-12) ==
          doctest::Approx(interval_spectral_reduced(a, 1.0 + 1e-12)).epsilon(1e-12));
}

TEST_CASE("reduced spectral function has the exact large-beta plateau") {
    // S underflows, leaving exactly 1/2 - a/sqrt(2 pi beta).
    const double a = 1.0, beta = 1e8;
    CHECK(interval_spectral_reduced(a, beta) ==
          doctest::Approx(0.5 - a / std::sqrt(2.0 * kPi * beta)).epsilon(1e-15));
}

TEST_CASE("one-dimensional pair energy integrates to -pi/24") {
    // -(1/sqrt(8 pi)) int beta^{-3/2} psi(a=1) d beta over (0, inf); the
    // integrand vanishes exponentially at 0 and plateaus at 1/2 for large
    // beta, so the [B, inf) tail is 1/sqrt(B) - 1/(sqrt(2 pi) B) exactly.
    const double B = 1e6;
    const double lo = std::log(1e-8), hi = std::log(B);
    const int n = 4097;
    const double dt = (hi - lo) / (n - 1);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const double b = std::exp(lo + k * dt);
        const double w = (k == 0 || k == n - 1) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        acc += w * interval_spectral_reduced(1.0, b) / std::sqrt(b);
    }
    acc *= dt / 3.0;
    acc += 1.0 / std::sqrt(B) - 1.0 / (std::sqrt(2.0 * kPi) * B);
    CHECK(-acc / std::sqrt(8.0 * kPi) == doctest::Approx(-kPi / 24.0).epsilon(1e-12));
}

TEST_CASE("box spectral function equals the literal subset sum") {
    BoxPartition box;
    box.W = 3.0;
    box.H = 3.2;
    box.x_cuts = {1.0, 1.9};
    box.y_cuts = {0.8, 2.2};
    for (double beta : {0.3, 1.0, 3.0})
        CHECK(box_irreducible_spectral(box, beta) ==
              doctest::Approx(literal_box_sum(box, beta)).epsilon(1e-12));
}

TEST_CASE("box spectral function survives the small-beta cancellation") {
    // The raw 16-term sum loses all digits once the crossing probability is
    // below machine precision; the regrouped form stays positive and tiny.
    const BoxPartition box = centered_tictactoe_box(1.0, 1.0, 10.0);
    const double v = box_irreducible_spectral(box, 0.02);
    CHECK(v > 0.0);
    CHECK(v < 1e-80);
    for (double beta = 0.05; beta < 30.0; beta *= 1.7)
        CHECK(box_irreducible_spectral(box, beta) > 0.0);
}

TEST_CASE("box spectral function is transposition invariant") {
    BoxPartition box;
    box.W = 4.0;
    box.H = 5.0;
    box.x_cuts = {1.5, 2.5};
    box.y_cuts = {2.0, 3.1};
    BoxPartition t;
    t.W = box.H;
    t.H = box.W;
    t.x_cuts = box.y_cuts;
    t.y_cuts = box.x_cuts;
    for (double beta : {0.4, 1.7})
        CHECK(box_irreducible_spectral(box, beta) ==
              doctest::Approx(box_irreducible_spectral(t, beta)).epsilon(1e-14));
}

TEST_CASE("a 60x box is indistinguishable from the free plane") {
    for (double beta : {0.3, 0.8, 2.0}) {
        const double fp = free_plane_irreducible_spectral(1.0, 1.0, beta);
        const double bx = box_irreducible_spectral(centered_tictactoe_box(1.0, 1.0, 60.0), beta);
        CHECK(std::abs(fp - bx) <= 1e-14 * std::max(1.0, std::abs(fp)));
    }
}

TEST_CASE("free-plane proper-time integral reproduces the exact energy") {
    CHECK(std::abs(proper_time_energy_free(1.0, 1.0) / kE11 - 1.0) < 1e-11);
    CHECK(std::abs(proper_time_energy_free(1.0, 1.0, 1025) / kE11 - 1.0) < 1e-12);
    CHECK(std::abs(proper_time_energy_free(1.0, 2.0, 1025) / kE12 - 1.0) < 1e-12);
    CHECK(std::abs(proper_time_energy_free(0.5, 2.0, 1025) / kEHalf2 - 1.0) < 1e-12);
}

TEST_CASE("finite-box energies approach the free-plane value from above") {
    // Finite enclosures converge only like 1/scale; the gaps must shrink
    // monotonically but stay far from zero at practical sizes.
    const double e5 = proper_time_energy_box(centered_tictactoe_box(1.0, 1.0, 5.0), 1025);
    const double e10 = proper_time_energy_box(centered_tictactoe_box(1.0, 1.0, 10.0), 1025);
    const double e20 = proper_time_energy_box(centered_tictactoe_box(1.0, 1.0, 20.0), 1025);
    const double g5 = std::abs(e5 - kE11);
    const double g10 = std::abs(e10 - kE11);
    const double g20 = std::abs(e20 - kE11);
    CHECK(g10 < g5);
    CHECK(g20 < g10);
    CHECK(e5 > e10);
    CHECK(e10 > e20);
    CHECK(e20 > kE11);
    // Halving rate consistent with a 1/scale tail.
    CHECK(g10 / g5 == doctest::Approx(0.5).epsilon(0.6));
    CHECK(g20 / g10 == doctest::Approx(0.5).epsilon(0.6));
}

TEST_CASE("box partition validation") {
    BoxPartition box;
    box.W = -1.0;
    box.H = 1.0;
    box.x_cuts = {0.2, 0.4};
    box.y_cuts = {0.2, 0.4};
    CHECK_THROWS_WITH_AS(validate(box), "box dimensions must be positive", std::invalid_argument);
    box.W = 1.0;
    box.x_cuts = {0.2, 1.5};
    CHECK_THROWS_WITH_AS(validate(box), "cuts must lie strictly inside the box",
                         std::invalid_argument);
    box.x_cuts = {0.4, 0.2};
    CHECK_THROWS_WITH_AS(validate(box), "cuts must be strictly increasing", std::invalid_argument);
    box.x_cuts = {0.2, 0.4};
    CHECK_NOTHROW(validate(box));

    BoxPartition three = box;
    three.x_cuts = {0.2, 0.3, 0.4};
    CHECK_THROWS_WITH_AS(box_irreducible_spectral(three, 1.0),
                         "box partition requires exactly two x cuts and two y cuts",
                         std::invalid_argument);

    CHECK_THROWS_WITH_AS(centered_tictactoe_box(1.0, 1.0, 1.0), "box must enclose the figure",
                         std::invalid_argument);
    const BoxPartition c = centered_tictactoe_box(1.0, 2.0, 10.0);
    CHECK(c.W == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(c.H == doctest::Approx(20.0).epsilon(1e-15));
    CHECK(c.x_cuts[1] - c.x_cuts[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.y_cuts[1] - c.y_cuts[0] == doctest::Approx(2.0).epsilon(1e-12));
}
