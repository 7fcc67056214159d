#include "casimir/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace casimir {

namespace {

constexpr double pi = std::numbers::pi;

// Square-truncated lattice sum with Euler-Maclaurin midpoint corrections:
// two half-infinite strips and the quarter-plane corner, each with its first
// derivative correction, plus the corner cross term.
double lattice_sum(double w, double h, int k_cut) {
    long double direct = 0.0L;
    for (int m1 = 1; m1 <= k_cut; ++m1) {
        const double a2 = m1 * w * m1 * w;
        long double row = 0.0L;
        for (int m2 = 1; m2 <= k_cut; ++m2) {
            const double b = m2 * h;
            row += std::pow(a2 + b * b, -1.5);
        }
        direct += row;
    }
    double s = static_cast<double>(direct);

    const double c = k_cut + 0.5;
    const auto strip = [c](double a, double hh) {
        const double r = std::sqrt(a * a + hh * hh * c * c);
        const double i1 = (1.0 / hh - c / r) / (a * a);
        const double gp = -3.0 * hh * hh * c * std::pow(a * a + hh * hh * c * c, -2.5);
        return i1 + gp / 24.0;
    };
    for (int n = 1; n <= k_cut; ++n) {
        s += strip(n * w, h);
        s += strip(n * h, w);
    }

    const double b = h * c;
    const double i2 = (1.0 / (w * w * h)) * (1.0 / c) -
                      (c / (w * w)) * (std::sqrt(w * w * c * c + b * b) / (b * b * c) - w / (b * b));
    const double a = w * c;
    const double r = std::sqrt(a * a + h * h * c * c);
    const double di1_dx =
        w * (-2.0 / (a * a * a) * (1.0 / h - c / r) + (1.0 / (a * a)) * (c * a / (r * r * r)));
    const double cap = h * c;  // B in the antiderivative of the y-derivative strip
    const auto j_anti = [&](double x) {
        return x * (3.0 * cap * cap + 2.0 * w * w * x * x) /
               (3.0 * cap * cap * cap * cap * std::pow(w * w * x * x + cap * cap, 1.5));
    };
    const double j_inf = 2.0 / (3.0 * cap * cap * cap * cap * w);
    const double int_gp = -3.0 * h * h * c * (j_inf - j_anti(c));
    const double scc = w * w * c * c + h * h * c * c;
    const double cross = 15.0 * w * w * c * h * h * c * std::pow(scc, -3.5);
    s += i2 + di1_dx / 24.0 + int_gp / 24.0 + cross / 576.0;
    return s;
}

}  // namespace

double tictactoe_exact(double w, double h, double tol) {
    if (w <= 0.0 || h <= 0.0) throw std::invalid_argument("w and h must be positive");
    if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
    int k = 16;
    double prev = lattice_sum(w, h, k);
    while (k < 4096) {
        k *= 2;
        const double cur = lattice_sum(w, h, k);
        if (std::abs(cur - prev) <= tol * std::abs(cur)) {
            prev = cur;
            break;
        }
        prev = cur;
    }
    return -w * h / (8.0 * pi) * prev;
}

namespace {

// sum_{n>=1} exp(-beta pi^2 n^2 / (2 a^2))
double direct_sum(double a, double beta) {
    double s = 0.0;
    const double q = beta * pi * pi / (2.0 * a * a);
    for (int n = 1; n <= 10000; ++n) {
        const double t = std::exp(-q * n * n);
        s += t;
        if (t == 0.0 || t < 1e-18 * s) break;
    }
    return s;
}

// sum_{k>=1} exp(-2 a^2 k^2 / beta)
double poisson_sum(double a, double beta) {
    double s = 0.0;
    const double q = 2.0 * a * a / beta;
    for (int k = 1; k <= 10000; ++k) {
        const double t = std::exp(-q * k * k);
        s += t;
        if (t == 0.0 || t < 1e-18 * s) break;
    }
    return s;
}

void check_interval(double a, double beta) {
    if (a <= 0.0) throw std::invalid_argument("interval length must be positive");
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
}

}  // namespace

double interval_spectral(double a, double beta) {
    check_interval(a, beta);
    if (beta < 0.01 * a * a)
        return a / std::sqrt(2.0 * pi * beta) - 0.5 +
               a * std::sqrt(2.0 / (pi * beta)) * poisson_sum(a, beta);
    return direct_sum(a, beta);
}

double interval_spectral_reduced(double a, double beta) {
    check_interval(a, beta);
    if (beta < a * a) return a * std::sqrt(2.0 / (pi * beta)) * poisson_sum(a, beta);
    return direct_sum(a, beta) - a / std::sqrt(2.0 * pi * beta) + 0.5;
}

void validate(const BoxPartition& box) {
    if (box.W <= 0.0 || box.H <= 0.0)
        throw std::invalid_argument("box dimensions must be positive");
    const auto check_cuts = [](const std::vector<double>& cuts, double limit) {
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            if (cuts[i] <= 0.0 || cuts[i] >= limit)
                throw std::invalid_argument("cuts must lie strictly inside the box");
            if (i > 0 && cuts[i] <= cuts[i - 1])
                throw std::invalid_argument("cuts must be strictly increasing");
        }
    };
    check_cuts(box.x_cuts, box.W);
    check_cuts(box.y_cuts, box.H);
}

BoxPartition centered_tictactoe_box(double w, double h, double scale) {
    if (w <= 0.0 || h <= 0.0) throw std::invalid_argument("w and h must be positive");
    if (scale <= 1.0) throw std::invalid_argument("box must enclose the figure");
    BoxPartition box;
    box.W = scale * w;
    box.H = scale * h;
    box.x_cuts = {0.5 * (box.W - w), 0.5 * (box.W + w)};
    box.y_cuts = {0.5 * (box.H - h), 0.5 * (box.H + h)};
    return box;
}

namespace {

// Alternating two-cut subset sum along one axis, regrouped so the
// asymptotes cancel exactly: psi(W) - psi(W-x1) - psi(x2) + psi(x2-x1).
// Beyond beta = W^2 the psi asymptote parts cancel algebraically, so the
// bare direct sums are used to avoid losing the exponentially small result.
double axis_factor(double width, double c1, double c2, double beta) {
    if (beta >= width * width)
        return direct_sum(width, beta) - direct_sum(width - c1, beta) - direct_sum(c2, beta) +
               direct_sum(c2 - c1, beta);
    return interval_spectral_reduced(width, beta) - interval_spectral_reduced(width - c1, beta) -
           interval_spectral_reduced(c2, beta) + interval_spectral_reduced(c2 - c1, beta);
}

}  // namespace

double box_irreducible_spectral(const BoxPartition& box, double beta) {
    validate(box);
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    if (box.x_cuts.size() != 2 || box.y_cuts.size() != 2)
        throw std::invalid_argument("box partition requires exactly two x cuts and two y cuts");
    const double x = axis_factor(box.W, box.x_cuts[0], box.x_cuts[1], beta);
    const double y = axis_factor(box.H, box.y_cuts[0], box.y_cuts[1], beta);
    return x * y;
}

double free_plane_irreducible_spectral(double w, double h, double beta) {
    if (w <= 0.0 || h <= 0.0) throw std::invalid_argument("w and h must be positive");
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    return interval_spectral_reduced(w, beta) * interval_spectral_reduced(h, beta);
}

namespace {

template <typename F>
double simpson_log(const F& f, double lo, double hi, int n_points) {
    if (n_points < 3 || n_points % 2 == 0)
        throw std::invalid_argument("n_points must be odd and at least 3");
    const double t0 = std::log(lo);
    const double dt = (std::log(hi) - t0) / (n_points - 1);
    const auto g = [&](int i) {
        const double beta = std::exp(t0 + i * dt);
        return f(beta) * beta;  // log-space jacobian
    };
    double sum = g(0) + g(n_points - 1);
    for (int i = 1; i < n_points - 1; ++i) sum += g(i) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * dt / 3.0;
}

}  // namespace

double proper_time_energy_box(const BoxPartition& box, int n_points) {
    validate(box);
    if (box.x_cuts.size() != 2 || box.y_cuts.size() != 2)
        throw std::invalid_argument("box partition requires exactly two x cuts and two y cuts");
    const double gx = box.x_cuts[1] - box.x_cuts[0];
    const double gy = box.y_cuts[1] - box.y_cuts[0];
    const double lmin2 = 4.0 * (gx * gx + gy * gy);
    const double hi = 100.0 * std::max(box.W, box.H) * std::max(box.W, box.H);
    const double integral = simpson_log(
        [&](double beta) { return box_irreducible_spectral(box, beta) * std::pow(beta, -1.5); },
        1e-3 * lmin2, hi, n_points);
    return -integral / std::sqrt(8.0 * pi);
}

double proper_time_energy_free(double w, double h, int n_points) {
    if (w <= 0.0 || h <= 0.0) throw std::invalid_argument("w and h must be positive");
    const double lmin2 = 4.0 * (w * w + h * h);
    const double cap = 100.0 * std::max(w, h) * std::max(w, h);
    const double integral = simpson_log(
        [&](double beta) {
            return free_plane_irreducible_spectral(w, h, beta) * std::pow(beta, -1.5);
        },
        1e-3 * lmin2, cap, n_points);
    const double c1 = (w + h) / (2.0 * std::sqrt(2.0 * pi));
    const double c2 = w * h / (2.0 * pi);
    const double tail =
        0.5 / std::sqrt(cap) - c1 / cap + (2.0 / 3.0) * c2 / (cap * std::sqrt(cap));
    return -(integral + tail) / std::sqrt(8.0 * pi);
}

}  // namespace casimir
