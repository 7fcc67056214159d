#pragma once

#include <vector>

namespace casimir {

// A W x H Dirichlet box partitioned by full vertical chords at x_cuts and
// horizontal chords at y_cuts.
struct BoxPartition {
    std::vector<double> x_cuts;  // strictly increasing, inside (0, W)
    std::vector<double> y_cuts;  // strictly increasing, inside (0, H)
    double W = 1.0;
    double H = 1.0;
};

void validate(const BoxPartition& box);

BoxPartition centered_tictactoe_box(double w, double h, double scale);

// Exact lattice double sum -(w h / 8 pi) sum_{n1,n2>=1} [(n1 w)^2 +
// (n2 h)^2]^{-3/2}, evaluated by square truncation plus Euler-Maclaurin
// midpoint corrections for both strips and the corner, with the cutoff
// doubled until the change falls below tol relative.
double tictactoe_exact(double w, double h, double tol = 1e-10);

// sum_{n>=1} exp(-beta n^2 pi^2 / (2 a^2)); Poisson-resummed for
// beta/a^2 < 0.01.
double interval_spectral(double a, double beta);

// interval_spectral(a, beta) - a/sqrt(2 pi beta) + 1/2, evaluated without
// cancellation on either side of beta = a^2.
double interval_spectral_reduced(double a, double beta);

// Irreducible spectral function of the four chords inside the box: the
// alternating sum over the 16 chord subsets of cell-product spectral
// functions. The subset sum is evaluated in its exactly regrouped
// asymptote-subtracted form, which is immune to the catastrophic
// cancellation of the raw alternating sum at small beta.
double box_irreducible_spectral(const BoxPartition& box, double beta);

// Large-box limit of box_irreducible_spectral for a centered w x h figure.
double free_plane_irreducible_spectral(double w, double h, double beta);

// -(1/sqrt(8 pi)) integral of phi_tilde(beta) beta^{-3/2} over the box's
// full support, log-spaced composite Simpson; both tails are exponentially
// small for a finite box.
double proper_time_energy_box(const BoxPartition& box, int n_points = 513);

// Same integral for the large-box limit; the slow beta^{-1/2} plateau tail
// is added in closed form.
double proper_time_energy_free(double w, double h, int n_points = 513);

}  // namespace casimir
