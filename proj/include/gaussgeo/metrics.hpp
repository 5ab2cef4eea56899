// metrics.hpp — distances, overlaps, and invariant scalars of Gaussian states
//
// All entropies are in nats. Every function here is a pure function of its
// arguments and safe to call concurrently.
#pragma once

#include <vector>

#include "gaussgeo/symplectic.hpp"

namespace gaussgeo {

// tr(rho^2) = 1 / prod(nu_i) = 1 / sqrt(det Sigma); equals 1 iff every
// nu_i = 1.
double purity(const SymplecticSpectrum& spectrum);

// Sum over modes of (nu+1)/2 ln((nu+1)/2) - (nu-1)/2 ln((nu-1)/2).
// The nu -> 1 limit of a term is 0; nu - 1 < 1e-12 evaluates to exactly 0.
// Throws std::domain_error for nu < 1 - kPhysicalTol.
double von_neumann_entropy(const SymplecticSpectrum& spectrum);

// Single-mode entropy term; the building block of the sum above. Exposed for
// integrands that walk raw eigenvalue tuples.
double von_neumann_entropy_term(double nu);

// tr(rho_A rho_B) = 1 / sqrt(det((A + B)/2)). Symmetric; equals purity on
// the diagonal.
double hs_overlap(const CovarianceMatrix& sigma_a, const CovarianceMatrix& sigma_b);

// Hilbert-Schmidt distance
//   sqrt(1/sqrt(det A) + 1/sqrt(det B) - 2/sqrt(det((A+B)/2))).
// Radicands in [-1e-12, 0) clamp to zero; anything more negative throws
// NumericalError (it indicates a numerics bug, not rounding).
double hs_distance(const CovarianceMatrix& sigma_a, const CovarianceMatrix& sigma_b);

struct LineElementInput {
    CovarianceMatrix sigma;
    Matrix d_sigma;  // symmetric perturbation, same shape as sigma
};

// ds^2 = (1/(16 sqrt(det S))) [ (tr(S^-1 dS))^2 + 2 tr((S^-1 dS)^2) ].
// Quadratic in d_sigma; throws NumericalError for singular sigma.
double hs_line_element(const LineElementInput& input);

struct DiagonalLineElementInput {
    SymplecticSpectrum spectrum;
    std::vector<double> d_nu;    // one shift per mode, aligned with the
                                 // ascending spectrum order
    HamiltonianGenerator d_x;    // canonical gauge required
};

// Line element at a diagonal covariance D = diag(N, N) in the split
// coordinates (d_nu, dX):
//   ds^2 = (1/(16 sqrt(det D))) [ (tr(D^-1 dD))^2 + 2 tr((D^-1 dD)^2)
//                                 + 4 tr(dX^2) + 4 tr(dX D^-1 dX^T D) ].
// No dD*dX cross terms exist, so the value is the sum of the two pure
// evaluations.
double hs_line_element_diagonal(const DiagonalLineElementInput& input);

// One-mode Uhlmann fidelity,
//   F = 2 / (sqrt(det(A+B) + P) - sqrt(P)),  P = (det A - 1)(det B - 1),
// evaluated in the rationalized form 2 (sqrt(det(A+B)+P) + sqrt(P)) / det(A+B).
// Throws std::invalid_argument unless both states have exactly one mode.
double fidelity_one_mode(const CovarianceMatrix& sigma_a, const CovarianceMatrix& sigma_b);

// d_B = sqrt(2 (1 - sqrt(F))); one-mode only.
double bures_distance_one_mode(const CovarianceMatrix& sigma_a,
                               const CovarianceMatrix& sigma_b);

}  // namespace gaussgeo
