// symplectic.hpp — covariance matrices, symplectic spectra, and group transforms
//
// Basis convention: phase-space vectors are ordered block-wise,
// (x_1..x_N, p_1..p_N), so the symplectic form is J = [[0, I], [-I, 0]].
// Much of the literature interleaves modes (x_1, p_1, x_2, p_2, ...);
// interleaved_to_block() converts such input. The vacuum state is the
// identity covariance matrix (nu = 1, no hbar/2 factor).
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "gaussgeo/errors.hpp"

namespace gaussgeo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Tolerances used by the structural and physicality checks.
inline constexpr double kSymmetryRelTol = 1e-9;    // covariance symmetry
inline constexpr double kPhysicalTol = 1e-9;       // min nu >= 1 - tol
inline constexpr double kImagResidueTol = 1e-8;    // eigen-solve residue, relative
inline constexpr double kPairingTol = 1e-6;        // doubled-eigenvalue health check
inline constexpr double kGeneratorSymTol = 1e-12;  // b, c symmetry
inline constexpr double kSymplecticCheckTol = 1e-6;  // S^T J S = J gate

// Real symmetric 2N x 2N second-moment matrix of an N-mode Gaussian state.
// Construction enforces shape, finiteness, and symmetry; it does NOT require
// physicality (see validate_covariance), so unphysical candidates can be held
// and inspected.
class CovarianceMatrix {
public:
    CovarianceMatrix(int modes, Matrix entries);

    static CovarianceMatrix identity(int modes);
    // diag(nu_1..nu_N, nu_1..nu_N) in block ordering
    static CovarianceMatrix from_spectrum(const std::vector<double>& nu);

    int modes() const { return modes_; }
    int dim() const { return 2 * modes_; }
    const Matrix& entries() const { return entries_; }

private:
    int modes_;
    Matrix entries_;
};

// Ascending symplectic eigenvalues nu_1 <= ... <= nu_N. Values in
// [1 - kPhysicalTol, 1) are clamped to 1 (eigen-solver noise around the
// vacuum); genuinely sub-unit values are kept so validity reporting can see
// them.
class SymplecticSpectrum {
public:
    explicit SymplecticSpectrum(std::vector<double> values);

    int modes() const { return static_cast<int>(values_.size()); }
    const std::vector<double>& values() const { return values_; }
    double min_nu() const { return values_.front(); }
    bool physical() const;

private:
    std::vector<double> values_;
};

// Generator of a symplectic transform: X = [[A, B], [C, -A^T]] with B, C
// symmetric. canonical means the diagonal of C is zero, which removes the
// SO(2)^N gauge directions that commute with a diagonal covariance.
struct HamiltonianGenerator {
    Matrix a;
    Matrix b;
    Matrix c;
    bool canonical = false;
    bool diagonal_zeroed = false;  // set when assembly had to zero diag(c)

    int modes() const { return static_cast<int>(a.rows()); }
    Matrix assembled() const;  // the 2N x 2N matrix X
};

struct ValidityReport {
    bool physical = false;
    double min_nu = 0.0;  // NaN when the input is not symmetric
};

// J = [[0, I], [-I, 0]] with N x N blocks.
Matrix symplectic_form(int modes);

// The nu_i with {nu_i^2} the (doubly degenerate) eigenvalues of -(J Sigma)^2.
// Throws on asymmetric input, eigen-solve failure, imaginary residue above
// kImagResidueTol, or a pairing violation above kPairingTol.
SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix& sigma);

// Physicality check (Sigma + iJ >= 0, i.e. min nu >= 1 - kPhysicalTol).
// Accepts raw matrices so that rejected candidates can be reported instead of
// thrown at construction. Throws only on odd dimension or non-finite entries.
ValidityReport validate_covariance(const Matrix& sigma);
ValidityReport validate_covariance(const CovarianceMatrix& sigma);

// Builds the generator from blocks; b and c must be symmetric within
// kGeneratorSymTol. With canonical = true a nonzero diag(c) is zeroed and
// flagged.
HamiltonianGenerator assemble_generator(const Matrix& a, const Matrix& b,
                                        const Matrix& c, bool canonical);

// S = exp(X); satisfies S^T J S = J and det S = 1 up to rounding.
Matrix symplectic_exp(const HamiltonianGenerator& x);

// S^T Sigma S. Requires S symplectic within kSymplecticCheckTol; the
// symplectic spectrum is preserved.
CovarianceMatrix conjugate(const CovarianceMatrix& sigma, const Matrix& s);

// Reorders a covariance matrix from interleaved (x1,p1,x2,p2,...) to block
// (x1..xN, p1..pN) ordering.
Matrix interleaved_to_block(const Matrix& sigma);

}  // namespace gaussgeo
