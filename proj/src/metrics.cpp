#include "gaussgeo/metrics.hpp"

#include <Eigen/LU>

#include <cmath>

namespace gaussgeo {

namespace {

constexpr double kRadicandClamp = 1e-12;

double checked_det(const CovarianceMatrix& sigma) {
    const double det = sigma.entries().determinant();
    if (!(det > 0.0))
        throw NumericalError("metric: covariance determinant not positive");
    return det;
}

void require_same_modes(const CovarianceMatrix& a, const CovarianceMatrix& b) {
    if (a.modes() != b.modes())
        throw std::invalid_argument("metric: mode counts differ");
}

}  // namespace

// per-mode entropy term with the nu -> 1 limit folded in
double von_neumann_entropy_term(double nu) {
    if (nu < 1.0 - kPhysicalTol)
        throw std::domain_error("entropy: symplectic eigenvalue below 1");
    if (nu - 1.0 < 1e-12) return 0.0;
    const double up = 0.5 * (nu + 1.0);
    const double dn = 0.5 * (nu - 1.0);
    return up * std::log(up) - dn * std::log(dn);
}

double purity(const SymplecticSpectrum& spectrum) {
    double prod = 1.0;
    for (double nu : spectrum.values()) prod *= nu;
    return 1.0 / prod;
}

double von_neumann_entropy(const SymplecticSpectrum& spectrum) {
    double sum = 0.0;
    for (double nu : spectrum.values()) sum += von_neumann_entropy_term(nu);
    return sum;
}

double hs_overlap(const CovarianceMatrix& sigma_a, const CovarianceMatrix& sigma_b) {
    require_same_modes(sigma_a, sigma_b);
    const Matrix mid = 0.5 * (sigma_a.entries() + sigma_b.entries());
    const double det = mid.determinant();
    if (!(det > 0.0))
        throw NumericalError("hs_overlap: midpoint determinant not positive");
    return 1.0 / std::sqrt(det);
}

double hs_distance(const CovarianceMatrix& sigma_a, const CovarianceMatrix& sigma_b) {
    require_same_modes(sigma_a, sigma_b);
    const double pa = 1.0 / std::sqrt(checked_det(sigma_a));
    const double pb = 1.0 / std::sqrt(checked_det(sigma_b));
    const double radicand = pa + pb - 2.0 * hs_overlap(sigma_a, sigma_b);
    if (radicand < -kRadicandClamp)
        throw NumericalError("hs_distance: radicand negative beyond rounding");
    return std::sqrt(std::max(0.0, radicand));
}

double hs_line_element(const LineElementInput& input) {
    const Matrix& sigma = input.sigma.entries();
    if (input.d_sigma.rows() != sigma.rows() || input.d_sigma.cols() != sigma.cols())
        throw std::invalid_argument("hs_line_element: perturbation shape mismatch");
    const double scale = std::max(1.0, input.d_sigma.cwiseAbs().maxCoeff());
    if ((input.d_sigma - input.d_sigma.transpose()).cwiseAbs().maxCoeff() >
        kSymmetryRelTol * scale)
        throw std::invalid_argument("hs_line_element: perturbation not symmetric");
    Eigen::PartialPivLU<Matrix> lu(sigma);
    const double det = lu.determinant();
    if (!(det > 0.0)) throw NumericalError("hs_line_element: singular covariance");
    const Matrix ratio = lu.solve(input.d_sigma);  // Sigma^-1 dSigma
    const double tr = ratio.trace();
    const double tr_sq = (ratio * ratio).trace();
    return (tr * tr + 2.0 * tr_sq) / (16.0 * std::sqrt(det));
}

double hs_line_element_diagonal(const DiagonalLineElementInput& input) {
    const int n = input.spectrum.modes();
    if (static_cast<int>(input.d_nu.size()) != n)
        throw std::invalid_argument("diagonal line element: d_nu size mismatch");
    if (input.d_x.modes() != n)
        throw std::invalid_argument("diagonal line element: generator size mismatch");
    if (!input.d_x.canonical)
        throw std::invalid_argument(
            "diagonal line element: canonical generator required (zero diag(c))");

    const auto& nu = input.spectrum.values();
    double prod_nu = 1.0;     // sqrt(det D)
    double tr_dd = 0.0;       // tr(D^-1 dD)
    double tr_dd_sq = 0.0;    // tr((D^-1 dD)^2)
    for (int i = 0; i < n; ++i) {
        prod_nu *= nu[i];
        tr_dd += 2.0 * input.d_nu[i] / nu[i];
        tr_dd_sq += 2.0 * (input.d_nu[i] / nu[i]) * (input.d_nu[i] / nu[i]);
    }

    const Matrix dx = input.d_x.assembled();
    const double tr_dx_sq = (dx * dx).trace();
    // tr(dX D^-1 dX^T D) with D = diag(nu, nu)
    Vector diag(2 * n);
    for (int i = 0; i < n; ++i) diag[i] = diag[n + i] = nu[i];
    double tr_mixed = 0.0;
    for (int r = 0; r < 2 * n; ++r)
        for (int col = 0; col < 2 * n; ++col)
            tr_mixed += dx(r, col) * dx(r, col) * diag[r] / diag[col];

    return (tr_dd * tr_dd + 2.0 * tr_dd_sq + 4.0 * tr_dx_sq + 4.0 * tr_mixed) /
           (16.0 * prod_nu);
}

double fidelity_one_mode(const CovarianceMatrix& sigma_a, const CovarianceMatrix& sigma_b) {
    if (sigma_a.modes() != 1 || sigma_b.modes() != 1)
        throw std::invalid_argument(
            "fidelity: closed form available for one-mode states only");
    const double det_a = sigma_a.entries().determinant();
    const double det_b = sigma_b.entries().determinant();
    double cross = (det_a - 1.0) * (det_b - 1.0);
    if (cross < 0.0) cross = std::max(cross, -1e-9);  // rounding at det = 1
    cross = std::max(cross, 0.0);
    const double det_sum = (sigma_a.entries() + sigma_b.entries()).determinant();
    if (!(det_sum > 0.0))
        throw NumericalError("fidelity: det(A + B) not positive");
    const double f =
        2.0 * (std::sqrt(det_sum + cross) + std::sqrt(cross)) / det_sum;
    return (f > 1.0 && f < 1.0 + 1e-9) ? 1.0 : f;
}

double bures_distance_one_mode(const CovarianceMatrix& sigma_a,
                               const CovarianceMatrix& sigma_b) {
    const double f = fidelity_one_mode(sigma_a, sigma_b);
    return std::sqrt(2.0 * std::max(0.0, 1.0 - std::sqrt(f)));
}

}  // namespace gaussgeo
