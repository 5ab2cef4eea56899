#include "gaussgeo/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gaussgeo {

namespace {

bool is_finite(const Matrix& m) { return m.allFinite(); }

double symmetry_residual(const Matrix& m) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

// eigenvalues of -(J Sigma)^2; real parts carry nu^2 twice each
Eigen::VectorXcd jsigma_squared_eigenvalues(const Matrix& sigma) {
    const int n = static_cast<int>(sigma.rows()) / 2;
    const Matrix js = symplectic_form(n) * sigma;
    const Matrix m = -(js * js);
    Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("symplectic spectrum: eigen-solve failed");
    return solver.eigenvalues();
}

// pairs sorted real parts, checks double multiplicity, returns sqrt of means
std::vector<double> extract_paired_spectrum(const Eigen::VectorXcd& raw) {
    const int dim = static_cast<int>(raw.size());
    double scale = 1.0;
    for (int i = 0; i < dim; ++i) scale = std::max(scale, std::abs(raw[i]));
    for (int i = 0; i < dim; ++i) {
        if (std::abs(raw[i].imag()) > kImagResidueTol * scale)
            throw NumericalError(
                "symplectic spectrum: imaginary residue above tolerance");
    }
    std::vector<double> re(dim);
    for (int i = 0; i < dim; ++i) re[i] = raw[i].real();
    std::sort(re.begin(), re.end());
    std::vector<double> nu(dim / 2);
    for (int i = 0; i < dim / 2; ++i) {
        const double lo = re[2 * i];
        const double hi = re[2 * i + 1];
        if (hi - lo > kPairingTol * std::max(1.0, std::abs(hi)))
            throw NumericalError(
                "symplectic spectrum: paired multiplicity violated");
        nu[i] = std::sqrt(std::max(0.0, 0.5 * (lo + hi)));
    }
    return nu;
}

}  // namespace

// ---------------------------------------------------------------- types ---

CovarianceMatrix::CovarianceMatrix(int modes, Matrix entries)
    : modes_(modes), entries_(std::move(entries)) {
    if (modes_ < 1) throw std::invalid_argument("covariance: modes must be >= 1");
    if (entries_.rows() != 2 * modes_ || entries_.cols() != 2 * modes_) {
        std::ostringstream msg;
        msg << "covariance: expected " << 2 * modes_ << "x" << 2 * modes_
            << " matrix, got " << entries_.rows() << "x" << entries_.cols();
        throw std::invalid_argument(msg.str());
    }
    if (!is_finite(entries_))
        throw std::invalid_argument("covariance: non-finite entries");
    if (symmetry_residual(entries_) > kSymmetryRelTol)
        throw std::invalid_argument("covariance: matrix not symmetric");
    // fold rounding-level asymmetry away so downstream algebra sees an
    // exactly symmetric matrix
    entries_ = 0.5 * (entries_ + entries_.transpose()).eval();
}

CovarianceMatrix CovarianceMatrix::identity(int modes) {
    return CovarianceMatrix(modes, Matrix::Identity(2 * modes, 2 * modes));
}

CovarianceMatrix CovarianceMatrix::from_spectrum(const std::vector<double>& nu) {
    const int n = static_cast<int>(nu.size());
    if (n < 1) throw std::invalid_argument("from_spectrum: empty spectrum");
    Matrix d = Matrix::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        d(i, i) = nu[i];
        d(n + i, n + i) = nu[i];
    }
    return CovarianceMatrix(n, std::move(d));
}

SymplecticSpectrum::SymplecticSpectrum(std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.empty())
        throw std::invalid_argument("spectrum: at least one mode required");
    for (double v : values_) {
        if (!std::isfinite(v))
            throw std::invalid_argument("spectrum: non-finite value");
    }
    std::sort(values_.begin(), values_.end());
    for (double& v : values_) {
        if (v >= 1.0 - kPhysicalTol && v < 1.0) v = 1.0;
    }
}

bool SymplecticSpectrum::physical() const {
    return values_.front() >= 1.0 - kPhysicalTol;
}

Matrix HamiltonianGenerator::assembled() const {
    const int n = modes();
    Matrix x(2 * n, 2 * n);
    x.topLeftCorner(n, n) = a;
    x.topRightCorner(n, n) = b;
    x.bottomLeftCorner(n, n) = c;
    x.bottomRightCorner(n, n) = -a.transpose();
    return x;
}

// ----------------------------------------------------------- operations ---

Matrix symplectic_form(int modes) {
    if (modes < 1) throw std::invalid_argument("symplectic_form: modes >= 1");
    Matrix j = Matrix::Zero(2 * modes, 2 * modes);
    j.topRightCorner(modes, modes) = Matrix::Identity(modes, modes);
    j.bottomLeftCorner(modes, modes) = -Matrix::Identity(modes, modes);
    return j;
}

SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix& sigma) {
    return SymplecticSpectrum(
        extract_paired_spectrum(jsigma_squared_eigenvalues(sigma.entries())));
}

ValidityReport validate_covariance(const Matrix& sigma) {
    if (sigma.rows() != sigma.cols())
        throw std::invalid_argument("validate: matrix not square");
    if (sigma.rows() % 2 != 0 || sigma.rows() == 0)
        throw std::invalid_argument("validate: dimension must be even and > 0");
    if (!is_finite(sigma))
        throw std::invalid_argument("validate: non-finite entries");
    if (symmetry_residual(sigma) > kSymmetryRelTol)
        return {false, std::numeric_limits<double>::quiet_NaN()};

    const Eigen::VectorXcd raw = jsigma_squared_eigenvalues(sigma);
    double scale = 1.0, min_re = std::numeric_limits<double>::infinity();
    double max_im = 0.0;
    for (int i = 0; i < raw.size(); ++i) {
        scale = std::max(scale, std::abs(raw[i]));
        max_im = std::max(max_im, std::abs(raw[i].imag()));
        min_re = std::min(min_re, raw[i].real());
    }
    // complex quartets or negative nu^2 mean Sigma is not even positive
    // definite; report the clamped value rather than throwing
    const double min_nu = std::sqrt(std::max(0.0, min_re));
    const bool clean = max_im <= kImagResidueTol * scale;
    return {clean && min_nu >= 1.0 - kPhysicalTol, clean ? min_nu : 0.0};
}

ValidityReport validate_covariance(const CovarianceMatrix& sigma) {
    return validate_covariance(sigma.entries());
}

HamiltonianGenerator assemble_generator(const Matrix& a, const Matrix& b,
                                        const Matrix& c, bool canonical) {
    const auto n = a.rows();
    if (a.cols() != n || b.rows() != n || b.cols() != n || c.rows() != n ||
        c.cols() != n)
        throw std::invalid_argument("generator: blocks must be square N x N");
    if (!a.allFinite() || !b.allFinite() || !c.allFinite())
        throw std::invalid_argument("generator: non-finite entries");
    if ((b - b.transpose()).cwiseAbs().maxCoeff() > kGeneratorSymTol)
        throw std::invalid_argument("generator: b not symmetric");
    if ((c - c.transpose()).cwiseAbs().maxCoeff() > kGeneratorSymTol)
        throw std::invalid_argument("generator: c not symmetric");

    HamiltonianGenerator gen{a, 0.5 * (b + b.transpose()),
                             0.5 * (c + c.transpose()), canonical, false};
    if (canonical) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (gen.c(i, i) != 0.0) {
                gen.c(i, i) = 0.0;
                gen.diagonal_zeroed = true;
            }
        }
    }
    return gen;
}

Matrix symplectic_exp(const HamiltonianGenerator& x) {
    const Matrix s = x.assembled().exp();
    if (!s.allFinite())
        throw NumericalError("symplectic_exp: exponential did not converge");
    return s;
}

CovarianceMatrix conjugate(const CovarianceMatrix& sigma, const Matrix& s) {
    if (s.rows() != sigma.dim() || s.cols() != sigma.dim())
        throw std::invalid_argument("conjugate: dimension mismatch");
    const Matrix j = symplectic_form(sigma.modes());
    if ((s.transpose() * j * s - j).cwiseAbs().maxCoeff() > kSymplecticCheckTol)
        throw std::invalid_argument("conjugate: transform is not symplectic");
    return CovarianceMatrix(sigma.modes(),
                            s.transpose() * sigma.entries() * s);
}

Matrix interleaved_to_block(const Matrix& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() % 2 != 0)
        throw std::invalid_argument(
            "interleaved_to_block: even square matrix required");
    const int n = static_cast<int>(sigma.rows()) / 2;
    Eigen::VectorXi perm(2 * n);  // block index -> interleaved index
    for (int i = 0; i < n; ++i) {
        perm[i] = 2 * i;
        perm[n + i] = 2 * i + 1;
    }
    Matrix out(2 * n, 2 * n);
    for (int r = 0; r < 2 * n; ++r)
        for (int col = 0; col < 2 * n; ++col)
            out(r, col) = sigma(perm[r], perm[col]);
    return out;
}

}  // namespace gaussgeo
