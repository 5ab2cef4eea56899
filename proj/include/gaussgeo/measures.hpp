// measures.hpp — closed-form measure densities and their normalizations
//
// The joint density of symplectic eigenvalues under the Hilbert-Schmidt
// measure is proportional to
//
//   shape_N(nu) = (prod_k nu_k)^(-p_N) * prod_{l>m} (nu_l^2 - nu_m^2)^2,
//   p_N = N (N + 5/2) - 1,
//
// on [1, inf)^N. The metric determinant carries the additional constant
// sqrt(N+1) / 4^(N^2). Normalization constants C_N (so that C_N * shape_N is
// a probability density) are exact rationals for N = 1, 2 and quadrature
// values, cached per N, beyond that.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "gaussgeo/quadrature.hpp"
#include "gaussgeo/symplectic.hpp"

namespace gaussgeo {

struct DensityEvaluation {
    double value = 0.0;
    bool normalized = false;
    // The constant that scales shape_N to a probability density; absent for
    // unnormalized evaluations.
    std::optional<double> normalization_constant;
};

// p_N = N (N + 5/2) - 1
double spectral_exponent(int modes);

// Relative-tolerance floor applied to N-dimensional nested quadrature so
// that cost stays bounded as the dimension grows (0 for N <= 3, loosening
// to 3e-3 at N = 6).
double spectral_tolerance_floor(int modes);

// shape_N without the metric prefactor. Symmetric under permutations; zero
// iff two eigenvalues coincide.
double spectral_shape(const std::vector<double>& nu);

// sqrt(det g) = sqrt(N+1)/4^(N^2) * shape_N(nu).
double hs_sqrt_det_g(const SymplecticSpectrum& spectrum);

// Unnormalized: value = hs_sqrt_det_g. Normalized: value = C_N * shape_N,
// e.g. P_1(nu) = (3/2) nu^(-5/2).
DensityEvaluation hs_spectral_density(const SymplecticSpectrum& spectrum,
                                      bool normalized,
                                      const QuadratureConfig& cfg = QuadratureConfig{});

// C_N = 1 / integral of shape_N over [1, inf)^N. Exact for N = 1 (3/2) and
// N = 2 (525/8); nested quadrature, cached per N, for 3 <= N <= 6 (tolerance
// degrades with N; see implementation).
double hs_normalization_constant(int modes,
                                 const QuadratureConfig& cfg = QuadratureConfig{});

// Always takes the quadrature route, bypassing exact values and the cache.
double hs_normalization_constant_quadrature(
    int modes, const QuadratureConfig& cfg = QuadratureConfig{});

// One-mode Bures spectral density nu^2 / ((nu^2 + 1) sqrt(nu^2 - 1)) on
// (1, inf). Not normalizable (1/nu tail); integrable (nu-1)^(-1/2)
// singularity at the left endpoint. Throws std::domain_error for nu <= 1.
double bures_spectral_density_one_mode(double nu);

// Constant in front of the one-mode Bures volume element; kept for
// completeness, cancels in every normalized quantity.
inline constexpr double kBuresVolumePrefactor = 0.25;

// Density of the purity mu = prod 1/nu_i under the normalized spectral
// distribution, obtained by integrating out nu_2..nu_N against the
// delta-constraint (the nu_1 integral is closed-form):
//   P(mu) = int dnu_2..dnu_N P_N(1/(mu nu_2..nu_N), nu_2, ..) / (mu^2 nu_2..nu_N).
// N = 1 reduces to (3/2) sqrt(mu) with no integral left.
double purity_density(int modes, double mu,
                      const QuadratureConfig& cfg = QuadratureConfig{});

namespace detail {

// log-magnitude-safe weight of level k in the nested integral below:
//   nu^(-p) / t^2 * prod_{j<k} (nu^2 - nu_j^2)^2   with nu = 1/t.
inline double spectral_level_weight(double nu, double t, double p,
                                    const std::vector<double>& fixed, int k) {
    if (nu > 1e30) {
        double log_w = -p * std::log(nu) - 2.0 * std::log(t);
        for (int j = 0; j < k; ++j) {
            const double ratio = fixed[j] / nu;
            log_w += 2.0 * (2.0 * std::log(nu) + std::log1p(-ratio * ratio));
        }
        return std::exp(log_w);  // underflows to 0 harmlessly
    }
    double w = std::pow(nu, -p) / (t * t);
    for (int j = 0; j < k; ++j) {
        const double d = nu * nu - fixed[j] * fixed[j];
        w *= d * d;
    }
    return w;
}

}  // namespace detail

// Nested adaptive quadrature of leaf(nu) * shape_N(nu) over [1, inf)^N,
// one Gauss-Kronrod level per eigenvalue with nu = 1/t on each level.
// leaf receives the full eigenvalue tuple and must be permutation
// symmetric: the integral runs over the ordered wedge
// nu_1 <= ... <= nu_N and is scaled by N!. Relative tolerance is split
// evenly across levels; all integrands here are nonnegative, so relative
// errors compose additively.
template <typename Leaf>
double spectral_integral(int modes, Leaf&& leaf, const QuadratureConfig& cfg) {
    const double p = spectral_exponent(modes);
    QuadratureConfig level_cfg = cfg;
    level_cfg.rel_tol = cfg.rel_tol / modes;
    level_cfg.abs_tol = 0.0;
    std::vector<double> nu(modes);
    std::function<double(int)> level = [&](int k) -> double {
        const double upper_t = (k == 0) ? 1.0 : 1.0 / nu[k - 1];
        auto integrand = [&, k](double t) -> double {
            const double v = 1.0 / t;
            nu[k] = v;
            const double w = detail::spectral_level_weight(v, t, p, nu, k);
            if (w == 0.0) return 0.0;
            if (k + 1 == modes) return w * leaf(nu);
            return w * level(k + 1);
        };
        QuadratureResult r = integrate(integrand, 0.0, upper_t, level_cfg);
        if (!r.converged)
            throw NumericalError("spectral_integral: level quadrature failed");
        return r.value;
    };
    double permutations = 1.0;
    for (int i = 2; i <= modes; ++i) permutations *= i;
    return permutations * level(0);
}

}  // namespace gaussgeo
