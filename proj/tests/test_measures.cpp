#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gaussgeo/measures.hpp"
#include "gaussgeo/quadrature.hpp"

using namespace gaussgeo;

TEST_CASE("adaptive Gauss-Kronrod on reference integrals") {
    // degree <= 22 is exact on a single panel
    auto poly = [](double x) { return x * x * x * x * x * x * x * x; };
    const auto r1 = integrate(poly, 0.0, 1.0);
    CHECK(r1.value == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(r1.evaluations == 15);

    // endpoint cusp forces subdivision
    QuadratureConfig tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-14;
    const auto r2 = integrate([](double t) { return std::sqrt(t); }, 0.0, 1.0, tight);
    CHECK(r2.converged);
    CHECK(r2.value == doctest::Approx(2.0 / 3.0).epsilon(1e-11));

    const auto r3 = integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0);
    CHECK(r3.value == doctest::Approx(std::sqrt(3.14159265358979323846)).epsilon(1e-12));
}

TEST_CASE("improper integrals: transform and truncated tail") {
    auto decay = [](double nu) { return std::pow(nu, -2.5); };
    const auto exact = integrate_upper_infinite(decay, 1.0);
    CHECK(exact.value == doctest::Approx(2.0 / 3.0).epsilon(1e-11));

    QuadratureConfig truncated;
    truncated.nu_max = 100.0;
    truncated.tail_extrapolation = true;
    auto cubic = [](double nu) { return std::pow(nu, -3.0); };
    const auto fitted = integrate_upper_infinite(cubic, 1.0, truncated);
    // pure power law: the fitted tail is exact
    CHECK(fitted.value == doctest::Approx(0.5).epsilon(1e-10));

    QuadratureConfig no_tail;
    no_tail.nu_max = 100.0;
    const auto chopped = integrate_upper_infinite(cubic, 1.0, no_tail);
    CHECK(chopped.value == doctest::Approx(0.5 - 0.5e-4).epsilon(1e-10));
}

TEST_CASE("sqrt(det g) closed form") {
    // N=1: prefactor sqrt(2)/4 with empty interaction product
    CHECK(hs_sqrt_det_g(SymplecticSpectrum({1.0})) ==
          doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-14));
    // N=1, nu=4: exponent N(N+5/2)-1 = 5/2 -> 4^(-5/2) = 1/32
    CHECK(hs_sqrt_det_g(SymplecticSpectrum({4.0})) ==
          doctest::Approx(std::sqrt(2.0) / 128.0).epsilon(1e-13));
    // coincident eigenvalues kill the density for N >= 2
    CHECK(hs_sqrt_det_g(SymplecticSpectrum({1.7, 1.7})) == 0.0);
}

TEST_CASE("spectral shape is permutation symmetric") {
    const std::vector<double> a{1.2, 2.7, 4.1};
    const std::vector<double> b{4.1, 1.2, 2.7};
    CHECK(spectral_shape(a) == doctest::Approx(spectral_shape(b)).epsilon(1e-13));
}

TEST_CASE("normalized spectral densities") {
    const auto p1 = hs_spectral_density(SymplecticSpectrum({1.0}), true);
    CHECK(p1.value == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(p1.normalized);
    CHECK(p1.normalization_constant.value() == doctest::Approx(1.5).epsilon(1e-13));

    // P_1(nu) = (3/2) nu^(-5/2)
    CHECK(hs_spectral_density(SymplecticSpectrum({2.0}), true).value ==
          doctest::Approx(1.5 * std::pow(2.0, -2.5)).epsilon(1e-13));

    CHECK(hs_spectral_density(SymplecticSpectrum({1.3, 1.3}), true).value == 0.0);

    const auto raw = hs_spectral_density(SymplecticSpectrum({2.0}), false);
    CHECK_FALSE(raw.normalized);
    CHECK_FALSE(raw.normalization_constant.has_value());
    CHECK(raw.value == doctest::Approx(hs_sqrt_det_g(SymplecticSpectrum({2.0}))));
}

TEST_CASE("two-mode density peaks at {1, sqrt(2)}") {
    const double c2 = hs_normalization_constant(2);
    double best = -1.0, best_n1 = 0.0, best_n2 = 0.0;
    const int grid = 281;  // spacing 0.01 on [1, 3.8]
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double n1 = 1.0 + 0.01 * i;
            const double n2 = 1.0 + 0.01 * j;
            const double v = c2 * spectral_shape({n1, n2});
            if (v > best) {
                best = v;
                best_n1 = n1;
                best_n2 = n2;
            }
        }
    }
    const double lo = std::min(best_n1, best_n2);
    const double hi = std::max(best_n1, best_n2);
    CHECK(lo == doctest::Approx(1.0).epsilon(0.02));
    CHECK(hi == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("normalization constants: exact values and quadrature route") {
    CHECK(hs_normalization_constant(1) == 1.5);
    CHECK(hs_normalization_constant(2) == 525.0 / 8.0);

    QuadratureConfig cfg;
    cfg.rel_tol = 1e-10;
    CHECK(hs_normalization_constant_quadrature(1, cfg) ==
          doctest::Approx(1.5).epsilon(1e-8));
    CHECK(hs_normalization_constant_quadrature(2, cfg) ==
          doctest::Approx(65.625).epsilon(1e-8));

    // N=3 regression: exact moment-determinant value 210211194375 / 2^18
    QuadratureConfig loose;
    loose.rel_tol = 1e-8;
    const double c3 = hs_normalization_constant_quadrature(3, loose);
    CHECK(c3 == doctest::Approx(801892.068386077880859375).epsilon(1e-7));
    CHECK(c3 > 0.0);

    // cache path agrees with the quadrature path
    CHECK(hs_normalization_constant(3, loose) == doctest::Approx(c3).epsilon(1e-7));

    CHECK_THROWS_AS(hs_normalization_constant_quadrature(7, cfg), std::invalid_argument);
}

TEST_CASE("one-mode Bures spectral density") {
    // hand evaluation at nu = sqrt(3): 3 / ((3+1) sqrt(2))
    CHECK(bures_spectral_density_one_mode(std::sqrt(3.0)) ==
          doctest::Approx(3.0 / (4.0 * std::sqrt(2.0))).epsilon(1e-13));
    CHECK_THROWS_AS(bures_spectral_density_one_mode(1.0), std::domain_error);
    CHECK_THROWS_AS(bures_spectral_density_one_mode(0.5), std::domain_error);

    // (nu - 1)^(-1/2) blow-up: value * sqrt(delta) -> 1 / (2 sqrt(2))
    for (double delta : {1e-6, 1e-8, 1e-10}) {
        const double scaled =
            bures_spectral_density_one_mode(1.0 + delta) * std::sqrt(delta);
        CHECK(scaled == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(2e-3));
    }

    // 1/nu tail
    CHECK(bures_spectral_density_one_mode(1e6) * 1e6 ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("purity density: one-mode closed form") {
    for (int j = 0; j < 100; ++j) {
        const double mu = (j + 0.5) / 100.0;
        // generic pushforward formula P_1(1/mu)/mu^2 against (3/2) sqrt(mu)
        const double pushforward =
            1.5 * std::pow(1.0 / mu, -2.5) / (mu * mu);
        CHECK(purity_density(1, mu) == doctest::Approx(1.5 * std::sqrt(mu)).epsilon(1e-10));
        CHECK(purity_density(1, mu) == doctest::Approx(pushforward).epsilon(1e-10));
    }
}

TEST_CASE("purity density: two-mode closed form") {
    // integrating the delta-constrained density by hand gives
    // P_2(mu) = (525/16) mu^2 (1 - mu^4 + 4 mu^2 ln mu); frozen evaluations
    // below come from a 40-digit oracle run of that expression
    const struct { double mu, density; } table[] = {
        {0.10, 0.2978707581544531504},
        {0.25, 1.3320237650508373292},
        {0.50, 2.0044567219691986337},
        {0.75, 0.6701579531132969342},
        {0.90, 0.0672939325931464941},
    };
    for (const auto& row : table) {
        CHECK(purity_density(2, row.mu) ==
              doctest::Approx(row.density).epsilon(1e-8));
    }
}

TEST_CASE("purity density: vanishes at both endpoints for N = 2") {
    CHECK(purity_density(2, 1e-4) < 1e-5);
    CHECK(purity_density(2, 1e-4) < purity_density(2, 1e-2));
    CHECK(purity_density(2, 1.0) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(purity_density(1, 1e-4) == doctest::Approx(0.015).epsilon(1e-9));
}

TEST_CASE("purity density: normalization for N = 1, 2") {
    for (int modes : {1, 2}) {
        QuadratureConfig inner;
        inner.rel_tol = 1e-9;
        auto density = [&](double mu) { return purity_density(modes, mu, inner); };
        QuadratureConfig outer;
        outer.rel_tol = 1e-8;
        const auto r = integrate(density, 0.0, 1.0, outer);
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("purity density: argument validation") {
    CHECK_THROWS_AS(purity_density(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(purity_density(1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(purity_density(5, 0.5), std::invalid_argument);
}
