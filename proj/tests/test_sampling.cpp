#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gaussgeo/measures.hpp"
#include "gaussgeo/metrics.hpp"
#include "gaussgeo/sampling.hpp"

using namespace gaussgeo;

namespace {

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// exact antiderivative helper: integral of nu^-k over [a, b]
double power_cell(double k, double a, double b) {
    return (std::pow(a, 1.0 - k) - std::pow(b, 1.0 - k)) / (k - 1.0);
}

// exact probability of [a1,b1] x [a2,b2] under normalized P_2, from the
// monomial expansion (nu1^2 - nu2^2)^2 = nu1^4 - 2 nu1^2 nu2^2 + nu2^4
double p2_cell_probability(double a1, double b1, double a2, double b2) {
    const double c2 = 525.0 / 8.0;
    return c2 * (power_cell(4, a1, b1) * power_cell(8, a2, b2) -
                 2.0 * power_cell(6, a1, b1) * power_cell(6, a2, b2) +
                 power_cell(8, a1, b1) * power_cell(4, a2, b2));
}

}  // namespace

TEST_CASE("one-mode quantile function") {
    CHECK(one_mode_quantile(0.0) == 1.0);
    // u = 3/4 -> (1/4)^(-2/3) = 4^(2/3)
    CHECK(one_mode_quantile(0.75) ==
          doctest::Approx(std::pow(4.0, 2.0 / 3.0)).epsilon(1e-14));
    CHECK(one_mode_quantile(0.75) == doctest::Approx(2.5198420997897464).epsilon(1e-13));
    CHECK_THROWS_AS(one_mode_quantile(1.0), std::invalid_argument);
}

TEST_CASE("one-mode sampler passes a KS test against the exact CDF") {
    SamplerConfig config;
    config.modes = 1;
    config.seed = 20250810;
    const auto batch = sample_spectrum_batch(config, 100000);
    CHECK(batch.attempts == 100000);       // acceptance probability 1
    CHECK(batch.acceptance_rate == 1.0);
    std::vector<double> nu;
    nu.reserve(batch.spectra.size());
    for (const auto& s : batch.spectra) nu.push_back(s.values()[0]);
    const double d = ks_statistic(
        std::move(nu), [](double v) { return 1.0 - std::pow(v, -1.5); });
    CHECK(d < 0.01);
}

TEST_CASE("acceptance probability is a bound-respecting density ratio") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_uniform() * 3.0);
        std::vector<double> nu(n);
        for (auto& v : nu) v = 1.0 + 8.0 * rng.next_uniform();
        const double prob = rejection_acceptance_probability(nu);
        CHECK(prob >= 0.0);
        CHECK(prob <= 1.0);
    }
    // coincident proposals are always rejected
    CHECK(rejection_acceptance_probability({1.7, 1.7}) == 0.0);
    // one mode: empty pair product
    CHECK(rejection_acceptance_probability({3.0}) == 1.0);
}

TEST_CASE("two-mode sampler: chi-squared fit against the closed-form density") {
    SamplerConfig config;
    config.modes = 2;
    config.seed = 715517;
    const std::uint64_t count = 100000;
    const auto batch = sample_spectrum_batch(config, count, 4);
    // measured acceptance for N=2 sits near 72/525
    CHECK(batch.acceptance_rate > 0.12);
    CHECK(batch.acceptance_rate < 0.16);

    const int cells = 20;
    const double lo = 1.0, hi = 4.0;
    const double width = (hi - lo) / cells;
    std::vector<double> expected(cells * cells);
    double p_grid = 0.0;
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) {
            expected[i * cells + j] =
                p2_cell_probability(lo + i * width, lo + (i + 1) * width,
                                    lo + j * width, lo + (j + 1) * width);
            p_grid += expected[i * cells + j];
        }

    std::vector<std::uint64_t> observed(cells * cells, 0);
    std::uint64_t inside = 0;
    for (const auto& s : batch.spectra) {
        const double n1 = s.values()[0];
        const double n2 = s.values()[1];
        if (n1 >= hi || n2 >= hi) continue;
        const int i = static_cast<int>((n1 - lo) / width);
        const int j = static_cast<int>((n2 - lo) / width);
        ++observed[i * cells + j];
        ++inside;
    }
    // spectra come sorted (i <= j); fold the expected matrix the same way
    std::vector<double> folded_expected;
    std::vector<double> folded_observed;
    for (int i = 0; i < cells; ++i) {
        for (int j = i; j < cells; ++j) {
            double e = expected[i * cells + j];
            const double o = static_cast<double>(observed[i * cells + j]);
            if (i != j) e += expected[j * cells + i];
            folded_expected.push_back(e / p_grid * static_cast<double>(inside));
            folded_observed.push_back(o);
        }
    }
    // pool cells with tiny expectation to keep the statistic well-behaved
    double chi2 = 0.0, pool_e = 0.0, pool_o = 0.0;
    int dof_cells = 0;
    for (std::size_t k = 0; k < folded_expected.size(); ++k) {
        if (folded_expected[k] < 5.0) {
            pool_e += folded_expected[k];
            pool_o += folded_observed[k];
            continue;
        }
        const double diff = folded_observed[k] - folded_expected[k];
        chi2 += diff * diff / folded_expected[k];
        ++dof_cells;
    }
    if (pool_e > 0.0) {
        const double diff = pool_o - pool_e;
        chi2 += diff * diff / pool_e;
        ++dof_cells;
    }
    const boost::math::chi_squared dist(dof_cells - 1);
    const double p_value = boost::math::cdf(boost::math::complement(dist, chi2));
    CHECK(p_value > 0.01);
}

TEST_CASE("two-mode min-marginal against the quadrature CDF") {
    // cross-check the quadrature CDF against the exact survival m^-10 first,
    // then KS-test the sampler against it
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-10;
    auto min_cdf_quadrature = [&](double m) {
        // P(min <= m) = 1 - P(both > m); integrate P_2 over [m, inf)^2
        auto inner = [&](double n1) {
            auto f = [&](double n2) {
                return 525.0 / 8.0 * spectral_shape({n1, n2});
            };
            return integrate_upper_infinite(f, m, cfg).value;
        };
        return 1.0 - integrate_upper_infinite(inner, m, cfg).value;
    };
    for (double m : {1.1, 1.5, 2.5}) {
        CHECK(min_cdf_quadrature(m) ==
              doctest::Approx(1.0 - std::pow(m, -10.0)).epsilon(1e-7));
    }

    SamplerConfig config;
    config.modes = 2;
    config.seed = 3141;
    const auto batch = sample_spectrum_batch(config, 100000, 4);
    std::vector<double> mins;
    mins.reserve(batch.spectra.size());
    for (const auto& s : batch.spectra) mins.push_back(s.values()[0]);
    const double d = ks_statistic(
        std::move(mins), [](double m) { return 1.0 - std::pow(m, -10.0); });
    CHECK(d < 0.015);
}

TEST_CASE("sampler determinism and worker independence") {
    SamplerConfig config;
    config.modes = 2;
    config.seed = 42;
    const auto serial = sample_spectrum_batch(config, 500, 1);
    const auto repeat = sample_spectrum_batch(config, 500, 1);
    const auto fanned = sample_spectrum_batch(config, 500, 5);
    REQUIRE(serial.spectra.size() == 500);
    for (std::size_t i = 0; i < serial.spectra.size(); ++i) {
        for (int k = 0; k < 2; ++k) {
            CHECK(serial.spectra[i].values()[k] == repeat.spectra[i].values()[k]);
            CHECK(serial.spectra[i].values()[k] == fanned.spectra[i].values()[k]);
        }
    }
    CHECK(serial.attempts == fanned.attempts);

    // every emitted eigenvalue sits on the proposal support
    for (const auto& s : serial.spectra)
        for (double v : s.values()) CHECK(v >= 1.0);
}

TEST_CASE("proposal exponent overrides") {
    SamplerConfig config;
    config.modes = 2;
    config.proposal_tail_exponent = 3.0;  // heavier than default 4: still exact
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const auto s = sample_spectrum(config, rng);
        CHECK(s.values()[0] >= 1.0);
    }
    config.proposal_tail_exponent = 10.0;  // too light: bound breaks
    CHECK_THROWS_AS(sample_spectrum(config, rng), std::invalid_argument);
    config.proposal_tail_exponent = 0.5;   // not integrable
    CHECK_THROWS_AS(sample_spectrum(config, rng), std::invalid_argument);
}

TEST_CASE("sampler failure path: exhausted retry budget") {
    SamplerConfig config;
    config.modes = 4;        // acceptance ~ 3e-9: hopeless with 10 retries
    config.max_retries = 10;
    Rng rng(1);
    CHECK_THROWS_AS(sample_spectrum(config, rng), NumericalError);
}

TEST_CASE("sample_covariance carries the sampled spectrum") {
    SamplerConfig config;
    config.modes = 2;
    config.seed = 77;

    // scale 0: exactly the diagonal matrix with paired entries
    Rng rng_a(derive_stream(config.seed, 0));
    const auto diag = sample_covariance(config, 0.0, rng_a);
    Rng rng_b(derive_stream(config.seed, 0));
    const auto spec = sample_spectrum(config, rng_b);
    for (int i = 0; i < 2; ++i) {
        CHECK(diag.entries()(i, i) == doctest::Approx(spec.values()[i]));
        CHECK(diag.entries()(2 + i, 2 + i) == doctest::Approx(spec.values()[i]));
    }
    CHECK(std::abs(diag.entries()(0, 1)) == 0.0);

    // construction oracle: recovered spectrum and purity match the draw
    for (std::uint64_t i = 1; i <= 20; ++i) {
        Rng rng_c(derive_stream(config.seed, i));
        const auto sigma = sample_covariance(config, 0.4, rng_c);
        Rng rng_d(derive_stream(config.seed, i));
        const auto drawn = sample_spectrum(config, rng_d);
        const auto recovered = symplectic_spectrum(sigma);
        for (int k = 0; k < 2; ++k)
            CHECK(recovered.values()[k] ==
                  doctest::Approx(drawn.values()[k]).epsilon(1e-8));
        CHECK(purity(recovered) ==
              doctest::Approx(purity(drawn)).epsilon(1e-9));
    }

    CHECK_THROWS_AS(sample_covariance(config, -1.0, rng_a), std::invalid_argument);
}
