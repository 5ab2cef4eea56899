#include "gaussgeo/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "gaussgeo/measures.hpp"

namespace gaussgeo {

namespace {

double resolve_exponent(const SamplerConfig& config) {
    const double def = default_proposal_exponent(config.modes);
    if (config.proposal_tail_exponent == 0.0) return def;
    const double beta = config.proposal_tail_exponent;
    if (!(beta > 1.0) || beta > def + 1e-12)
        throw std::invalid_argument(
            "sampler: proposal exponent must lie in (1, N^2 - 1.5N + 3]");
    return beta;
}

// power-law proposal on [1, inf) by CDF inversion
double draw_proposal(Rng& rng, double beta) {
    return std::pow(1.0 - rng.next_uniform(), -1.0 / (beta - 1.0));
}

}  // namespace

double default_proposal_exponent(int modes) {
    return modes * modes - 1.5 * modes + 3.0;
}

double one_mode_quantile(double u) {
    if (!(u >= 0.0) || u >= 1.0)
        throw std::invalid_argument("quantile: u must lie in [0, 1)");
    return std::pow(1.0 - u, -2.0 / 3.0);
}

SymplecticSpectrum sample_spectrum_one_mode(Rng& rng) {
    return SymplecticSpectrum({one_mode_quantile(rng.next_uniform())});
}

// prod_k nu_k^(beta - p) * prod_{l>m} (nu_l^2 - nu_m^2)^2, grouped per pair
// so every partial product stays in [0, 1] for the default exponent
double rejection_acceptance_probability(const std::vector<double>& nu,
                                        double beta) {
    const int n = static_cast<int>(nu.size());
    if (n < 1) throw std::invalid_argument("acceptance: empty tuple");
    const double p = spectral_exponent(n);
    if (beta == 0.0) beta = default_proposal_exponent(n);
    double prob = 1.0;
    const double residual = beta - p + 4.0 * (n - 1);  // 0 at the default beta
    for (int l = 0; l < n; ++l) {
        if (residual != 0.0) prob *= std::pow(nu[l], residual);
        for (int m = 0; m < l; ++m) {
            const double num = nu[l] * nu[l] - nu[m] * nu[m];
            const double den = nu[l] * nu[l] * nu[m] * nu[m];
            prob *= (num / den) * (num / den);
        }
    }
    return prob;
}

SymplecticSpectrum sample_spectrum(const SamplerConfig& config, Rng& rng,
                                   std::uint64_t* attempts) {
    if (config.modes < 1)
        throw std::invalid_argument("sampler: modes must be >= 1");
    const double beta = resolve_exponent(config);
    std::vector<double> nu(config.modes);
    for (std::uint64_t retry = 0; retry < config.max_retries; ++retry) {
        for (auto& v : nu) v = draw_proposal(rng, beta);
        if (attempts) ++*attempts;
        if (config.modes == 1) return SymplecticSpectrum(nu);
        const double prob = rejection_acceptance_probability(nu, beta);
        if (rng.next_uniform() < prob) return SymplecticSpectrum(nu);
    }
    // TODO: MCMC backend for modes >= 4, where the one-shot acceptance rate
    // falls below ~1e-8 and rejection sampling stops being viable
    throw NumericalError(
        "sampler: rejection retry budget exhausted; acceptance collapses for "
        "large mode counts (consider fewer modes or a larger budget)");
}

SampleBatch sample_spectrum_batch(const SamplerConfig& config,
                                  std::uint64_t count, int workers) {
    SampleBatch batch;
    batch.spectra.reserve(count);
    if (count == 0) return batch;
    workers = std::max(1, workers);

    std::vector<std::vector<double>> values(count);
    std::vector<std::uint64_t> attempts(workers, 0);
    std::vector<std::exception_ptr> failures(workers);

    auto run = [&](int w) {
        try {
            for (std::uint64_t i = w; i < count; i += workers) {
                Rng rng(derive_stream(config.seed, i));
                values[i] =
                    sample_spectrum(config, rng, &attempts[w]).values();
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    for (auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    for (auto& v : values) batch.spectra.emplace_back(std::move(v));
    for (auto a : attempts) batch.attempts += a;
    batch.acceptance_rate =
        static_cast<double>(count) / static_cast<double>(batch.attempts);
    return batch;
}

CovarianceMatrix sample_covariance(const SamplerConfig& config,
                                   double generator_scale, Rng& rng) {
    if (!(generator_scale >= 0.0))
        throw std::invalid_argument("sample_covariance: scale must be >= 0");
    const SymplecticSpectrum spectrum = sample_spectrum(config, rng);
    const int n = config.modes;
    Matrix a(n, n), b(n, n), c(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = generator_scale * rng.next_normal();
    for (int i = 0; i < n; ++i) {
        b(i, i) = generator_scale * rng.next_normal();
        c(i, i) = 0.0;  // canonical gauge: these directions do not move Sigma
        for (int j = 0; j < i; ++j) {
            b(i, j) = b(j, i) = generator_scale * rng.next_normal();
            c(i, j) = c(j, i) = generator_scale * rng.next_normal();
        }
    }
    const Matrix s = symplectic_exp(assemble_generator(a, b, c, true));
    return conjugate(CovarianceMatrix::from_spectrum(spectrum.values()), s);
}

}  // namespace gaussgeo
