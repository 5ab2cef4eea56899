#include "gaussgeo/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "gaussgeo/metrics.hpp"

namespace gaussgeo {

namespace {

constexpr std::uint64_t kBlockSize = 4096;  // deterministic merge granularity

double observable_of_values(Observable obs, const std::vector<double>& nu) {
    switch (obs) {
        case Observable::purity: {
            double prod = 1.0;
            for (double v : nu) prod *= v;
            return 1.0 / prod;
        }
        case Observable::entropy: {
            double sum = 0.0;
            for (double v : nu) sum += von_neumann_entropy_term(v);
            return sum;
        }
        case Observable::unit:
            return 1.0;
    }
    throw std::invalid_argument("unknown observable");
}

struct BlockSums {
    double sum = 0.0;
    double sum_sq = 0.0;
};

// sech(theta) without overflow for any theta >= 0
double sech(double theta) {
    const double e = std::exp(-theta);
    return 2.0 * e / (1.0 + e * e);
}

// observable as a function of theta with nu = cosh(theta)
double bures_observable(Observable obs, double theta) {
    switch (obs) {
        case Observable::unit:
            return 1.0;
        case Observable::purity:
            return sech(theta);
        case Observable::entropy: {
            const double s = sech(theta);
            if (s > 1e-12) return von_neumann_entropy_term(1.0 / s);
            return theta - 2.0 * std::log(2.0) + 1.0;  // ln(nu/2) + 1 tail
        }
    }
    throw std::invalid_argument("unknown observable");
}

double bures_integral(Observable obs, double nu_max,
                      const QuadratureConfig& cfg) {
    if (!(nu_max > 1.0))
        throw std::invalid_argument("bures integral: cutoff must exceed 1");
    const double theta_max = std::acosh(nu_max);
    auto integrand = [obs](double theta) {
        const double s = sech(theta);
        return bures_observable(obs, theta) / (1.0 + s * s);
    };
    QuadratureResult r = integrate(integrand, 0.0, theta_max, cfg);
    if (!r.converged)
        throw NumericalError("bures integral: quadrature failed to converge");
    return r.value;
}

}  // namespace

std::string observable_name(Observable obs) {
    switch (obs) {
        case Observable::purity: return "purity";
        case Observable::entropy: return "entropy";
        case Observable::unit: return "unit";
    }
    return "unknown";
}

double evaluate_observable(Observable obs, const SymplecticSpectrum& spectrum) {
    return observable_of_values(obs, spectrum.values());
}

EnsembleSummary mc_mean(Observable obs, int modes, std::uint64_t count,
                        std::uint64_t seed, int workers) {
    if (count < 1) throw std::invalid_argument("mc_mean: count must be >= 1");
    SamplerConfig config;
    config.modes = modes;
    config.seed = seed;

    const std::uint64_t blocks = (count + kBlockSize - 1) / kBlockSize;
    std::vector<BlockSums> sums(blocks);
    std::vector<std::exception_ptr> failures(std::max(1, workers));

    auto run = [&](int w, int stride) {
        try {
            for (std::uint64_t blk = w; blk < blocks; blk += stride) {
                const std::uint64_t lo = blk * kBlockSize;
                const std::uint64_t hi = std::min(count, lo + kBlockSize);
                BlockSums local;
                for (std::uint64_t i = lo; i < hi; ++i) {
                    Rng rng(derive_stream(seed, i));
                    const double v = observable_of_values(
                        obs, sample_spectrum(config, rng).values());
                    local.sum += v;
                    local.sum_sq += v * v;
                }
                sums[blk] = local;
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };

    workers = std::max(1, workers);
    if (workers == 1) {
        run(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
        for (auto& t : pool) t.join();
    }
    for (auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    double sum = 0.0, sum_sq = 0.0;
    for (const auto& blk : sums) {  // fixed merge order: independent of workers
        sum += blk.sum;
        sum_sq += blk.sum_sq;
    }
    const double n = static_cast<double>(count);
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    EnsembleSummary summary;
    summary.observable = observable_name(obs);
    summary.modes = modes;
    summary.method = "monte-carlo";
    summary.estimate = mean;
    summary.standard_error = (count > 1) ? std::sqrt(var / (n - 1.0)) : 0.0;
    summary.sample_count = count;
    summary.seed = seed;
    return summary;
}

EnsembleSummary quad_mean(Observable obs, int modes, const QuadratureConfig& cfg) {
    if (modes < 1 || modes > 4)
        throw std::invalid_argument(
            "quad_mean: nested quadrature practical for 1 <= modes <= 4");
    QuadratureConfig eff = cfg;
    eff.rel_tol = std::max(cfg.rel_tol, spectral_tolerance_floor(modes));
    const double numerator = spectral_integral(
        modes,
        [obs](const std::vector<double>& nu) {
            return observable_of_values(obs, nu);
        },
        eff);
    const double denominator = spectral_integral(
        modes, [](const std::vector<double>&) { return 1.0; }, eff);
    EnsembleSummary summary;
    summary.observable = observable_name(obs);
    summary.modes = modes;
    summary.method = "quadrature";
    summary.estimate = numerator / denominator;
    summary.tolerance = eff.rel_tol;
    return summary;
}

HistogramSeries purity_histogram(int modes, std::uint64_t count, int bins,
                                 std::uint64_t seed, int workers) {
    if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
    if (count < static_cast<std::uint64_t>(bins))
        throw std::invalid_argument("histogram: count must be >= bins");
    SamplerConfig config;
    config.modes = modes;
    config.seed = seed;

    workers = std::max(1, workers);
    std::vector<std::vector<std::uint64_t>> local(
        workers, std::vector<std::uint64_t>(bins, 0));
    std::vector<std::exception_ptr> failures(workers);
    auto run = [&](int w) {
        try {
            for (std::uint64_t i = w; i < count; i += workers) {
                Rng rng(derive_stream(seed, i));
                const double mu = observable_of_values(
                    Observable::purity, sample_spectrum(config, rng).values());
                const int idx = std::min(
                    bins - 1, static_cast<int>(mu * static_cast<double>(bins)));
                ++local[w][idx];
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    for (auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    HistogramSeries series;
    series.edges.resize(bins + 1);
    for (int j = 0; j <= bins; ++j)
        series.edges[j] = static_cast<double>(j) / bins;
    series.counts.assign(bins, 0);
    for (const auto& counts : local)
        for (int j = 0; j < bins; ++j) series.counts[j] += counts[j];
    series.total = count;
    series.heights.resize(bins);
    const double width = 1.0 / bins;
    for (int j = 0; j < bins; ++j)
        series.heights[j] =
            static_cast<double>(series.counts[j]) / (width * static_cast<double>(count));
    return series;
}

double bures_truncated_integral(double nu_max, const QuadratureConfig& cfg) {
    return bures_integral(Observable::unit, nu_max, cfg);
}

double bures_truncated_mean(Observable obs, double nu_max,
                            const QuadratureConfig& cfg) {
    const double numerator = bures_integral(obs, nu_max, cfg);
    const double denominator = bures_integral(Observable::unit, nu_max, cfg);
    return numerator / denominator;
}

FigureTable figure_data(Figure figure, const FigureParams& params) {
    FigureTable table;
    switch (figure) {
        case Figure::means: {
            if (params.quad_modes_max < 1 || params.quad_modes_max > 4)
                throw std::invalid_argument("figure means: quadrature rows need 1..4 modes");
            table.columns = {"modes", "mean_purity", "purity_se",
                             "mean_entropy", "entropy_se", "samples"};
            for (int n = 1; n <= params.quad_modes_max; ++n) {
                const auto mu = quad_mean(Observable::purity, n, params.quadrature);
                const auto ent = quad_mean(Observable::entropy, n, params.quadrature);
                table.rows.push_back({static_cast<double>(n), mu.estimate, 0.0,
                                      ent.estimate, 0.0, 0.0});
            }
            for (int n : params.mc_modes) {
                const auto mu = mc_mean(Observable::purity, n, params.mc_count,
                                        params.seed);
                const auto ent = mc_mean(Observable::entropy, n, params.mc_count,
                                         params.seed);
                table.rows.push_back({static_cast<double>(n), mu.estimate,
                                      mu.standard_error, ent.estimate,
                                      ent.standard_error,
                                      static_cast<double>(params.mc_count)});
            }
            return table;
        }
        case Figure::purity_dist: {
            if (params.grid < 2)
                throw std::invalid_argument("figure purity_dist: grid must be >= 2");
            table.columns = {"mu", "density"};
            for (int j = 0; j < params.grid; ++j) {
                const double mu = (j + 0.5) / params.grid;
                table.rows.push_back(
                    {mu, purity_density(params.modes, mu, params.quadrature)});
            }
            return table;
        }
        case Figure::spectral_density: {
            if (params.grid < 2)
                throw std::invalid_argument("figure spectral_density: grid must be >= 2");
            if (!(params.range_max > 1.0))
                throw std::invalid_argument("figure spectral_density: range must exceed 1");
            auto grid_point = [&](int j) {
                return 1.0 + (params.range_max - 1.0) * j / (params.grid - 1);
            };
            if (params.modes == 1) {
                table.columns = {"nu", "density"};
                for (int j = 0; j < params.grid; ++j) {
                    const double nu = grid_point(j);
                    table.rows.push_back(
                        {nu, hs_spectral_density(SymplecticSpectrum({nu}), true)
                                 .value});
                }
                return table;
            }
            if (params.modes == 2) {
                table.columns = {"nu1", "nu2", "density"};
                for (int j1 = 0; j1 < params.grid; ++j1) {
                    for (int j2 = 0; j2 < params.grid; ++j2) {
                        const double nu1 = grid_point(j1);
                        const double nu2 = grid_point(j2);
                        const double value =
                            hs_normalization_constant(2) *
                            spectral_shape({nu1, nu2});
                        table.rows.push_back({nu1, nu2, value});
                    }
                }
                return table;
            }
            throw std::invalid_argument(
                "figure spectral_density: plotted for 1 or 2 modes");
        }
    }
    throw std::invalid_argument("unknown figure selector");
}

}  // namespace gaussgeo
