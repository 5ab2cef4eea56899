// ensemble.hpp — ensemble means, purity distributions, and figure tables
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaussgeo/measures.hpp"
#include "gaussgeo/sampling.hpp"

namespace gaussgeo {

enum class Observable { purity, entropy, unit };

std::string observable_name(Observable obs);
double evaluate_observable(Observable obs, const SymplecticSpectrum& spectrum);

struct EnsembleSummary {
    std::string observable;
    int modes = 0;
    std::string method;  // "monte-carlo" | "quadrature"
    double estimate = 0.0;
    double standard_error = 0.0;  // 0 for quadrature
    std::uint64_t sample_count = 0;  // 0 for quadrature
    double tolerance = 0.0;          // 0 for Monte Carlo
    std::uint64_t seed = 0;          // 0 for quadrature
};

// Empirical mean over sample_spectrum draws. Partial sums are accumulated in
// fixed 4096-sample blocks and merged in index order, so the estimate is
// bit-identical for any worker count.
EnsembleSummary mc_mean(Observable obs, int modes, std::uint64_t count,
                        std::uint64_t seed = kDefaultSeed, int workers = 1);

// Mean under the spectral density by nested adaptive quadrature,
//   E[f] = int f * shape_N / int shape_N  over [1, inf)^N.
EnsembleSummary quad_mean(Observable obs, int modes,
                          const QuadratureConfig& cfg = QuadratureConfig{});

struct HistogramSeries {
    std::vector<double> edges;           // bins + 1 uniform edges
    std::vector<std::uint64_t> counts;
    std::vector<double> heights;         // counts / (total * width)
    std::uint64_t total = 0;
};

// Normalized histogram of the purity over Monte Carlo spectra, bins uniform
// on (0, 1].
HistogramSeries purity_histogram(int modes, std::uint64_t count, int bins,
                                 std::uint64_t seed = kDefaultSeed,
                                 int workers = 1);

// int_1^numax of the one-mode Bures spectral density (cosh substitution
// removes the endpoint singularity). Grows like ln(numax); no finite limit.
double bures_truncated_integral(double nu_max,
                                const QuadratureConfig& cfg = QuadratureConfig{});

// <f>_B(numax) = int_1^numax f * P_B / int_1^numax P_B. The unit observable
// gives exactly 1; purity decays like c / ln(numax); entropy diverges.
double bures_truncated_mean(Observable obs, double nu_max,
                            const QuadratureConfig& cfg = QuadratureConfig{});

enum class Figure { means, purity_dist, spectral_density };

struct FigureParams {
    int modes = 1;        // purity_dist / spectral_density selector
    int grid = 100;       // points per axis
    double range_max = 4.0;  // spectral_density nu range [1, range_max]
    int quad_modes_max = 4;  // means: quadrature rows N = 1..quad_modes_max
    std::vector<int> mc_modes;  // means: extra Monte Carlo rows (slow, opt-in)
    std::uint64_t mc_count = 10000;
    std::uint64_t seed = kDefaultSeed;
    QuadratureConfig quadrature{1e-7};  // plot-scale default, overridable
};

struct FigureTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// CSV-ready series:
//   means            -> modes, mean_purity, purity_se, mean_entropy, entropy_se, samples
//   purity_dist      -> mu, density
//   spectral_density -> nu, density (N=1) or nu1, nu2, density (N=2)
FigureTable figure_data(Figure figure, const FigureParams& params = FigureParams{});

}  // namespace gaussgeo
