#include "gaussgeo/measures.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace gaussgeo {

namespace {

// Exact rationals for the simplest cases; quadrature floors keep the nested
// integrals affordable as the dimension grows.
constexpr double kExactC1 = 1.5;
constexpr double kExactC2 = 525.0 / 8.0;

std::mutex g_norm_mutex;
std::map<int, double> g_norm_cache;  // write-once per key; racers agree

}  // namespace

double spectral_exponent(int modes) {
    return modes * (modes + 2.5) - 1.0;
}

double spectral_tolerance_floor(int modes) {
    switch (modes) {
        case 4: return 1e-5;
        case 5: return 1e-3;
        case 6: return 3e-3;
        default: return 0.0;
    }
}

double spectral_shape(const std::vector<double>& nu) {
    const int n = static_cast<int>(nu.size());
    const double p = spectral_exponent(n);
    double value = 1.0;
    for (int i = 0; i < n; ++i) {
        value *= std::pow(nu[i], -p);
        for (int j = 0; j < i; ++j) {
            const double d = nu[i] * nu[i] - nu[j] * nu[j];
            value *= d * d;
        }
    }
    return value;
}

double hs_sqrt_det_g(const SymplecticSpectrum& spectrum) {
    const int n = spectrum.modes();
    const double prefactor =
        std::sqrt(n + 1.0) / std::pow(4.0, static_cast<double>(n) * n);
    return prefactor * spectral_shape(spectrum.values());
}

double hs_normalization_constant_quadrature(int modes,
                                            const QuadratureConfig& cfg) {
    if (modes < 1 || modes > 6)
        throw std::invalid_argument(
            "normalization: quadrature practical for 1 <= modes <= 6");
    QuadratureConfig eff = cfg;
    eff.rel_tol = std::max(cfg.rel_tol, spectral_tolerance_floor(modes));
    const double z = spectral_integral(
        modes, [](const std::vector<double>&) { return 1.0; }, eff);
    if (!(z > 0.0))
        throw NumericalError("normalization: integral not positive");
    return 1.0 / z;
}

double hs_normalization_constant(int modes, const QuadratureConfig& cfg) {
    if (modes == 1) return kExactC1;
    if (modes == 2) return kExactC2;
    {
        std::lock_guard<std::mutex> lock(g_norm_mutex);
        auto it = g_norm_cache.find(modes);
        if (it != g_norm_cache.end()) return it->second;
    }
    const double c = hs_normalization_constant_quadrature(modes, cfg);
    std::lock_guard<std::mutex> lock(g_norm_mutex);
    g_norm_cache.emplace(modes, c);
    return g_norm_cache[modes];
}

DensityEvaluation hs_spectral_density(const SymplecticSpectrum& spectrum,
                                      bool normalized,
                                      const QuadratureConfig& cfg) {
    DensityEvaluation eval;
    eval.normalized = normalized;
    if (!normalized) {
        eval.value = hs_sqrt_det_g(spectrum);
        return eval;
    }
    const double c = hs_normalization_constant(spectrum.modes(), cfg);
    eval.value = c * spectral_shape(spectrum.values());
    eval.normalization_constant = c;
    return eval;
}

double bures_spectral_density_one_mode(double nu) {
    if (!(nu > 1.0))
        throw std::domain_error(
            "bures density: defined on the open interval nu > 1");
    return nu * nu / ((nu * nu + 1.0) * std::sqrt(nu * nu - 1.0));
}

double purity_density(int modes, double mu, const QuadratureConfig& cfg) {
    if (!(mu > 0.0) || mu > 1.0)
        throw std::invalid_argument("purity density: mu must lie in (0, 1]");
    if (modes < 1 || modes > 4)
        throw std::invalid_argument(
            "purity density: quadrature practical for 1 <= modes <= 4");
    const double p = spectral_exponent(modes);
    const double c = hs_normalization_constant(modes, cfg);
    if (modes == 1) return c * std::pow(mu, p - 2.0);  // (3/2) sqrt(mu)

    QuadratureConfig level_cfg = cfg;
    level_cfg.rel_tol = std::max(cfg.rel_tol, 1e-12) / modes;
    level_cfg.abs_tol = 0.0;

    // integrate nu_2..nu_N over the simplex nu_k in [1, 1/(mu prod_prev)];
    // the delta constraint fixes nu_1 = 1/(mu prod) at the leaf
    std::vector<double> nu(modes);  // nu[1..modes-1] are integration variables
    std::function<double(int, double)> level = [&](int k, double prod) -> double {
        const double upper = 1.0 / (mu * prod);
        if (upper <= 1.0) return 0.0;
        auto integrand = [&, k, prod](double v) -> double {
            nu[k] = v;
            const double running = prod * v;
            if (k + 1 < modes) return level(k + 1, running);
            nu[0] = 1.0 / (mu * running);
            return spectral_shape(nu) / (mu * mu * running);
        };
        QuadratureResult r = integrate(integrand, 1.0, upper, level_cfg);
        if (!r.converged)
            throw NumericalError("purity density: level quadrature failed");
        return r.value;
    };
    return c * level(1, 1.0);
}

}  // namespace gaussgeo
