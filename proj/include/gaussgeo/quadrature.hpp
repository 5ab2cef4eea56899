// quadrature.hpp — globally adaptive Gauss–Kronrod (G7,K15) integration
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "gaussgeo/errors.hpp"

namespace gaussgeo {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    // Upper cutoff for improper integrals; infinity selects the exact
    // variable transform nu = a/t instead of truncation.
    double nu_max = std::numeric_limits<double>::infinity();
    // With a finite nu_max, append a power-law estimate of the dropped tail.
    bool tail_extrapolation = false;
    int max_subdivisions = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod nodes on [-1,1] (nonnegative half) and weights; the
// embedded 7-point Gauss rule uses the even-index nodes.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <typename F>
inline void gauss_kronrod_15(F&& f, double a, double b, double& value,
                             double& error) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double f_mid = f(mid);
    double kronrod = kKronrodWeights[7] * f_mid;
    double gauss = kGaussWeights[3] * f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double sum = f(mid - dx) + f(mid + dx);
        kronrod += kKronrodWeights[i] * sum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
    }
    value = kronrod * half;
    // standard QUADPACK-style inflation of the raw difference
    const double diff = std::abs((kronrod - gauss) * half);
    error = diff;
    if (diff > 0.0 && value != 0.0) {
        const double scaled = std::pow(200.0 * diff / std::abs(value), 1.5);
        error = (scaled < 1.0) ? std::abs(value) * scaled : diff;
    }
}

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

}  // namespace detail

// Adaptive integration of f over the finite interval [a, b]. Worst segment
// first until the summed error estimate meets max(abs_tol, rel_tol*|value|)
// or the subdivision budget runs out.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b,
                           const QuadratureConfig& cfg = QuadratureConfig{}) {
    QuadratureResult result;
    if (a == b) {
        result.converged = true;
        return result;
    }
    std::priority_queue<detail::Segment> queue;
    detail::Segment seg{a, b, 0.0, 0.0};
    detail::gauss_kronrod_15(f, a, b, seg.value, seg.error);
    result.evaluations = 15;
    double total = seg.value;
    double total_err = seg.error;
    queue.push(seg);
    int splits = 0;
    while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)) &&
           splits < cfg.max_subdivisions) {
        detail::Segment worst = queue.top();
        queue.pop();
        total -= worst.value;
        total_err -= worst.error;
        const double m = 0.5 * (worst.a + worst.b);
        for (const auto& [lo, hi] :
             {std::pair{worst.a, m}, std::pair{m, worst.b}}) {
            detail::Segment part{lo, hi, 0.0, 0.0};
            detail::gauss_kronrod_15(f, lo, hi, part.value, part.error);
            result.evaluations += 15;
            total += part.value;
            total_err += part.error;
            queue.push(part);
        }
        ++splits;
        if (m <= worst.a || m >= worst.b) break;  // interval exhausted
    }
    result.value = total;
    result.error = total_err;
    result.converged =
        total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)) * 10.0;
    return result;
}

// Integration of f over [a, inf), a > 0. Default route substitutes
// nu = a/t so the domain becomes (0, 1]; with a finite cfg.nu_max the
// integral is truncated there, optionally plus a power-law tail estimate
// fitted at the cutoff.
template <typename F>
QuadratureResult integrate_upper_infinite(
    F&& f, double a, const QuadratureConfig& cfg = QuadratureConfig{}) {
    if (std::isfinite(cfg.nu_max)) {
        QuadratureResult result = integrate(f, a, cfg.nu_max, cfg);
        if (cfg.tail_extrapolation) {
            const double x1 = 0.5 * cfg.nu_max;
            const double x2 = cfg.nu_max;
            const double f1 = f(x1);
            const double f2 = f(x2);
            result.evaluations += 2;
            if (f1 > 0.0 && f2 > 0.0) {
                const double s = std::log(f1 / f2) / std::log(x2 / x1);
                if (s <= 1.0)
                    throw NumericalError(
                        "tail extrapolation: fitted exponent not integrable");
                result.value += f2 * x2 / (s - 1.0);
            }
        }
        return result;
    }
    auto transformed = [&f, a](double t) {
        const double nu = a / t;
        return f(nu) * a / (t * t);
    };
    return integrate(transformed, 0.0, 1.0, cfg);
}

// Throwing wrapper for callers that treat non-convergence as failure.
template <typename F>
double integrate_or_throw(F&& f, double a, double b,
                          const QuadratureConfig& cfg = QuadratureConfig{}) {
    QuadratureResult r = integrate(std::forward<F>(f), a, b, cfg);
    if (!r.converged)
        throw NumericalError("quadrature failed to converge on finite interval");
    return r.value;
}

}  // namespace gaussgeo
