#pragma once

// Nakagami-m fading, the composite co-phased surface channel (the squared
// sum of per-element cascaded amplitudes), and its two-parameter gamma
// approximation. The closed-form fit is the expression the rate series are
// built on; it is an approximation, not an exact two-moment
// match of the composite (at m=2, Omega=1, N=30 the exact match is
// k=26.57, theta=26.69 against the closed form's k=56.92, theta=13.97).
// The empirical fitter measures samples directly, which is how that gap
// is quantified.

#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "scenario.hpp"

namespace starnoma {

struct GammaFit {
    double k_raw = 0.0;  // fitted shape, real-valued
    double theta = 0.0;  // fitted scale
    int k_int = 1;       // series order used by the closed forms
};

inline GammaFit make_gamma_fit(double k_raw, double theta) {
    if (!(k_raw > 0.0)) {
        throw std::domain_error("make_gamma_fit: k must be > 0 (got " +
                                std::to_string(k_raw) + ")");
    }
    if (!(theta > 0.0)) {
        throw std::domain_error("make_gamma_fit: theta must be > 0 (got " +
                                std::to_string(theta) + ")");
    }
    GammaFit fit;
    fit.k_raw = k_raw;
    fit.theta = theta;
    fit.k_int = static_cast<int>(std::lround(k_raw));
    if (fit.k_int < 1) fit.k_int = 1;
    return fit;
}

// Closed-form gamma moment fit of the composite channel gain:
//   k     = Gamma(m+1/2)^2 / (4 (m Gamma(m)^2 - Gamma(m+1/2)^2)) * N
//   theta = 4 Omega N - (4 Omega / m) (Gamma(m+1/2)/Gamma(m))^2 * N.
// The gamma-function ratio goes through lgamma so large m stays finite.
inline GammaFit fit_gamma_eq2(const FadingParams& fading, int n_elements) {
    if (n_elements < 1) {
        throw std::domain_error("fit_gamma_eq2: n_elements must be >= 1");
    }
    if (!(fading.m >= 0.5) || !(fading.omega > 0.0)) {
        throw std::domain_error("fit_gamma_eq2: requires m >= 0.5, omega > 0");
    }
    const double m = fading.m;
    const double omega = fading.omega;
    // r = (Gamma(m+1/2)/Gamma(m))^2
    const double r = std::exp(2.0 * (std::lgamma(m + 0.5) - std::lgamma(m)));
    const double denom = m - r;  // m Gamma(m)^2 - Gamma(m+1/2)^2, scaled
    if (!(denom > 0.0)) {
        throw std::domain_error(
            "fit_gamma_eq2: degenerate denominator, m*Gamma(m)^2 <= "
            "Gamma(m+1/2)^2 at m=" + std::to_string(m));
    }
    const double n = static_cast<double>(n_elements);
    const double k_raw = r / (4.0 * denom) * n;
    const double theta = 4.0 * omega * n - (4.0 * omega / m) * r * n;
    return make_gamma_fit(k_raw, theta);
}

// Empirical gamma fit by moment matching: k = mean^2/var, theta = var/mean.
inline GammaFit fit_gamma_moments(const std::vector<double>& samples) {
    if (samples.size() < 2) {
        throw std::domain_error("fit_gamma_moments: need at least 2 samples");
    }
    double mean = 0.0;
    for (double s : samples) {
        if (!(s >= 0.0)) {
            throw std::domain_error(
                "fit_gamma_moments: samples must be nonnegative");
        }
        mean += s;
    }
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(samples.size() - 1);
    if (!(var > 0.0)) {
        throw std::domain_error(
            "fit_gamma_moments: zero-variance input, gamma fit undefined");
    }
    return make_gamma_fit(mean * mean / var, var / mean);
}

// One Nakagami-m amplitude: sqrt of a Gamma(m, Omega/m) power draw.
template <class Rng>
double sample_nakagami(const FadingParams& fading, Rng& rng) {
    std::gamma_distribution<double> power(fading.m, fading.omega / fading.m);
    return std::sqrt(power(rng));
}

// Composite surface power gain for one user: beta * (sum_n |a_n||b_n|)^2
// over N elements, each factor an independent Nakagami-m amplitude of the
// BS-to-surface / surface-to-user hop, co-phased by the surface.
template <class Rng>
double composite_gain_sample(int n_elements, double beta,
                             const FadingParams& fading, Rng& rng) {
    if (n_elements < 1) {
        throw std::domain_error("composite_gain_sample: n_elements must be >= 1");
    }
    double sum = 0.0;
    for (int i = 0; i < n_elements; ++i) {
        sum += sample_nakagami(fading, rng) * sample_nakagami(fading, rng);
    }
    return beta * sum * sum;
}

// Gamma-model surrogate of the composite gain: one Gamma(k_raw, theta) draw.
template <class Rng>
double gamma_gain_sample(const GammaFit& fit, Rng& rng) {
    std::gamma_distribution<double> gain(fit.k_raw, fit.theta);
    return gain(rng);
}

// The fit a config resolves to: the explicit override when present,
// otherwise the closed-form moment fit at the config's fading and element
// count.
inline GammaFit resolve_fit(const SystemConfig& cfg) {
    if (cfg.gamma_override) {
        return make_gamma_fit(cfg.gamma_override->k, cfg.gamma_override->theta);
    }
    return fit_gamma_eq2(cfg.fading, cfg.n_elements);
}

}  // namespace starnoma
