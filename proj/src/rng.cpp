#include "qranging/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace qranging {

namespace {

int poisson_inversion(SplitMix64& rng, double mu) {
    const double u = rng.uniform();
    double p = std::exp(-mu);
    double c = p;
    int k = 0;
    while (u > c) {
        ++k;
        p *= mu / k;
        c += p;
        if (k > 10000) break;  // u in the far tail beyond double resolution
    }
    return k;
}

// Hormann's PTRS transformed-rejection Poisson sampler, exact for mu >= 10.
int poisson_ptrs(SplitMix64& rng, double mu) {
    const double log_mu = std::log(mu);
    const double b = 0.931 + 2.53 * std::sqrt(mu);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mu + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<int>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mu - mu - std::lgamma(k + 1.0)) {
            return static_cast<int>(k);
        }
    }
}

}  // namespace

int sample_poisson(SplitMix64& rng, double mu) {
    if (mu <= 0.0) return 0;
    return (mu < 10.0) ? poisson_inversion(rng, mu) : poisson_ptrs(rng, mu);
}

int sample_binomial(SplitMix64& rng, int n, double p) {
    if (p <= 0.0 || n <= 0) return 0;
    if (p >= 1.0) return n;
    int k = 0;
    for (int i = 0; i < n; ++i)
        if (rng.uniform() < p) ++k;
    return k;
}

int sample_neg_binomial(SplitMix64& rng, int r, double mu0) {
    if (mu0 <= 0.0) return 0;
    const double q = mu0 / (1.0 + mu0);
    if (r <= 64) {
        const double inv_log_q = 1.0 / std::log(q);
        int total = 0;
        for (int i = 0; i < r; ++i) {
            const double u = rng.uniform();
            if (u < q)  // geometric failure count >= 1
                total += static_cast<int>(std::log(u) * inv_log_q);
        }
        return total;
    }
    // Gamma-Poisson mixture: N ~ Poisson(G) with G ~ Gamma(shape R, scale
    // q/(1-q) = mu0).
    const double g = sample_gamma(rng, static_cast<double>(r), q / (1.0 - q));
    return sample_poisson(rng, g);
}

double sample_gamma(SplitMix64& rng, double shape, double scale) {
    if (shape < 1.0) {
        // boost: Gamma(a) = Gamma(a+1) * U^{1/a}
        const double u = rng.uniform();
        return sample_gamma(rng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        // polar normal draw
        double x, w;
        do {
            const double u1 = 2.0 * rng.uniform() - 1.0;
            const double u2 = 2.0 * rng.uniform() - 1.0;
            w = u1 * u1 + u2 * u2;
            x = u1;
        } while (w >= 1.0 || w == 0.0);
        x *= std::sqrt(-2.0 * std::log(w) / w);

        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

CdfSampler::CdfSampler(const std::vector<double>& pmf) {
    if (pmf.empty()) throw std::invalid_argument("CdfSampler: empty pmf");
    cdf_.resize(pmf.size());
    double c = 0.0;
    for (size_t i = 0; i < pmf.size(); ++i) {
        c += pmf[i];
        cdf_[i] = c;
    }
    cdf_.back() = 1.0;  // absorb truncation tail into the last bin
}

}  // namespace qranging
