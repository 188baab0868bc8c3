#include "qranging/coherent_exact.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qranging {

namespace {

// Q(n+1)^m - Q(n)^m = pmf(n) * sum_{j<m} Q(n+1)^j Q(n)^{m-1-j}, which avoids
// the cancellation of differencing two powers close to 1.
double power_bracket_factor(double q_lo, double q_hi, int m) {
    double s = 0.0, term = 1.0;
    for (int j = 0; j < m; ++j) {
        s += term * std::pow(q_lo, m - 1 - j);
        term *= q_hi;
    }
    return s;
}

}  // namespace

ExactErrorQuery::ExactErrorQuery(int m_, double kappa_, double mu_, double mu_b_, int copies_)
    : m(m_), kappa(kappa_), mu(mu_), mu_b(mu_b_), copies(copies_) {
    if (m < 1) throw std::domain_error("slot count m must be >= 1");
    if (copies < 1) throw std::domain_error("copy count L must be >= 1");
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::domain_error("mu must be finite and >= 0");
    ChannelParams check(kappa_, mu_b_);  // range validation
    (void)check;
}

double regularized_gamma_q(int n, double mu) {
    if (n < 0) throw std::domain_error("regularized_gamma_q: n must be >= 0");
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::domain_error("regularized_gamma_q: mu must be finite and >= 0");
    if (n == 0) return 0.0;  // P(count < 0)
    double p = std::exp(-mu);
    double c = p;
    for (int k = 1; k <= n - 1; ++k) {
        p *= mu / k;
        c += p;
    }
    return std::min(c, 1.0);
}

double generating_g(int m, double x, double mu_b, double tol) {
    if (m < 1) throw std::domain_error("generating_g: m must be >= 1");
    if (!(x >= 1.0)) throw std::domain_error("generating_g: x must be >= 1");
    if (!(mu_b > 0.0)) throw std::domain_error("generating_g: mu_B must be > 0 (use the analytic branch)");
    const double log_x = std::log(x);
    const double log_mu_b = std::log(mu_b);

    double log_pmf = -mu_b;          // ln Poisson_{mu_B}(n)
    double q_lo = 0.0;               // Q(n, mu_B)
    double q_hi = std::exp(-mu_b);   // Q(n+1, mu_B) = CDF at n
    double cdf = q_hi;

    double sum = 0.0, comp = 0.0;
    int negligible = 0;
    for (long n = 0; n < 10'000'000; ++n) {
        const double term = std::exp(n * log_x + log_pmf) * power_bracket_factor(q_lo, q_hi, m);
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (sum > 0.0 && term < tol * sum) {
            if (++negligible >= 10) return sum;
        } else {
            negligible = 0;
        }
        log_pmf += log_mu_b - std::log(static_cast<double>(n + 1));
        q_lo = q_hi;
        cdf += std::exp(log_pmf);
        q_hi = std::min(cdf, 1.0);
    }
    throw std::runtime_error("generating_g: series did not settle within term budget");
}

double p_err_single_shot(const ExactErrorQuery& q) {
    if (q.m == 1) return 0.0;
    const double s = q.kappa * q.mu;
    const double guess = 1.0 - 1.0 / q.m;
    if (s == 0.0) return guess;
    if (q.mu_b == 0.0) return guess * std::exp(-s);  // error only when the target count is 0

    // Algebraically p = 1 - m^{-1} e^{-s} G_m(1 + s/mu_B), but the error is
    // summed directly so that values near the double-precision floor keep
    // full relative accuracy: with F(n) = P(bg <= n) and Q(n) = P(bg < n),
    //   p = E_{n ~ Poisson(s + mu_B)} m^{-1} sum_{j<m} (1 - F(n)^j Q(n)^{m-1-j})
    // and each parenthesis is -expm1 of a sum of accurate log-CDFs.
    const double deep = 1e-300;
    const CountPmf bg = poisson_pmf(q.mu_b, deep);
    const int nb = bg.n_max();
    std::vector<double> upper(nb + 2, 0.0);  // upper[n] = P(bg >= n)
    for (int n = nb; n >= 0; --n) upper[n] = upper[n + 1] + bg.probs[n];
    std::vector<double> log_f(nb + 1);  // log P(bg <= n)
    double prefix = 0.0;
    for (int n = 0; n <= nb; ++n) {
        prefix += bg.probs[n];
        log_f[n] = upper[n + 1] < 0.5 ? std::log1p(-upper[n + 1]) : std::log(prefix);
    }
    const double neg_inf = -std::numeric_limits<double>::infinity();
    const auto lf_at = [&](int n) { return n > nb ? 0.0 : log_f[n]; };

    const CountPmf law = poisson_pmf(s + q.mu_b, deep);
    double err = 0.0, comp = 0.0;
    for (int n = 0; n <= law.n_max(); ++n) {
        if (law.probs[n] == 0.0) continue;
        const double lf = lf_at(n);
        const double lq = n == 0 ? neg_inf : lf_at(n - 1);
        double inner = 0.0;
        for (int j = 0; j < q.m; ++j) {
            const int k = q.m - 1 - j;
            if (k > 0 && lq == neg_inf) {
                inner += 1.0;
            } else {
                inner += -std::expm1(j * lf + (k > 0 ? k * lq : 0.0));
            }
        }
        const double term = law.probs[n] * inner / q.m;
        const double y = term - comp;
        const double t = err + y;
        comp = (t - err) - y;
        err = t;
    }
    return std::min(1.0, std::max(0.0, err));
}

double p_err_multicopy_coherent(const ExactErrorQuery& q) {
    ExactErrorQuery single(q.m, q.kappa, q.mu * q.copies, q.mu_b, 1);
    return p_err_single_shot(single);
}

}  // namespace qranging
