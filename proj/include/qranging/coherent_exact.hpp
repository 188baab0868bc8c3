#pragma once

#include "qranging/photon_stats.hpp"

namespace qranging {

/// Parameters of an exact coherent-transmitter error query: m time slots,
/// L probe copies, channel (kappa, mu_B) and probe mean mu.
struct ExactErrorQuery {
    int m;
    double kappa;
    double mu;
    double mu_b;
    int copies = 1;

    ExactErrorQuery(int m, double kappa, double mu, double mu_b, int copies = 1);
    ChannelParams channel() const { return ChannelParams(kappa, mu_b); }
};

/// Q_mu(n) = Gamma(n, mu) / Gamma(n) = P(Poisson(mu) <= n - 1), with
/// Q(0, mu) = 0.
double regularized_gamma_q(int n, double mu);

/// G_m(x) = sum_n x^n (Q_{mu_B}(n+1)^m - Q_{mu_B}(n)^m), summed until ten
/// consecutive terms fall below tol times the running sum.
double generating_g(int m, double x, double mu_b, double tol = 1e-14);

/// Exact single-shot (L = 1) error probability of the max-count rule:
/// 1 - m^{-1} e^{-kappa mu} G_m(1 + kappa mu / mu_B), with analytic branches
/// at kappa mu = 0 and mu_B = 0.
double p_err_single_shot(const ExactErrorQuery& q);

/// Multi-copy error: the single-shot value at mean L mu.
double p_err_multicopy_coherent(const ExactErrorQuery& q);

}  // namespace qranging
