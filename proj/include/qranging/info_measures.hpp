#pragma once

#include "qranging/photon_stats.hpp"

namespace qranging {

/// Asymptotic exponents for one channel/probe configuration.  All exponents
/// are in nats per probe copy.
struct ExponentReport {
    double xi_coh;
    double xi_q;
    double alpha_star;
    double advantage_q;  // xi_q / xi_coh
    double q_emp;        // 1 + 1/mu
    int r_used;          // TMSV copy count at which xi_q converged
};

struct ChernoffResult {
    double xi;
    double alpha_star;
};

/// alpha-information C_alpha(p, q) = -ln sum_n p_n^alpha q_n^{1-alpha}.
/// Disjoint supports yield +infinity.
double alpha_information(const CountPmf& p, const CountPmf& q, double alpha);
double alpha_information(const JointCountPmf& p, const JointCountPmf& q, double alpha);

/// Closed form of C_alpha for a pair of Poisson laws:
/// mu2 + alpha (mu1 - mu2) - mu1^alpha mu2^{1-alpha}.
double poisson_alpha_closed(double mu1, double mu2, double alpha);

/// max over alpha in [0,1] of the alpha-information, by golden-section
/// search (C_alpha is concave in alpha).
ChernoffResult chernoff_information(const CountPmf& p, const CountPmf& q);
ChernoffResult chernoff_information(const JointCountPmf& p, const JointCountPmf& q);

/// Ranging exponent: twice the Bhattacharyya information of the
/// target-present / background-only slot laws.  No alpha optimization.
double xi_ranging(const CountPmf& p_target, const CountPmf& p_background);
double xi_ranging(const JointCountPmf& p_target, const JointCountPmf& p_background);

/// Closed-form coherent ranging exponent 2 mu_B + kappa mu - 2 sqrt(mu_B (mu_B + kappa mu)).
double xi_coherent_closed(const ChannelParams& ch, double mu);

struct QuantumExponent {
    double xi;
    int r_used;
};

/// TMSV ranging exponent at a fixed copy count R.
double xi_quantum_fixed_r(const TmsvProbe& probe, const ChannelParams& ch,
                          double eps = kDefaultTruncationEps);

/// TMSV ranging exponent converged over R: starting from r0 (default
/// ceil(100 mu)), R is doubled until successive values agree to 1e-6
/// relative.  Throws after 20 doublings without convergence.
QuantumExponent xi_quantum(double mu, const ChannelParams& ch,
                           double eps = kDefaultTruncationEps, int r0 = 0);

/// Both exponents plus the advantage ratio and its empirical bound.
ExponentReport quantum_advantage(const ChannelParams& ch, double mu,
                                 double eps = kDefaultTruncationEps);

}  // namespace qranging
