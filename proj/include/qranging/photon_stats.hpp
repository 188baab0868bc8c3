#pragma once

#include <vector>

namespace qranging {

/// Truncated photon-count distribution over n = 0..n_max.
///
/// The probabilities always satisfy sum(probs) + tail_mass == 1 (up to
/// rounding), with tail_mass bounded by the truncation tolerance requested
/// when the pmf was built.
struct CountPmf {
    std::vector<double> probs;
    double tail_mass = 0.0;

    int n_max() const { return static_cast<int>(probs.size()) - 1; }
    double mean() const;
    double total() const;
};

/// Truncated joint distribution over (signal count, idler count).
/// Stored row-major: probs[n_s * (n_i_max + 1) + n_i].
struct JointCountPmf {
    std::vector<double> probs;
    int n_s_max = 0;
    int n_i_max = 0;
    double tail_mass = 0.0;

    double at(int n_s, int n_i) const { return probs[static_cast<size_t>(n_s) * (n_i_max + 1) + n_i]; }
    double total() const;
    CountPmf signal_marginal() const;
    CountPmf idler_marginal() const;
};

/// Lossy/noisy target channel: reflectance kappa in [0,1], mean background
/// photons per time slot mu_B >= 0.
struct ChannelParams {
    double kappa;
    double mu_b;

    ChannelParams(double kappa, double mu_b);
};

/// R-copy TMSV probe with total mean signal photons mu, per-copy mean
/// mu0 = mu / R.
struct TmsvProbe {
    double mu;
    int copies;

    TmsvProbe(double mu, int copies);
    double mu0() const { return mu / copies; }
};

constexpr double kDefaultTruncationEps = 1e-12;

/// Poisson law with mean mu, truncated so that tail_mass <= eps.
CountPmf poisson_pmf(double mu, double eps = kDefaultTruncationEps);

/// Negative binomial: photon count of R independent thermal modes with
/// per-mode mean mu0.  R = 1 is the thermal (geometric) law.
CountPmf neg_binomial_pmf(int r, double mu0, double eps = kDefaultTruncationEps);

/// Per-photon Bernoulli(kappa) survival applied to an arbitrary count law.
CountPmf binomial_thin(const CountPmf& p, double kappa);

/// Distribution of the sum of two independent counts.
CountPmf convolve(const CountPmf& a, const CountPmf& b);

/// Photon counts in one time slot for a coherent probe of mean mu:
/// Poisson(kappa*mu + mu_B) when the slot holds the target, Poisson(mu_B)
/// otherwise.
CountPmf coherent_slot_pmf(double mu, const ChannelParams& ch, bool target_present,
                           double eps = kDefaultTruncationEps);

/// Joint (signal, idler) counts in one time slot for the TMSV probe.  The
/// idler is detected ideally; background enters the signal arm only.
JointCountPmf quantum_slot_joint_pmf(const TmsvProbe& probe, const ChannelParams& ch,
                                     bool target_present, double eps = kDefaultTruncationEps);

}  // namespace qranging
