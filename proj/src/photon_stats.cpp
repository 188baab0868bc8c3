#include "qranging/photon_stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qranging {

namespace {

void check_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::domain_error("truncation tolerance must lie in (0, 1)");
    }
}

constexpr int kMaxSupport = 20'000'000;

}  // namespace

double CountPmf::mean() const {
    double m = 0.0;
    for (size_t n = 0; n < probs.size(); ++n) m += static_cast<double>(n) * probs[n];
    return m;
}

double CountPmf::total() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

double JointCountPmf::total() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

CountPmf JointCountPmf::signal_marginal() const {
    CountPmf out;
    out.probs.assign(n_s_max + 1, 0.0);
    for (int ns = 0; ns <= n_s_max; ++ns)
        for (int ni = 0; ni <= n_i_max; ++ni) out.probs[ns] += at(ns, ni);
    out.tail_mass = tail_mass;
    return out;
}

CountPmf JointCountPmf::idler_marginal() const {
    CountPmf out;
    out.probs.assign(n_i_max + 1, 0.0);
    for (int ns = 0; ns <= n_s_max; ++ns)
        for (int ni = 0; ni <= n_i_max; ++ni) out.probs[ni] += at(ns, ni);
    out.tail_mass = tail_mass;
    return out;
}

ChannelParams::ChannelParams(double kappa_, double mu_b_) : kappa(kappa_), mu_b(mu_b_) {
    if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::domain_error("kappa must lie in [0, 1]");
    if (!(mu_b >= 0.0) || !std::isfinite(mu_b)) throw std::domain_error("mu_B must be finite and >= 0");
}

TmsvProbe::TmsvProbe(double mu_, int copies_) : mu(mu_), copies(copies_) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::domain_error("TMSV mean mu must be finite and > 0");
    if (copies < 1) throw std::domain_error("TMSV copy count R must be >= 1");
}

CountPmf poisson_pmf(double mu, double eps) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::domain_error("Poisson mean must be finite and >= 0");
    check_eps(eps);
    CountPmf out;
    if (mu == 0.0) {
        out.probs = {1.0};
        out.tail_mass = 0.0;
        return out;
    }
    // Forward recurrence.  When e^{-mu} underflows, run the recurrence in
    // log space until terms become representable.
    double log_p = -mu;
    out.probs.reserve(static_cast<size_t>(mu + 10.0 * std::sqrt(mu) + 16.0));
    double cdf = 0.0;
    int n = 0;
    const double log_tiny = std::log(std::numeric_limits<double>::min()) + 8.0;
    while (true) {
        double p = (log_p > log_tiny) ? std::exp(log_p) : 0.0;
        out.probs.push_back(p);
        cdf += p;
        // Past the mode the term ratio r = mu/(n+1) < 1 bounds the tail by a
        // geometric series; the accumulated cdf saturates at 1.0 long before
        // a deep tolerance is met, so it cannot serve as the stop test alone.
        if (n > mu) {
            const double r = mu / (n + 1.0);
            if (p * r / (1.0 - r) <= eps) break;
            // Tail below what double precision can represent.
            if (p == 0.0) break;
        }
        if (++n > kMaxSupport) throw std::runtime_error("poisson_pmf: support bound exceeded");
        log_p += std::log(mu) - std::log(static_cast<double>(n));
    }
    // The log-space recurrence drifts by O(n) ulp at large mean; renormalize
    // against the geometric tail estimate so probs + tail_mass sum to 1.
    const double p_last = out.probs.back();
    const double ratio = mu / static_cast<double>(out.probs.size());
    const double tail = ratio < 1.0 ? p_last * ratio / (1.0 - ratio) : 0.0;
    const double scale = 1.0 / (cdf + tail);
    for (double& v : out.probs) v *= scale;
    out.tail_mass = tail * scale;
    return out;
}

CountPmf neg_binomial_pmf(int r, double mu0, double eps) {
    if (r < 1) throw std::domain_error("negative binomial: R must be >= 1");
    if (!(mu0 >= 0.0) || !std::isfinite(mu0)) throw std::domain_error("negative binomial: mu0 must be finite and >= 0");
    check_eps(eps);
    CountPmf out;
    if (mu0 == 0.0) {
        out.probs = {1.0};
        out.tail_mass = 0.0;
        return out;
    }
    const double q = mu0 / (1.0 + mu0);
    // p[n] = C(n+R-1, n) (1-q)^R q^n, recurrence p[n+1] = p[n] q (n+R)/(n+1)
    double log_p = static_cast<double>(r) * std::log1p(-q);
    double cdf = 0.0;
    int n = 0;
    const double log_tiny = std::log(std::numeric_limits<double>::min()) + 8.0;
    while (true) {
        double p = (log_p > log_tiny) ? std::exp(log_p) : 0.0;
        out.probs.push_back(p);
        cdf += p;
        // Term ratio rho = q (n+R)/(n+1) decreases toward q < 1, so once it
        // drops below 1 the tail is geometrically bounded (see poisson_pmf
        // for why the cdf cannot serve as the stop test).
        const double rho = q * (static_cast<double>(n) + r) / (n + 1.0);
        if (rho < 1.0) {
            if (p * rho / (1.0 - rho) <= eps) break;
            if (p == 0.0) break;  // tail below double resolution
        }
        if (++n > kMaxSupport) throw std::runtime_error("neg_binomial_pmf: support bound exceeded");
        log_p += std::log(q) + std::log(static_cast<double>(n - 1) + r) - std::log(static_cast<double>(n));
    }
    // Renormalize against the geometric tail estimate (see poisson_pmf).
    const double p_last = out.probs.back();
    const double n_last = static_cast<double>(out.probs.size()) - 1.0;
    const double rho_next = q * (n_last + r) / (n_last + 1.0);
    const double tail = rho_next < 1.0 ? p_last * rho_next / (1.0 - rho_next) : 0.0;
    const double scale = 1.0 / (cdf + tail);
    for (double& v : out.probs) v *= scale;
    out.tail_mass = tail * scale;
    return out;
}

CountPmf binomial_thin(const CountPmf& p, double kappa) {
    if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::domain_error("binomial_thin: kappa must lie in [0, 1]");
    CountPmf out;
    if (kappa == 1.0) return p;
    if (kappa == 0.0) {
        out.probs = {1.0 - p.tail_mass};
        out.tail_mass = p.tail_mass;
        return out;
    }
    const int n_max = p.n_max();
    out.probs.assign(n_max + 1, 0.0);
    // Column-wise: weight of k survivors out of n is C(n,k) kappa^k (1-kappa)^{n-k}.
    for (int n = 0; n <= n_max; ++n) {
        if (p.probs[n] == 0.0) continue;
        double w = std::pow(1.0 - kappa, n);  // k = 0 term
        for (int k = 0; k <= n; ++k) {
            out.probs[k] += p.probs[n] * w;
            if (k < n) w *= kappa / (1.0 - kappa) * static_cast<double>(n - k) / static_cast<double>(k + 1);
        }
    }
    out.tail_mass = p.tail_mass;
    return out;
}

CountPmf convolve(const CountPmf& a, const CountPmf& b) {
    CountPmf out;
    out.probs.assign(a.probs.size() + b.probs.size() - 1, 0.0);
    for (size_t i = 0; i < a.probs.size(); ++i) {
        if (a.probs[i] == 0.0) continue;
        for (size_t j = 0; j < b.probs.size(); ++j) out.probs[i + j] += a.probs[i] * b.probs[j];
    }
    out.tail_mass = std::max(0.0, 1.0 - out.total());
    return out;
}

CountPmf coherent_slot_pmf(double mu, const ChannelParams& ch, bool target_present, double eps) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::domain_error("coherent probe mean must be finite and >= 0");
    return poisson_pmf(target_present ? ch.kappa * mu + ch.mu_b : ch.mu_b, eps);
}

JointCountPmf quantum_slot_joint_pmf(const TmsvProbe& probe, const ChannelParams& ch,
                                     bool target_present, double eps) {
    check_eps(eps);
    // Truncate each axis at eps/2 so the joint tail stays below eps.
    const CountPmf idler = neg_binomial_pmf(probe.copies, probe.mu0(), eps * 0.5);
    const CountPmf background = poisson_pmf(ch.mu_b, eps * 0.5);
    const int n_i_max = idler.n_max();
    const int n_s_max = target_present ? n_i_max + background.n_max() : background.n_max();

    JointCountPmf out;
    out.n_i_max = n_i_max;
    out.n_s_max = n_s_max;
    out.probs.assign(static_cast<size_t>(n_s_max + 1) * (n_i_max + 1), 0.0);

    for (int ni = 0; ni <= n_i_max; ++ni) {
        const double w = idler.probs[ni];
        if (!target_present || ch.kappa == 0.0 || ni == 0) {
            for (int ns = 0; ns <= background.n_max(); ++ns)
                out.probs[static_cast<size_t>(ns) * (n_i_max + 1) + ni] = w * background.probs[ns];
            continue;
        }
        if (ch.kappa == 1.0) {
            for (int nb = 0; nb <= background.n_max(); ++nb)
                out.probs[static_cast<size_t>(ni + nb) * (n_i_max + 1) + ni] += w * background.probs[nb];
            continue;
        }
        // Survivors of the ni idler-correlated photons, plus background.
        double bw = std::pow(1.0 - ch.kappa, ni);
        for (int k = 0; k <= ni; ++k) {
            if (bw > 0.0) {
                const double wk = w * bw;
                for (int nb = 0; nb <= background.n_max(); ++nb)
                    out.probs[static_cast<size_t>(k + nb) * (n_i_max + 1) + ni] += wk * background.probs[nb];
            }
            if (k < ni)
                bw *= ch.kappa / (1.0 - ch.kappa) * static_cast<double>(ni - k) / static_cast<double>(k + 1);
        }
    }
    out.tail_mass = std::max(0.0, 1.0 - out.total());
    return out;
}

}  // namespace qranging
