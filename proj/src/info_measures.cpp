#include "qranging/info_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

namespace qranging {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Overlap sum_n p_n^alpha q_n^{1-alpha} with compensated summation.  Index
// sets are aligned by zero padding; terms with a vanished factor drop out.
double skewed_overlap(std::span<const double> p, std::span<const double> q, double alpha) {
    const size_t n = std::min(p.size(), q.size());
    double sum = 0.0, comp = 0.0;
    auto add = [&](double term) {
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    for (size_t i = 0; i < n; ++i) {
        double pi = p[i], qi = q[i];
        double term;
        if (pi == 0.0) {
            term = (alpha == 0.0) ? qi : 0.0;
        } else if (qi == 0.0) {
            term = (alpha == 1.0) ? pi : 0.0;
        } else {
            term = std::exp(alpha * std::log(pi) + (1.0 - alpha) * std::log(qi));
        }
        add(term);
    }
    if (alpha == 0.0)
        for (size_t i = n; i < q.size(); ++i) add(q[i]);
    if (alpha == 1.0)
        for (size_t i = n; i < p.size(); ++i) add(p[i]);
    return sum;
}

double alpha_info_flat(std::span<const double> p, std::span<const double> q, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in [0, 1]");
    const double overlap = skewed_overlap(p, q, alpha);
    if (overlap <= 0.0) return kInf;
    return std::max(0.0, -std::log(overlap));
}

// Flatten a joint pmf onto a common (n_s, n_i) grid.
std::vector<double> pad_joint(const JointCountPmf& p, int n_s_max, int n_i_max) {
    std::vector<double> out(static_cast<size_t>(n_s_max + 1) * (n_i_max + 1), 0.0);
    for (int ns = 0; ns <= p.n_s_max; ++ns)
        for (int ni = 0; ni <= p.n_i_max; ++ni)
            out[static_cast<size_t>(ns) * (n_i_max + 1) + ni] = p.at(ns, ni);
    return out;
}

template <typename F>
ChernoffResult golden_max(F&& value) {
    // Golden-section maximization on [0, 1]; unimodality follows from
    // concavity of alpha -> C_alpha.
    constexpr double kInvPhi = 0.6180339887498949;
    constexpr double kTol = 1e-6;
    double a = 0.0, b = 1.0;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = value(x1), f2 = value(x2);
    if (std::isinf(f1) || std::isinf(f2)) return {kInf, 0.5};
    while (b - a > kTol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = value(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = value(x1);
        }
    }
    const double alpha_star = 0.5 * (a + b);
    return {value(alpha_star), alpha_star};
}

}  // namespace

double alpha_information(const CountPmf& p, const CountPmf& q, double alpha) {
    return alpha_info_flat(p.probs, q.probs, alpha);
}

double alpha_information(const JointCountPmf& p, const JointCountPmf& q, double alpha) {
    if (p.n_s_max == q.n_s_max && p.n_i_max == q.n_i_max)
        return alpha_info_flat(p.probs, q.probs, alpha);
    const int n_s = std::max(p.n_s_max, q.n_s_max);
    const int n_i = std::max(p.n_i_max, q.n_i_max);
    return alpha_info_flat(pad_joint(p, n_s, n_i), pad_joint(q, n_s, n_i), alpha);
}

double poisson_alpha_closed(double mu1, double mu2, double alpha) {
    if (!(mu1 >= 0.0) || !(mu2 >= 0.0)) throw std::domain_error("Poisson means must be >= 0");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in [0, 1]");
    return mu2 + alpha * (mu1 - mu2) - std::pow(mu1, alpha) * std::pow(mu2, 1.0 - alpha);
}

ChernoffResult chernoff_information(const CountPmf& p, const CountPmf& q) {
    return golden_max([&](double a) { return alpha_information(p, q, a); });
}

ChernoffResult chernoff_information(const JointCountPmf& p, const JointCountPmf& q) {
    return golden_max([&](double a) { return alpha_information(p, q, a); });
}

double xi_ranging(const CountPmf& p_target, const CountPmf& p_background) {
    return 2.0 * alpha_information(p_target, p_background, 0.5);
}

double xi_ranging(const JointCountPmf& p_target, const JointCountPmf& p_background) {
    return 2.0 * alpha_information(p_target, p_background, 0.5);
}

double xi_coherent_closed(const ChannelParams& ch, double mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::domain_error("mu must be finite and >= 0");
    const double s = ch.kappa * mu;
    if (ch.mu_b == 0.0 || s == 0.0) return s;
    return 2.0 * ch.mu_b + s - 2.0 * std::sqrt(ch.mu_b * (ch.mu_b + s));
}

double xi_quantum_fixed_r(const TmsvProbe& probe, const ChannelParams& ch, double eps) {
    const JointCountPmf present = quantum_slot_joint_pmf(probe, ch, true, eps);
    const JointCountPmf absent = quantum_slot_joint_pmf(probe, ch, false, eps);
    return xi_ranging(present, absent);
}

QuantumExponent xi_quantum(double mu, const ChannelParams& ch, double eps, int r0) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::domain_error("mu must be finite and > 0");
    int r = (r0 > 0) ? r0 : std::max(1, static_cast<int>(std::ceil(100.0 * mu)));
    double prev = xi_quantum_fixed_r(TmsvProbe(mu, r), ch, eps);
    for (int i = 0; i < 20; ++i) {
        const int r_next = 2 * r;
        const double xi = xi_quantum_fixed_r(TmsvProbe(mu, r_next), ch, eps);
        if (std::abs(xi - prev) < std::max(1e-6 * std::abs(xi), 1e-14)) return {xi, r_next};
        prev = xi;
        r = r_next;
    }
    throw std::runtime_error(
        "xi_quantum: no R convergence after 20 doublings (last iterates " +
        std::to_string(prev) + ", R = " + std::to_string(r) + ")");
}

ExponentReport quantum_advantage(const ChannelParams& ch, double mu, double eps) {
    const double xi_coh = xi_coherent_closed(ch, mu);
    if (xi_coh <= 0.0)
        throw std::domain_error("quantum advantage undefined: coherent exponent is zero");
    const QuantumExponent q = xi_quantum(mu, ch, eps);
    return ExponentReport{
        .xi_coh = xi_coh,
        .xi_q = q.xi,
        .alpha_star = 0.5,
        .advantage_q = q.xi / xi_coh,
        .q_emp = 1.0 + 1.0 / mu,
        .r_used = q.r_used,
    };
}

}  // namespace qranging
