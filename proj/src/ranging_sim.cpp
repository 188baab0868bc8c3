#include "qranging/ranging_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <thread>

#include "qranging/coherent_exact.hpp"
#include "qranging/info_measures.hpp"

namespace qranging {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    if (const char* env = std::getenv("QRANGING_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

int pick_uniform(SplitMix64& rng, const std::vector<int>& candidates) {
    if (candidates.size() == 1) return candidates[0];
    const size_t i = static_cast<size_t>(rng.uniform() * static_cast<double>(candidates.size()));
    return candidates[std::min(i, candidates.size() - 1)];
}

template <typename Stat>
int argmax_with_ties(const std::vector<Stat>& stats, SplitMix64& rng) {
    Stat best = stats[0];
    for (size_t j = 1; j < stats.size(); ++j) best = std::max(best, stats[j]);
    std::vector<int> ties;
    for (size_t j = 0; j < stats.size(); ++j)
        if (stats[j] == best) ties.push_back(static_cast<int>(j));
    return pick_uniform(rng, ties);
}

// Per-trial sampling state shared (read-only) by all workers.
struct TrialKernel {
    const Scenario& s;
    DecisionRule rule;
    // coherent fast path: totals over L copies are Poisson with L-scaled means
    double total_mean_target = 0.0;
    double total_mean_bg = 0.0;
    std::unique_ptr<CdfSampler> coh_target;
    std::unique_ptr<CdfSampler> coh_bg;
    // tmsv path
    std::unique_ptr<CdfSampler> idler;
    std::unique_ptr<CdfSampler> background;

    TrialKernel(const Scenario& sc, DecisionRule r) : s(sc), rule(r) {
        constexpr double table_eps = 1e-15;
        constexpr double table_mean_cap = 64.0;
        if (s.probe.kind == ProbeKind::Coherent) {
            if (rule == DecisionRule::IdlerCorrelation)
                throw std::invalid_argument("IdlerCorrelation rule requires a TMSV probe");
            total_mean_target = s.copies * (s.channel.kappa * s.probe.mu + s.channel.mu_b);
            total_mean_bg = s.copies * s.channel.mu_b;
            if (total_mean_target > 0.0 && total_mean_target <= table_mean_cap)
                coh_target = std::make_unique<CdfSampler>(poisson_pmf(total_mean_target, table_eps).probs);
            if (total_mean_bg > 0.0 && total_mean_bg <= table_mean_cap)
                coh_bg = std::make_unique<CdfSampler>(poisson_pmf(total_mean_bg, table_eps).probs);
        } else {
            if (s.probe.mu0() > 0.0)
                idler = std::make_unique<CdfSampler>(
                    neg_binomial_pmf(s.probe.r, s.probe.mu0(), table_eps).probs);
            if (s.channel.mu_b > 0.0)
                background = std::make_unique<CdfSampler>(poisson_pmf(s.channel.mu_b, table_eps).probs);
        }
    }

    int draw_poisson_total(SplitMix64& rng, double mean, const CdfSampler* table) const {
        if (mean <= 0.0) return 0;
        return table ? table->sample(rng) : sample_poisson(rng, mean);
    }

    bool trial_errs(SplitMix64& rng) const {
        if (s.probe.kind == ProbeKind::Coherent) {
            std::vector<int> totals(s.m);
            for (int j = 0; j < s.m; ++j) {
                const bool hit = (j == s.target_slot);
                totals[j] = draw_poisson_total(rng, hit ? total_mean_target : total_mean_bg,
                                               hit ? coh_target.get() : coh_bg.get());
            }
            return argmax_with_ties(totals, rng) != s.target_slot;
        }
        const double kappa = s.channel.kappa;
        if (rule == DecisionRule::IdlerCorrelation) {
            std::vector<long long> c(s.m, 0);
            for (int l = 0; l < s.copies; ++l) {
                const int n_i = idler ? idler->sample(rng) : 0;
                if (n_i == 0) continue;  // zero idler weight: slot counts cannot matter
                const int hits = sample_binomial(rng, n_i, kappa);
                for (int j = 0; j < s.m; ++j) {
                    int count = background ? background->sample(rng) : 0;
                    if (j == s.target_slot) count += hits;
                    c[j] += static_cast<long long>(count) * n_i;
                }
            }
            return argmax_with_ties(c, rng) != s.target_slot;
        }
        std::vector<int> totals(s.m, 0);
        for (int l = 0; l < s.copies; ++l) {
            const int n_i = idler ? idler->sample(rng) : 0;
            const int hits = sample_binomial(rng, n_i, kappa);
            for (int j = 0; j < s.m; ++j) {
                int count = background ? background->sample(rng) : 0;
                if (j == s.target_slot) count += hits;
                totals[j] += count;
            }
        }
        return argmax_with_ties(totals, rng) != s.target_slot;
    }
};

// ---- exact enumeration ------------------------------------------------

struct Enumerator {
    const Scenario& s;
    DecisionRule rule;
    CountPmf idler_pmf;
    CountPmf bg_pmf;
    std::vector<CountPmf> cond_target;  // tmsv: target law given idler count
    CountPmf coh_target_pmf;            // coherent totals path
    double p_success = 0.0;

    double credit(const std::vector<long long>& stats) const {
        long long best = stats[0];
        for (int j = 1; j < s.m; ++j) best = std::max(best, stats[j]);
        if (stats[s.target_slot] != best) return 0.0;
        int ties = 0;
        for (int j = 0; j < s.m; ++j)
            if (stats[j] == best) ++ties;
        return 1.0 / ties;
    }
};

double enumerate_coherent(const Scenario& s, double eps, double budget) {
    // Under the max-total-count rule only per-slot totals matter, and totals
    // of independent Poisson copies are Poisson with the summed mean.
    const double mean_t = s.copies * (s.channel.kappa * s.probe.mu + s.channel.mu_b);
    const double mean_b = s.copies * s.channel.mu_b;
    const CountPmf pt = poisson_pmf(mean_t, eps);
    const CountPmf pb = poisson_pmf(mean_b, eps);
    double terms = static_cast<double>(pt.probs.size());
    for (int j = 1; j < s.m; ++j) terms *= static_cast<double>(pb.probs.size());
    if (terms > budget)
        throw std::runtime_error("enumerate_error_probability: " + std::to_string(terms) +
                                 " terms exceed the budget");

    Enumerator e{s, DecisionRule::MaxTotalCount};
    std::vector<long long> counts(s.m, 0);
    std::function<void(int, double)> rec = [&](int slot, double w) {
        if (slot == s.m) {
            e.p_success += w * e.credit(counts);
            return;
        }
        const CountPmf& pmf = (slot == s.target_slot) ? pt : pb;
        for (int n = 0; n <= pmf.n_max(); ++n) {
            counts[slot] = n;
            rec(slot + 1, w * pmf.probs[n]);
        }
    };
    rec(0, 1.0);
    return 1.0 - e.p_success;
}

double enumerate_tmsv(const Scenario& s, DecisionRule rule, double eps, double budget) {
    Enumerator e{s, rule};
    e.idler_pmf = neg_binomial_pmf(s.probe.r, s.probe.mu0(), eps);
    e.bg_pmf = poisson_pmf(s.channel.mu_b, eps);
    for (int n_i = 0; n_i <= e.idler_pmf.n_max(); ++n_i) {
        // survivors of the n_i correlated photons: Binomial(n_i, kappa)
        CountPmf point;
        point.probs.assign(n_i + 1, 0.0);
        point.probs[n_i] = 1.0;
        e.cond_target.push_back(convolve(binomial_thin(point, s.channel.kappa), e.bg_pmf));
    }

    double per_copy = 0.0;
    for (int n_i = 0; n_i <= e.idler_pmf.n_max(); ++n_i)
        per_copy += static_cast<double>(e.cond_target[n_i].probs.size());
    per_copy *= std::pow(static_cast<double>(e.bg_pmf.probs.size()), s.m - 1);
    if (std::pow(per_copy, s.copies) > budget)
        throw std::runtime_error("enumerate_error_probability: ~" +
                                 std::to_string(std::pow(per_copy, s.copies)) +
                                 " terms exceed the budget");

    std::vector<long long> stats(s.m, 0);
    std::function<void(int, double)> copy_rec;
    // within one copy: idler value, then every slot count
    std::function<void(int, int, int, double)> slot_rec = [&](int copy, int n_i, int slot, double w) {
        if (slot == s.m) {
            copy_rec(copy + 1, w);
            return;
        }
        const CountPmf& pmf = (slot == s.target_slot) ? e.cond_target[n_i] : e.bg_pmf;
        const long long scale = (rule == DecisionRule::IdlerCorrelation) ? n_i : 1;
        for (int n = 0; n <= pmf.n_max(); ++n) {
            if (pmf.probs[n] == 0.0) continue;
            stats[slot] += scale * n;
            slot_rec(copy, n_i, slot + 1, w * pmf.probs[n]);
            stats[slot] -= scale * n;
        }
    };
    copy_rec = [&](int copy, double w) {
        if (copy == s.copies) {
            e.p_success += w * e.credit(stats);
            return;
        }
        for (int n_i = 0; n_i <= e.idler_pmf.n_max(); ++n_i)
            slot_rec(copy, n_i, 0, w * e.idler_pmf.probs[n_i]);
    };
    copy_rec(0, 1.0);
    return 1.0 - e.p_success;
}

}  // namespace

Probe Probe::coherent(double mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::domain_error("coherent probe mean must be finite and >= 0");
    return Probe{ProbeKind::Coherent, mu, 1};
}

Probe Probe::tmsv(double mu, int r) {
    TmsvProbe check(mu, r);  // range validation
    (void)check;
    return Probe{ProbeKind::Tmsv, mu, r};
}

Scenario::Scenario(int m_, int copies_, Probe probe_, ChannelParams channel_, int target_slot_)
    : m(m_), copies(copies_), probe(probe_), channel(channel_), target_slot(target_slot_) {
    if (m < 2) throw std::domain_error("scenario needs m >= 2 time slots");
    if (copies < 1) throw std::domain_error("scenario needs L >= 1 copies");
    if (target_slot < 0 || target_slot >= m) throw std::domain_error("target_slot out of range");
}

ShotOutcome sample_shot(const Scenario& s, SplitMix64& rng) {
    ShotOutcome o;
    o.m = s.m;
    o.copies = s.copies;
    o.signal_counts.assign(static_cast<size_t>(s.m) * s.copies, 0);
    o.idler_counts.assign(s.copies, 0);
    if (s.probe.kind == ProbeKind::Coherent) {
        const double mean_t = s.channel.kappa * s.probe.mu + s.channel.mu_b;
        for (int j = 0; j < s.m; ++j) {
            const double mean = (j == s.target_slot) ? mean_t : s.channel.mu_b;
            for (int l = 0; l < s.copies; ++l)
                o.signal_counts[static_cast<size_t>(j) * s.copies + l] = sample_poisson(rng, mean);
        }
        return o;
    }
    o.idler_valid = true;
    const double mu0 = s.probe.mu / s.probe.r;
    for (int l = 0; l < s.copies; ++l) {
        const int n_i = sample_neg_binomial(rng, s.probe.r, mu0);
        o.idler_counts[l] = n_i;
        const int hits = sample_binomial(rng, n_i, s.channel.kappa);
        for (int j = 0; j < s.m; ++j) {
            int count = sample_poisson(rng, s.channel.mu_b);
            if (j == s.target_slot) count += hits;
            o.signal_counts[static_cast<size_t>(j) * s.copies + l] = count;
        }
    }
    return o;
}

int decide(const ShotOutcome& o, DecisionRule rule, SplitMix64& rng) {
    if (rule == DecisionRule::IdlerCorrelation && !o.idler_valid)
        throw std::invalid_argument("IdlerCorrelation rule requires a TMSV outcome");
    std::vector<long long> stats(o.m, 0);
    for (int j = 0; j < o.m; ++j)
        for (int l = 0; l < o.copies; ++l) {
            const long long n = o.signal(j, l);
            stats[j] += (rule == DecisionRule::IdlerCorrelation) ? n * o.idler_counts[l] : n;
        }
    return argmax_with_ties(stats, rng);
}

McEstimate mc_error_probability(const Scenario& s, DecisionRule rule, std::uint64_t trials,
                                std::uint64_t seed, int workers) {
    if (trials < 1) throw std::domain_error("mc_error_probability: trials must be >= 1");
    const TrialKernel kernel(s, rule);
    const int n_workers = std::min<std::uint64_t>(resolve_workers(workers), trials);

    std::vector<std::uint64_t> errors(n_workers, 0);
    auto run_range = [&](int w, std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t e = 0;
        for (std::uint64_t t = lo; t < hi; ++t) {
            SplitMix64 rng = SplitMix64::for_trial(seed, t);
            if (kernel.trial_errs(rng)) ++e;
        }
        errors[w] = e;
    };
    if (n_workers == 1) {
        run_range(0, 0, trials);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (trials + n_workers - 1) / n_workers;
        for (int w = 0; w < n_workers; ++w) {
            const std::uint64_t lo = w * chunk;
            const std::uint64_t hi = std::min<std::uint64_t>(trials, lo + chunk);
            pool.emplace_back(run_range, w, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    std::uint64_t total_errors = 0;
    for (auto e : errors) total_errors += e;  // integer sum: order independent

    const double p = static_cast<double>(total_errors) / static_cast<double>(trials);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return McEstimate{p, trials, se, std::max(0.0, p - 1.96 * se), std::min(1.0, p + 1.96 * se), seed};
}

double enumerate_error_probability(const Scenario& s, DecisionRule rule, double eps, double budget) {
    if (s.probe.kind == ProbeKind::Coherent) {
        if (rule == DecisionRule::IdlerCorrelation)
            throw std::invalid_argument("IdlerCorrelation rule requires a TMSV probe");
        return enumerate_coherent(s, eps, budget);
    }
    return enumerate_tmsv(s, rule, eps, budget);
}

SlopeReport slope_report(const Scenario& base, DecisionRule rule, const std::vector<int>& l_list,
                         std::uint64_t trials, std::uint64_t seed, int workers) {
    SlopeReport report;
    if (base.probe.kind == ProbeKind::Coherent) {
        report.xi_ref = xi_coherent_closed(base.channel, base.probe.mu);
    } else {
        report.xi_ref = xi_quantum(base.probe.mu, base.channel).xi;
    }
    for (int L : l_list) {
        if (L < 1) throw std::domain_error("slope_report: copy counts must be >= 1");
        Scenario s(base.m, L, base.probe, base.channel, base.target_slot);
        const McEstimate est = mc_error_probability(s, rule, trials, seed, workers);
        SlopeRow row{L, est.p_hat, est.std_err, kInf, false};
        if (est.p_hat > 0.0) {
            row.norm_log_err = -std::log(est.p_hat) / L;
        } else {
            row.needs_more_trials = true;
        }
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace qranging
