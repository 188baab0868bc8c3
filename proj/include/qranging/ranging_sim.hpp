#pragma once

#include <cstdint>
#include <vector>

#include "qranging/photon_stats.hpp"
#include "qranging/rng.hpp"

namespace qranging {

enum class ProbeKind { Coherent, Tmsv };

struct Probe {
    ProbeKind kind;
    double mu;
    int r = 1;  // TMSV copies per probe shot

    static Probe coherent(double mu);
    static Probe tmsv(double mu, int r);
    double mu0() const { return mu / r; }
};

/// One full ranging experiment: m time slots, L probe copies, the channel,
/// and the slot actually holding the target.
struct Scenario {
    int m;
    int copies;
    Probe probe;
    ChannelParams channel;
    int target_slot;

    Scenario(int m, int copies, Probe probe, ChannelParams channel, int target_slot = 0);
};

/// Raw counts of one shot: signal_counts is m x L (slot-major), idler_counts
/// has length L (all zeros, and flagged invalid, for a coherent probe).
struct ShotOutcome {
    std::vector<int> signal_counts;
    std::vector<int> idler_counts;
    int m = 0;
    int copies = 0;
    bool idler_valid = false;

    int signal(int slot, int copy) const { return signal_counts[static_cast<size_t>(slot) * copies + copy]; }
};

enum class DecisionRule { MaxTotalCount, IdlerCorrelation };

struct McEstimate {
    double p_hat;
    std::uint64_t trials;
    double std_err;
    double ci95_low;
    double ci95_high;
    std::uint64_t seed;
};

struct SlopeRow {
    int copies;
    double p_hat;
    double std_err;
    double norm_log_err;  // -ln(p_hat) / L; +inf (flagged) when p_hat == 0
    bool needs_more_trials;
};

struct SlopeReport {
    double xi_ref;  // per-copy Chernoff exponent of the scenario's probe
    std::vector<SlopeRow> rows;
};

ShotOutcome sample_shot(const Scenario& s, SplitMix64& rng);

/// Slot chosen by the rule's statistic; ties are broken uniformly at random.
int decide(const ShotOutcome& o, DecisionRule rule, SplitMix64& rng);

/// Monte Carlo error probability.  Trial t draws from a stream derived from
/// (seed, t), so the estimate is bit-identical for any worker count.
/// workers == 0 reads QRANGING_WORKERS, falling back to the hardware count.
McEstimate mc_error_probability(const Scenario& s, DecisionRule rule, std::uint64_t trials,
                                std::uint64_t seed, int workers = 0);

/// Exact error probability by summing the truncated product pmf over all
/// count configurations (fractional credit for ties).  Practical for small
/// m and L only; throws if the term count exceeds the budget.
double enumerate_error_probability(const Scenario& s, DecisionRule rule,
                                   double eps = kDefaultTruncationEps,
                                   double budget = 1e8);

/// Monte Carlo error per copy count in l_list, with the normalized log
/// error and the asymptotic exponent it should approach.
SlopeReport slope_report(const Scenario& base, DecisionRule rule, const std::vector<int>& l_list,
                         std::uint64_t trials, std::uint64_t seed, int workers = 0);

}  // namespace qranging
