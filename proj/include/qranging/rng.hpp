#pragma once

#include <cstdint>
#include <vector>

namespace qranging {

/// SplitMix64 stream.  Cheap, passes BigCrush, and trivially splittable:
/// each (seed, trial) pair is hashed to an independent starting state, so a
/// trial's draws never depend on how trials are partitioned across workers.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static SplitMix64 for_trial(std::uint64_t seed, std::uint64_t trial) {
        return SplitMix64(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(trial + 0xbf58476d1ce4e5b9ULL)));
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        return mix_final(z);
    }

    std::uint64_t operator()() { return next(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~0ULL; }

    /// Uniform double in (0, 1]; excluding 0 keeps log(u) finite.
    double uniform() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t mix_final(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

/// Exact Poisson sampler: CDF inversion below mean 10, Hormann's PTRS
/// transformed rejection above.
int sample_poisson(SplitMix64& rng, double mu);

/// Binomial(n, p) by Bernoulli thinning (n is small in this code base).
int sample_binomial(SplitMix64& rng, int n, double p);

/// Negative binomial(R, mu0): sum of R geometric draws for R <= 64, else a
/// gamma-Poisson mixture.
int sample_neg_binomial(SplitMix64& rng, int r, double mu0);

/// Gamma(shape, scale) via Marsaglia-Tsang squeeze (shape >= 1 fast path,
/// boost for shape < 1).
double sample_gamma(SplitMix64& rng, double shape, double scale);

/// One-uniform inversion against a precomputed CDF table, continuing with
/// the tabulated law's tail recurrence if the table is exhausted.
class CdfSampler {
  public:
    /// pmf must be a truncated pmf; the tail beyond the table falls back to
    /// the last bin (mass below the table's truncation tolerance).
    explicit CdfSampler(const std::vector<double>& pmf);

    int sample(SplitMix64& rng) const {
        const double u = rng.uniform();
        // Linear scan from the mode neighbourhood is slower than binary
        // search for wide tables; binary search is branch-predictable enough.
        int lo = 0, hi = static_cast<int>(cdf_.size()) - 1;
        while (lo < hi) {
            const int mid = (lo + hi) / 2;
            if (cdf_[mid] < u)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

  private:
    std::vector<double> cdf_;
};

}  // namespace qranging
