#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qranging/coherent_exact.hpp"
#include "qranging/info_measures.hpp"
#include "qranging/ranging_sim.hpp"

using namespace qranging;

TEST_CASE("sample_shot shapes and degenerate channels") {
    SplitMix64 rng(1);

    const Scenario dark(3, 2, Probe::coherent(1.0), ChannelParams(0.0, 0.0));
    for (int t = 0; t < 100; ++t) {
        const ShotOutcome o = sample_shot(dark, rng);
        REQUIRE(o.signal_counts.size() == 6);
        for (int c : o.signal_counts) CHECK(c == 0);
        CHECK_FALSE(o.idler_valid);
    }

    const Scenario lossless(2, 3, Probe::tmsv(0.8, 4), ChannelParams(1.0, 0.0), 1);
    for (int t = 0; t < 200; ++t) {
        const ShotOutcome o = sample_shot(lossless, rng);
        REQUIRE(o.idler_valid);
        for (int l = 0; l < 3; ++l) {
            CHECK(o.signal(1, l) == o.idler_counts[l]);
            CHECK(o.signal(0, l) == 0);
        }
    }
}

TEST_CASE("sample_shot empirical slot means match the model") {
    const double kappa = 0.3, mu = 2.0, mu_b = 0.7;
    const Scenario s(3, 1, Probe::coherent(mu), ChannelParams(kappa, mu_b));
    SplitMix64 rng(2024);
    const int n = 1000000;
    std::vector<double> sums(3, 0.0);
    for (int t = 0; t < n; ++t) {
        const ShotOutcome o = sample_shot(s, rng);
        for (int j = 0; j < 3; ++j) sums[j] += o.signal(j, 0);
    }
    for (int j = 0; j < 3; ++j) {
        const double want = mu_b + (j == s.target_slot ? kappa * mu : 0.0);
        const double sigma = std::sqrt(want / n);  // Poisson variance = mean
        CHECK(std::abs(sums[j] / n - want) <= 4.0 * sigma);
    }
}

TEST_CASE("decide picks the argmax and breaks ties fairly") {
    SplitMix64 rng(3);

    ShotOutcome o;
    o.m = 3;
    o.copies = 1;
    o.signal_counts = {3, 1, 0};
    CHECK(decide(o, DecisionRule::MaxTotalCount, rng) == 0);

    // Idler-correlation arithmetic: c = (6, 2).
    ShotOutcome q;
    q.m = 2;
    q.copies = 2;
    q.signal_counts = {0, 3, 2, 0};  // slot-major: slot0 = (0,3), slot1 = (2,0)
    q.idler_counts = {1, 2};
    q.idler_valid = true;
    CHECK(decide(q, DecisionRule::IdlerCorrelation, rng) == 0);

    CHECK_THROWS_AS(decide(o, DecisionRule::IdlerCorrelation, rng), std::invalid_argument);

    ShotOutcome tie;
    tie.m = 4;
    tie.copies = 1;
    tie.signal_counts = {2, 2, 2, 2};
    std::vector<int> hits(4, 0);
    const int n = 100000;
    for (int t = 0; t < n; ++t) ++hits[decide(tie, DecisionRule::MaxTotalCount, rng)];
    const double sigma = std::sqrt(0.25 * 0.75 * n);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(hits[j] - n / 4.0) <= 4.0 * sigma);
}

TEST_CASE("mc_error_probability sanity and exact oracle") {
    // mu = 0: pure guessing.
    const Scenario blind(4, 1, Probe::coherent(0.0), ChannelParams(0.5, 1.0));
    const McEstimate g = mc_error_probability(blind, DecisionRule::MaxTotalCount, 200000, 5);
    CHECK(std::abs(g.p_hat - 0.75) <= 3.0 * g.std_err);

    const Scenario s(2, 1, Probe::coherent(5.0), ChannelParams(0.1, 1.0));
    const McEstimate est = mc_error_probability(s, DecisionRule::MaxTotalCount, 1000000, 6);
    const double exact = p_err_single_shot(ExactErrorQuery(2, 0.1, 5.0, 1.0));
    CHECK(std::abs(est.p_hat - exact) <= 3.0 * est.std_err);
    CHECK(est.std_err == doctest::Approx(std::sqrt(est.p_hat * (1.0 - est.p_hat) / 1e6)));
    CHECK(est.ci95_low <= est.p_hat);
    CHECK(est.ci95_high >= est.p_hat);
}

TEST_CASE("mc_error_probability is bit-identical across worker counts") {
    const Scenario s(3, 2, Probe::tmsv(0.5, 5), ChannelParams(0.4, 0.8));
    const McEstimate w1 = mc_error_probability(s, DecisionRule::IdlerCorrelation, 100000, 77, 1);
    const McEstimate w2 = mc_error_probability(s, DecisionRule::IdlerCorrelation, 100000, 77, 2);
    const McEstimate w8 = mc_error_probability(s, DecisionRule::IdlerCorrelation, 100000, 77, 8);
    CHECK(w1.p_hat == w2.p_hat);
    CHECK(w1.p_hat == w8.p_hat);
}

TEST_CASE("doubling trials halves the standard error") {
    const Scenario s(2, 1, Probe::coherent(1.0), ChannelParams(0.1, 1.0));
    const McEstimate a = mc_error_probability(s, DecisionRule::MaxTotalCount, 100000, 9);
    const McEstimate b = mc_error_probability(s, DecisionRule::MaxTotalCount, 400000, 9);
    CHECK(b.std_err == doctest::Approx(a.std_err / 2.0).epsilon(0.05));
}

TEST_CASE("enumeration oracle") {
    SUBCASE("matches the closed-form single-shot error") {
        const Scenario s(2, 1, Probe::coherent(1.0), ChannelParams(0.1, 1.0));
        const double e = enumerate_error_probability(s, DecisionRule::MaxTotalCount);
        CHECK(e == doctest::Approx(p_err_single_shot(ExactErrorQuery(2, 0.1, 1.0, 1.0)))
                       .epsilon(1e-9));
    }
    SUBCASE("matches the noiseless analytic branch") {
        const Scenario s(2, 1, Probe::coherent(std::log(2.0)), ChannelParams(1.0, 0.0));
        CHECK(enumerate_error_probability(s, DecisionRule::MaxTotalCount) ==
              doctest::Approx(0.25).epsilon(1e-9));
    }
    SUBCASE("agrees with Monte Carlo for the TMSV probe, both rules") {
        const Scenario s(2, 1, Probe::tmsv(0.4, 2), ChannelParams(0.5, 0.5));
        for (DecisionRule rule : {DecisionRule::MaxTotalCount, DecisionRule::IdlerCorrelation}) {
            const double exact = enumerate_error_probability(s, rule);
            const McEstimate mc = mc_error_probability(s, rule, 400000, 21);
            CHECK(std::abs(mc.p_hat - exact) <= 3.0 * mc.std_err);
        }
    }
    SUBCASE("rejects infeasible state spaces") {
        const Scenario s(3, 2, Probe::tmsv(5.0, 30), ChannelParams(0.5, 5.0));
        CHECK_THROWS_AS(
            enumerate_error_probability(s, DecisionRule::IdlerCorrelation, 1e-12, 1e4),
            std::runtime_error);
    }
}

TEST_CASE("multi-copy coherent equals one copy at scaled mu and mu_B") {
    // Per-slot totals over L copies are Poisson with both the signal and the
    // background scaled by L, so these two scenarios are the same experiment.
    const int l = 6;
    const Scenario many(2, l, Probe::coherent(0.5), ChannelParams(0.3, 0.4));
    const Scenario one(2, 1, Probe::coherent(0.5 * l), ChannelParams(0.3, 0.4 * l));
    const McEstimate a = mc_error_probability(many, DecisionRule::MaxTotalCount, 400000, 31);
    const McEstimate b = mc_error_probability(one, DecisionRule::MaxTotalCount, 400000, 32);
    CHECK(std::abs(a.p_hat - b.p_hat) <= 3.0 * std::hypot(a.std_err, b.std_err));
}

TEST_CASE("slope_report") {
    const Scenario base(2, 1, Probe::coherent(0.5), ChannelParams(0.5, 0.5));
    const SlopeReport rep =
        slope_report(base, DecisionRule::MaxTotalCount, {1, 2, 4}, 200000, 41);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.xi_ref == doctest::Approx(xi_coherent_closed(ChannelParams(0.5, 0.5), 0.5)));
    for (const SlopeRow& row : rep.rows) {
        CHECK(row.p_hat > 0.0);
        CHECK_FALSE(row.needs_more_trials);
        CHECK(row.norm_log_err == doctest::Approx(-std::log(row.p_hat) / row.copies));
    }
    CHECK(rep.rows[0].copies == 1);
    CHECK(rep.rows[2].copies == 4);
}

TEST_CASE("scenario validation") {
    CHECK_THROWS_AS(Scenario(1, 1, Probe::coherent(1.0), ChannelParams(0.1, 1.0)),
                    std::domain_error);
    CHECK_THROWS_AS(Scenario(2, 0, Probe::coherent(1.0), ChannelParams(0.1, 1.0)),
                    std::domain_error);
    CHECK_THROWS_AS(Scenario(2, 1, Probe::coherent(1.0), ChannelParams(0.1, 1.0), 5),
                    std::domain_error);
    CHECK_THROWS_AS(
        mc_error_probability(Scenario(2, 1, Probe::coherent(1.0), ChannelParams(0.1, 1.0)),
                             DecisionRule::IdlerCorrelation, 10, 1),
        std::invalid_argument);
}
