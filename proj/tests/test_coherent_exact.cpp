#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qranging/coherent_exact.hpp"

using namespace qranging;

TEST_CASE("regularized_gamma_q") {
    for (double mu : {0.0, 0.5, 3.0}) CHECK(regularized_gamma_q(0, mu) == 0.0);
    CHECK(regularized_gamma_q(1, 1.0) == doctest::Approx(0.36787944117144232).epsilon(1e-10));
    for (int n : {1, 2, 7}) CHECK(regularized_gamma_q(n, 0.0) == 1.0);
    // Monotone in n at fixed mu.
    double prev = 0.0;
    for (int n = 0; n <= 30; ++n) {
        const double q = regularized_gamma_q(n, 4.0);
        CHECK(q >= prev);
        prev = q;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(regularized_gamma_q(-1, 1.0), std::domain_error);
}

TEST_CASE("generating_g telescopes to 1 at x = 1") {
    for (int m : {1, 2, 5, 50})
        for (double mu_b : {0.5, 1.0, 2.0})
            CHECK(generating_g(m, 1.0, mu_b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("generating_g at m = 1 is the Poisson generating function") {
    for (double x : {1.0, 1.5, 3.0})
        for (double mu_b : {0.5, 1.0, 2.0})
            CHECK(generating_g(1, x, mu_b) ==
                  doctest::Approx(std::exp(mu_b * (x - 1.0))).epsilon(1e-10));
}

TEST_CASE("generating_g domain errors") {
    CHECK_THROWS_AS(generating_g(2, 1.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(generating_g(2, 1.5, -1.0), std::domain_error);
    CHECK_THROWS_AS(generating_g(2, 0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(generating_g(0, 1.5, 1.0), std::domain_error);
}

TEST_CASE("p_err_single_shot anchors") {
    for (int m : {2, 10, 100})
        CHECK(p_err_single_shot(ExactErrorQuery(m, 0.1, 0.0, 1.0)) == 1.0 - 1.0 / m);
    CHECK(p_err_single_shot(ExactErrorQuery(1, 0.3, 2.0, 1.0)) == 0.0);
    // mu_B = 0 branch: (1 - 1/m) e^{-kappa mu}.
    CHECK(p_err_single_shot(ExactErrorQuery(2, 1.0, std::log(2.0), 0.0)) ==
          doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("p_err_single_shot frozen values (kappa = 0.1, mu_B = 1)") {
    struct Row {
        int m;
        double mu;
        double want;
    };
    const Row rows[] = {
        {2, 1.0, 0.47434674940371}, {2, 5.0, 0.38213062955492},
        {10, 1.0, 0.88208995502163}, {10, 5.0, 0.80185725126789},
        {100, 1.0, 0.98642353994975}, {100, 5.0, 0.96440976421336},
    };
    for (const Row& r : rows)
        CHECK(p_err_single_shot(ExactErrorQuery(r.m, 0.1, r.mu, 1.0)) ==
              doctest::Approx(r.want).epsilon(1e-11));
}

TEST_CASE("p_err bounds and monotonicity") {
    for (int m : {2, 5, 20})
        for (double mu : {0.0, 0.5, 2.0, 10.0})
            for (double mu_b : {0.2, 1.0, 3.0}) {
                const double p = p_err_single_shot(ExactErrorQuery(m, 0.4, mu, mu_b));
                CHECK(p >= 0.0);
                CHECK(p <= 1.0 - 1.0 / m + 1e-15);
                if (mu == 0.0) CHECK(p == 1.0 - 1.0 / m);
            }
    // Strictly decreasing in mu and kappa.
    double prev = 1.0;
    for (double mu : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const double p = p_err_single_shot(ExactErrorQuery(3, 0.3, mu, 1.0));
        CHECK(p < prev);
        prev = p;
    }
    prev = 1.0;
    for (double kappa : {0.05, 0.2, 0.5, 0.9}) {
        const double p = p_err_single_shot(ExactErrorQuery(3, kappa, 2.0, 1.0));
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("p_err_multicopy_coherent") {
    const ExactErrorQuery single(4, 0.2, 1.5, 0.8, 1);
    CHECK(p_err_multicopy_coherent(single) == p_err_single_shot(single));

    CHECK(p_err_multicopy_coherent(ExactErrorQuery(4, 0.2, 0.1, 0.8, 10)) ==
          p_err_single_shot(ExactErrorQuery(4, 0.2, 1.0, 0.8)));

    double prev = 1.0;
    for (int l : {1, 2, 4, 8, 16}) {
        const double p = p_err_multicopy_coherent(ExactErrorQuery(2, 0.3, 0.5, 1.0, l));
        CHECK(p <= prev + 1e-15);
        prev = p;
    }
}

TEST_CASE("normalized log error approaches the closed-form exponent") {
    // Large per-copy exponent keeps the polynomial prefactor small relative to
    // xi L at the p >= 1e-12 depth this test probes.
    const double kappa = 1.0, mu = 26.0, mu_b = 0.05;
    const double xi = 2.0 * mu_b + kappa * mu - 2.0 * std::sqrt(mu_b * (mu_b + kappa * mu));
    int best_l = 0;
    double best_p = 0.0;
    for (int l = 1; l <= 64; ++l) {
        const double p = p_err_multicopy_coherent(ExactErrorQuery(2, kappa, mu, mu_b, l));
        if (p >= 1e-12) {
            best_l = l;
            best_p = p;
        }
    }
    REQUIRE(best_l > 0);
    const double slope = -std::log(best_p) / best_l;
    CHECK(std::abs(slope - xi) / xi <= 0.10);
}
