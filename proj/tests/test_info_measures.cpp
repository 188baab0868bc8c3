#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qranging/info_measures.hpp"
#include "qranging/photon_stats.hpp"

using namespace qranging;

namespace {

// Joint pmf whose rows are p and columns are q: the 2-slot product law.
JointCountPmf product_joint(const CountPmf& row, const CountPmf& col) {
    JointCountPmf j;
    j.n_s_max = row.n_max();
    j.n_i_max = col.n_max();
    j.probs.resize(static_cast<size_t>(j.n_s_max + 1) * (j.n_i_max + 1));
    for (int a = 0; a <= j.n_s_max; ++a)
        for (int b = 0; b <= j.n_i_max; ++b)
            j.probs[static_cast<size_t>(a) * (j.n_i_max + 1) + b] = row.probs[a] * col.probs[b];
    j.tail_mass = 1.0 - j.total();
    return j;
}

}  // namespace

TEST_CASE("alpha_information basics") {
    const CountPmf p = poisson_pmf(1.3);
    for (double a : {0.0, 0.2, 0.5, 1.0}) CHECK(alpha_information(p, p, a) == doctest::Approx(0.0));

    const CountPmf q = poisson_pmf(0.4);
    for (double a : {0.1, 0.35, 0.8})
        CHECK(alpha_information(p, q, a) ==
              doctest::Approx(alpha_information(q, p, 1.0 - a)).epsilon(1e-12));

    CHECK_THROWS_AS(alpha_information(p, q, -0.1), std::domain_error);
    CHECK_THROWS_AS(alpha_information(p, q, 1.1), std::domain_error);
}

TEST_CASE("Bhattacharyya information of the slot pair") {
    const double got = alpha_information(poisson_pmf(1.1), poisson_pmf(1.0), 0.5);
    CHECK(got == doctest::Approx(0.001191151829848453).epsilon(1e-10));
}

TEST_CASE("disjoint supports give infinity") {
    CountPmf a, b;
    a.probs = {1.0, 0.0};
    b.probs = {0.0, 1.0};
    CHECK(std::isinf(alpha_information(a, b, 0.5)));
}

TEST_CASE("poisson_alpha_closed") {
    for (double a : {0.0, 0.3, 1.0}) CHECK(poisson_alpha_closed(2.0, 2.0, a) == 0.0);
    CHECK(poisson_alpha_closed(1.1, 1.0, 0.5) ==
          doctest::Approx(0.001191151829848453).epsilon(1e-12));
    CHECK_THROWS_AS(poisson_alpha_closed(-1.0, 1.0, 0.5), std::domain_error);
}

TEST_CASE("series matches the Poisson closed form") {
    // The overlap weights small-probability terms by p^alpha, so the inputs
    // must be truncated far below the default tolerance for 1e-10 agreement.
    const double eps = 1e-300;
    const std::vector<double> mus = {0.1, 0.5, 1.0, 2.0, 5.0};
    const std::vector<double> alphas = {0.1, 0.25, 0.5, 0.75, 0.9};
    for (double m1 : mus)
        for (double m2 : mus)
            for (double a : alphas) {
                const double series =
                    alpha_information(poisson_pmf(m1, eps), poisson_pmf(m2, eps), a);
                CHECK(series == doctest::Approx(poisson_alpha_closed(m1, m2, a)).epsilon(1e-10));
            }
}

TEST_CASE("chernoff_information") {
    const CountPmf p = poisson_pmf(1.4);
    const CountPmf q = poisson_pmf(0.6);
    const ChernoffResult fwd = chernoff_information(p, q);
    const ChernoffResult bwd = chernoff_information(q, p);
    CHECK(fwd.xi == doctest::Approx(bwd.xi).epsilon(1e-9));
    CHECK(fwd.alpha_star == doctest::Approx(1.0 - bwd.alpha_star).epsilon(2e-6));
    CHECK(fwd.xi >= alpha_information(p, q, 0.5) - 1e-12);

    // Dense-grid maximization of the closed form as the oracle.
    const double mu1 = 0.1 * 1.0 + 0.2, mu2 = 0.2;  // (kappa mu + mu_B, mu_B)
    double best = 0.0;
    for (int i = 0; i <= 10000; ++i)
        best = std::max(best, poisson_alpha_closed(mu1, mu2, i * 1e-4));
    const ChernoffResult got = chernoff_information(poisson_pmf(mu1), poisson_pmf(mu2));
    CHECK(got.xi == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("xi_ranging") {
    const CountPmf bg = poisson_pmf(1.0);
    CHECK(xi_ranging(bg, bg) <= 3e-12);  // bounded by twice the tail mass
    CHECK(xi_ranging(poisson_pmf(1.1), bg) ==
          doctest::Approx(0.002382303659696906).epsilon(1e-10));

    // Equals the Chernoff information of the swapped 2-slot product laws.
    const CountPmf tgt = poisson_pmf(1.1);
    const ChernoffResult prod = chernoff_information(product_joint(tgt, bg), product_joint(bg, tgt));
    CHECK(xi_ranging(tgt, bg) == doctest::Approx(prod.xi).epsilon(1e-6));
}

TEST_CASE("product identity and concavity consequence") {
    const CountPmf p = poisson_pmf(1.7);
    const CountPmf q = neg_binomial_pmf(2, 0.5);
    const JointCountPmf pq = product_joint(p, q);
    const JointCountPmf qp = product_joint(q, p);
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double lhs = alpha_information(pq, qp, a);
        const double rhs = alpha_information(p, q, a) + alpha_information(p, q, 1.0 - a);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        CHECK(2.0 * alpha_information(p, q, 0.5) >= rhs - 1e-12);
    }
}

TEST_CASE("alpha_information is concave in alpha") {
    const CountPmf p = poisson_pmf(2.2);
    const CountPmf q = poisson_pmf(0.9);
    const double h = 0.02;
    for (int i = 1; i < 50; ++i) {
        const double a = i * h;
        const double second = alpha_information(p, q, a - h) +
                              alpha_information(p, q, std::min(a + h, 1.0)) -
                              2.0 * alpha_information(p, q, a);
        CHECK(second <= 1e-8);
    }
}

TEST_CASE("ranging beats detection") {
    for (double kappa : {0.05, 0.3, 0.9})
        for (double mu : {0.2, 1.0, 4.0})
            for (double mu_b : {0.1, 1.0, 3.0}) {
                const CountPmf tgt = poisson_pmf(kappa * mu + mu_b);
                const CountPmf bg = poisson_pmf(mu_b);
                CHECK(xi_ranging(tgt, bg) >= chernoff_information(tgt, bg).xi - 1e-9);
            }
}

TEST_CASE("xi_coherent_closed") {
    CHECK(xi_coherent_closed(ChannelParams(0.1, 1.0), 1.0) ==
          doctest::Approx(0.002382303659696906).epsilon(1e-12));
    CHECK(xi_coherent_closed(ChannelParams(0.7, 2.0), 0.0) == 0.0);
    CHECK(xi_coherent_closed(ChannelParams(0.5, 0.0), 2.0) == doctest::Approx(1.0));
    CHECK(xi_coherent_closed(ChannelParams(0.1, 2.0), 0.1) ==
          doctest::Approx(1.24688473157e-5).epsilon(1e-9));
}

TEST_CASE("xi_ranging on slot laws equals the closed form") {
    for (double kappa : {0.05, 0.1, 0.5})
        for (double mu : {0.1, 1.0, 10.0})
            for (double mu_b : {0.02, 0.2, 2.0}) {
                const ChannelParams ch(kappa, mu_b);
                const double series = xi_ranging(coherent_slot_pmf(mu, ch, true, 1e-300),
                                                 coherent_slot_pmf(mu, ch, false, 1e-300));
                CHECK(series == doctest::Approx(xi_coherent_closed(ch, mu)).epsilon(1e-8));
            }
}

TEST_CASE("xi_quantum fixed R against independent oracles") {
    // Frozen joint-pmf series oracle.
    CHECK(xi_quantum_fixed_r(TmsvProbe(0.1, 1), ChannelParams(0.1, 2.0)) ==
          doctest::Approx(1.45751231551e-4).epsilon(1e-8));
    // Lossless, noiseless analytic value 2 R ln(1 + mu0).
    CHECK(xi_quantum_fixed_r(TmsvProbe(0.5, 7), ChannelParams(1.0, 0.0)) ==
          doctest::Approx(2.0 * 7 * std::log(1.0 + 0.5 / 7)).epsilon(1e-12));
}

TEST_CASE("xi_quantum convergence") {
    const QuantumExponent zero = xi_quantum(0.5, ChannelParams(0.0, 1.0));
    CHECK(zero.xi == doctest::Approx(0.0));

    const QuantumExponent got = xi_quantum(0.1, ChannelParams(0.1, 2.0));
    CHECK(got.xi == doctest::Approx(1.34179e-4).epsilon(1e-4));
    CHECK(got.r_used >= 10);
}

TEST_CASE("quantum_advantage") {
    const ExponentReport rep = quantum_advantage(ChannelParams(0.1, 2.0), 0.1);
    CHECK(rep.q_emp == doctest::Approx(11.0));
    CHECK(rep.advantage_q == doctest::Approx(rep.xi_q / rep.xi_coh));
    CHECK(rep.xi_coh >= 0.0);
    CHECK(rep.xi_q >= 0.0);
    CHECK(rep.advantage_q >= 1.0 - 1e-9);

    CHECK_THROWS_AS(quantum_advantage(ChannelParams(0.0, 1.0), 0.5), std::domain_error);
}
