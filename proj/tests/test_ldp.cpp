#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spikedland/complexity.hpp"
#include "spikedland/ldp_rates.hpp"
#include "spikedland/spike_spectrum.hpp"

using namespace spiked;
using doctest::Approx;

namespace {
double rho(double g) { return g + 1.0 / g; }

std::vector<double> random_gamma(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 3.0);
    std::vector<double> g(1 + rng() % 3);
    for (auto& v : g) v = u(rng);
    std::sort(g.rbegin(), g.rend());
    return g;
}
}  // namespace

TEST_CASE("i_goe") {
    CHECK(i_goe(2.0).value() == 0.0);
    CHECK(i_goe(3.0).value() == Approx(0.714627).epsilon(1e-6));
    CHECK(i_goe(2.5).value() == Approx(0.244353).epsilon(1e-6));
    CHECK(i_goe(1.9).is_pos_inf());
    for (double x : {2.1, 3.3, 6.0}) CHECK(i_goe(x).value() == Approx(oracle::i_goe_quad(x)).epsilon(1e-9));
}

TEST_CASE("j_coupling branches") {
    CHECK(j_coupling(2.0, 3.0) == Approx(3.271480).epsilon(1e-6));
    CHECK(j_coupling(1.0, 2.0) == Approx(0.5).epsilon(1e-15));
    CHECK(j_coupling(0.1, 2.05) == Approx(0.005).epsilon(1e-15));
    CHECK_THROWS(j_coupling(0.0, 3.0));
    // continuity where G(x) = gamma, i.e. x = gamma + 1/gamma
    for (double g : {0.1, 0.3, 0.5, 0.8, 1.0}) {
        const double x = rho(g);
        CHECK(stieltjes_sc(x) == Approx(g).epsilon(1e-12));
        const double upper = g * x - 1.0 - std::log(g) - phi_star(x);
        CHECK(std::abs(upper - 0.5 * g * g) < 1e-10);
    }
}

TEST_CASE("i_gamma") {
    CHECK(i_gamma(1.0, 2.0) == 0.0);
    CHECK(i_gamma(1.0, 3.0) == Approx(0.482314).epsilon(1e-6));
    CHECK(i_gamma(2.0, 3.0) == Approx(0.078887).epsilon(1e-5));
    for (double g : {1.0, 1.25, 1.5, 2.0, 5.0}) {
        CHECK(i_gamma(g, rho(g)) == 0.0);
        for (int i = 0; i <= 400; ++i) {
            const double x = 2.0 + 0.02 * i;
            CHECK(i_gamma(g, x) >= 0.0);
        }
        CHECK(i_gamma(g, 4.2) == Approx(oracle::i_gamma_quad(g, 4.2)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(i_gamma(0.5, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(i_gamma(1.5, 1.0), std::domain_error);
}

TEST_CASE("i_max examples") {
    CHECK(i_max({1.5, 0.5}, 2.0).value() == Approx(0.015232).epsilon(1e-6));
    CHECK(i_max({1.5, 0.5}, 1.9).is_pos_inf());
    CHECK(i_max({0.5}, 3.0).is_pos_inf() == false);
    // top branch, term by term
    const double top = 0.25 * oracle::edge_integral(2.0, 3.0) + 9.0 / 8 -
                       0.75 + 0.25 + 0.5 * std::log(0.5) + 0.0625;
    CHECK(i_max({0.5}, 3.0).value() == Approx(top).epsilon(1e-9));
    CHECK(i_max({0.5}, 3.0).value() == Approx(0.698240).epsilon(1e-6));
    CHECK(i_max({0.0}, 3.0).value() == Approx(i_goe(3.0).value()));
    CHECK_THROWS_AS(i_max({0.5, 1.5}, 3.0), std::invalid_argument);
}

TEST_CASE("i_max shape: nonnegative, zero at its minimizer, monotone on each side") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 300; ++trial) {
        const auto g = random_gamma(rng);
        const double xmin = g[0] >= 1.0 ? rho(g[0]) : 2.0;
        CHECK(std::abs(i_max(g, xmin).value()) <= 1e-10);
        double prev = INFINITY;
        for (int i = 0; i <= 600; ++i) {
            const double x = 2.0 + 0.01 * i;
            const double v = i_max(g, x).value();
            CHECK(v >= -1e-12);
            if (x <= xmin) CHECK(v <= prev + 1e-12);
            else if (x - 0.01 >= xmin) CHECK(v >= prev - 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("big_l examples and identities") {
    CHECK(big_l({1.5, 0.5}, 2.0).value() == Approx(0.015232).epsilon(1e-6));
    CHECK(big_l({1.5, 0.5}, 3.0).value() == 0.0);
    CHECK(big_l({1.5, 0.5}, 1.0).is_pos_inf());
    CHECK(big_l({0.5}, 2.0).value() == 0.0);
    CHECK(big_l({0.5}, 1.99).is_pos_inf());
    CHECK(big_l({-0.5}, 2.5).value() == 0.0);
    CHECK(big_l_left({1.5}, 2.0).is_pos_inf());
    CHECK(big_l_left({1.5}, 2.1).value() == big_l({1.5}, 2.1).value());

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ut(2.0, 6.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto g = random_gamma(rng);
        const double t = ut(rng);
        auto f = [&](double x) { return -i_max(g, x).value(); };
        const double inf = -oracle::maximize(f, 2.0, t, 2000);
        CHECK(big_l(g, t).value() == Approx(inf).epsilon(1e-8));
    }
}

TEST_CASE("big_l monotonicity") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = random_gamma(rng);
        double prev = INFINITY;
        for (int i = 0; i <= 100; ++i) {
            const double v = big_l(g, 2.0 + 0.04 * i).value();
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
        auto bigger = g;
        bigger[0] += 0.3;
        for (int i = 0; i <= 20; ++i) {
            const double t = 2.0 + 0.2 * i;
            CHECK(big_l(bigger, t).value() >= big_l(g, t).value() - 1e-12);
        }
    }
}

TEST_CASE("sigma_max against sigma_tot") {
    const auto prm1 = ModelParams::uniform(3, 3, {1.0});
    const OverlapPoint m1{0.5};
    const double g = spike_eigenvalues(prm1, m1).gamma[0];
    const double x = rho(g) / std::sqrt(3.0);
    CHECK(sigma_max_joint(prm1, m1, x).value() == Approx(sigma_tot_joint(prm1, m1, x).value()).epsilon(1e-14));
    CHECK(sigma_max_joint(prm1, m1, 0.5).is_neg_inf());  // t < 2

    const auto zero = ModelParams::uniform(3, 3, {0.0});
    CHECK(sigma_max_joint(zero, {0.3}, 1.5).value() == sigma_tot_joint(zero, {0.3}, 1.5).value());

    // small-overlap slice without spikes: bounded by the total complexity
    const double smax = sigma_max_projected(zero, {1e-3}).value();
    CHECK(smax <= 0.5 * std::log(2.0));
    CHECK(smax > 0.0);

    const auto two = ModelParams::uniform(3, 3, {2.0, 1.5});
    const OverlapPoint m2{0.6, 0.05};
    REQUIRE(spike_eigenvalues(two, m2).gamma[0] > 1.0);
    CHECK(sigma_max_projected(two, m2).value() < sigma_tot_projected(two, m2).value());

    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0), ux(-3.0, 3.0);
    for (int i = 0; i < 10000; ++i) {
        const auto prm = ModelParams::uniform(3 + i % 3, 3 + i % 3, {3.0 * u(rng)});
        const OverlapPoint m{0.999 * u(rng)};
        const double xx = ux(rng);
        CHECK(sigma_max_joint(prm, m, xx) <= sigma_tot_joint(prm, m, xx));
    }
}

TEST_CASE("sigma_max_projected is the maximum over x") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double l1 = 3 * u(rng), l2 = 3 * u(rng);
        if (l2 > l1) std::swap(l1, l2);
        const auto prm = ModelParams::uniform(3, 3, {l1, l2});
        std::vector<double> m{u(rng), u(rng)};
        if (m[0] * m[0] + m[1] * m[1] >= 0.999) continue;
        const OverlapPoint pt(m);
        auto f = [&](double x) { return sigma_max_joint(prm, pt, x).to_double(); };
        const double ref = oracle::maximize(f, -2.0, 12.0, 20000);
        const auto got = sigma_max_projected(prm, pt);
        CHECK(got.value() >= ref - 1e-9);
        CHECK(f(sigma_max_argmax(prm, pt)) == Approx(got.value()).epsilon(1e-12));
        CHECK(got.value() <= sigma_tot_projected(prm, pt).value() + 1e-12);
        if (got.value() > sigma_tot_projected(prm, pt).value())
            MESSAGE(l1, " ", l2, " ", m[0], " ", m[1], " ", got.value() - sigma_tot_projected(prm, pt).value());
    }
}
