#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spikedland/spike_spectrum.hpp"

using namespace spiked;
using doctest::Approx;

namespace {

// 2x2 eigenvalues of D_theta Gram by the quadratic formula, a brute-force reference.
std::pair<double, double> brute_2x2(double t1, double t2, double c) {
    const double tr = t1 + t2, det = t1 * t2 * (1 - c * c);
    const double disc = std::sqrt(tr * tr - 4 * det);
    return {(tr + disc) / 2, (tr - disc) / 2};
}

double theta(int p, int k, double lambda, double m) {
    return std::sqrt(2.0 / (p * (p - 1.0))) * k * (k - 1.0) * lambda * std::pow(m, k - 2) * (1 - m * m);
}

std::vector<double> random_point(std::mt19937_64& rng, int r) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> m(r);
    double a;
    do {
        a = 0;
        for (auto& v : m) { v = u(rng); a += v * v; }
    } while (a >= 1.0 || a == 0.0);
    return m;
}

}  // namespace

TEST_CASE("perturbation factors") {
    const auto f = perturbation_factors(ModelParams::uniform(3, 3, {1.0}), {0.5});
    CHECK(f.theta[0] == Approx(1.299038).epsilon(1e-6));
    CHECK(perturbation_factors(ModelParams::uniform(3, 3, {1.0}), {0.0}).theta[0] == 0.0);
    const auto g = perturbation_factors(ModelParams::uniform(3, 3, {1.0, 1.0}), {0.5, 0.5});
    CHECK(g.gram(0, 1) == Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(g.gram(0, 0) == 1.0);
    CHECK_THROWS_AS(perturbation_factors(ModelParams::uniform(3, 3, {1.0}), {1.0}), std::domain_error);
}

TEST_CASE("spike eigenvalue examples") {
    CHECK(spike_eigenvalues(ModelParams::uniform(3, 3, {1.0}), {0.5}).gamma[0] == Approx(1.299038).epsilon(1e-6));
    const auto prm = ModelParams::uniform(3, 3, {1.0, 1.0});
    const auto s = spike_eigenvalues(prm, {0.5, 0.5});
    CHECK(s.gamma[0] == Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(s.gamma[1] == Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
    const auto [g1, g2] = spike_eigenvalues_r2(prm, {0.5, 0.5});
    CHECK(g1 == Approx(1.732051).epsilon(1e-6));
    CHECK(g2 == Approx(0.866025).epsilon(1e-6));
    for (double v : spike_eigenvalues(ModelParams::uniform(3, 3, {0.0, 0.0, 0.0}), {0.2, 0.3, 0.1}).gamma)
        CHECK(v == 0.0);
    CHECK_THROWS_AS(spike_eigenvalues_r2(ModelParams::uniform(3, 3, {1.0}), {0.5}), std::invalid_argument);
    const auto two = ModelParams::uniform(3, 3, {2.0, 1.5});
    const auto r2 = spike_eigenvalues_r2(two, {0.3, 0.4});
    const double c = -0.12 / std::sqrt(0.91 * 0.84);
    const auto ref = brute_2x2(theta(3, 3, 2.0, 0.3), theta(3, 3, 1.5, 0.4), c);
    CHECK(r2.first == Approx(ref.first).epsilon(1e-12));
    CHECK(r2.second == Approx(ref.second).epsilon(1e-12));
}

TEST_CASE("closed form matches general solver, trace identity, PSD") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int i = 0; i < 10000; ++i) {
        double l1 = u(rng), l2 = u(rng);
        if (l2 > l1) std::swap(l1, l2);
        const int p = 3 + i % 3;
        const auto prm = ModelParams::uniform(p, p, {l1, l2});
        const auto m = random_point(rng, 2);
        const OverlapPoint pt(m);
        const auto gen = spike_eigenvalues(prm, pt);
        const auto cf = spike_eigenvalues_r2(prm, pt);
        const double scale = 1.0 + std::abs(gen.gamma[0]);
        CHECK(std::abs(gen.gamma[0] - cf.first) <= 1e-12 * scale);
        CHECK(std::abs(gen.gamma[1] - cf.second) <= 1e-12 * scale);
        const auto f = perturbation_factors(prm, pt);
        CHECK(std::abs(gen.gamma[0] + gen.gamma[1] - f.theta[0] - f.theta[1]) <= 1e-12 * scale);
        CHECK(gen.gamma[1] >= -1e-12);
    }
    for (int i = 0; i < 500; ++i) {
        const auto prm = ModelParams::uniform(4, 3, {2.5, 1.0, 0.5});
        const OverlapPoint pt(random_point(rng, 3));
        const auto s = spike_eigenvalues(prm, pt);
        CHECK(s.gamma[0] >= s.gamma[1]);
        CHECK(s.gamma[1] >= s.gamma[2]);
        CHECK(s.gamma[2] >= -1e-12);
    }
}

TEST_CASE("signed overlaps use the general solver") {
    const auto prm = ModelParams::uniform(3, 3, {1.0, 0.5});
    const auto s = spike_eigenvalues(prm, {-0.4, 0.5});
    const auto f = perturbation_factors(prm, {-0.4, 0.5});
    CHECK(f.theta[0] < 0.0);
    CHECK(s.gamma[0] + s.gamma[1] == Approx(f.theta[0] + f.theta[1]).epsilon(1e-12));
    const auto [g1, g2] = spike_eigenvalues_r2(prm, {-0.4, 0.5});
    CHECK(g1 == Approx(s.gamma[0]).epsilon(1e-12));
    CHECK(g2 == Approx(s.gamma[1]).epsilon(1e-12));
}

TEST_CASE("continuity along segments") {
    std::mt19937_64 rng(8);
    const auto prm = ModelParams::uniform(3, 3, {2.0, 1.5});
    for (int seg = 0; seg < 200; ++seg) {
        auto a = random_point(rng, 2), b = random_point(rng, 2);
        std::vector<double> prev;
        for (int s = 0; s <= 1000; ++s) {
            const double w = s / 1000.0;
            std::vector<double> m{a[0] + w * (b[0] - a[0]), a[1] + w * (b[1] - a[1])};
            if (m[0] * m[0] + m[1] * m[1] >= 1.0) { prev.clear(); continue; }
            const auto g = spike_eigenvalues(prm, OverlapPoint(m)).gamma;
            if (!prev.empty()) {
                CHECK(std::abs(g[0] - prev[0]) <= 1e-2);
                CHECK(std::abs(g[1] - prev[1]) <= 1e-2);
            }
            prev = g;
        }
    }
}
