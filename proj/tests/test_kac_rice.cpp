#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "spikedland/kac_rice.hpp"

using namespace spiked;
using doctest::Approx;

namespace {

ModelParams single(double lambda) { return ModelParams::uniform(3, 3, {lambda}); }

Eigen::VectorXd unit(std::vector<double> v) {
    Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
    return x / x.norm();
}

}  // namespace

TEST_CASE("constants") {
    CHECK(kac_rice_constant(2, 1, 3) == Approx(0.165604).epsilon(1e-6));
    const double e = std::exp(1.0);
    CHECK(kac_rice_constant(2, 1, 3) ==
          Approx(2 * std::sqrt(1 / (2 * e)) / std::sqrt(M_PI) * std::sqrt(2 / (2 * e * M_PI))).epsilon(1e-14));
    CHECK(sphere_volume(2) == Approx(2 * M_PI));
    CHECK(sphere_volume(3) == Approx(4 * M_PI));
}

TEST_CASE("polynomial construction") {
    const auto a = build_polynomial(single(0.0), 3, 5);
    const auto b = build_polynomial(single(0.0), 3, 5);
    CHECK(a.coupling == b.coupling);
    CHECK(a.coupling_at({0, 1, 2}) == a.coupling_at({2, 0, 1}));
    CHECK(a.coupling_at({0, 0, 1}) == a.coupling_at({1, 0, 0}));
    const auto s = unit({0.3, -0.5, 0.8});
    CHECK(a.value(s) == a.noise_value(s));
    const auto spiked = build_polynomial(single(2.0), 3, 5);
    CHECK(spiked.value(s) == Approx(a.value(s) + 2.0 * std::pow(s[0], 3)).epsilon(1e-14));
    CHECK_THROWS(build_polynomial(ModelParams::uniform(3, 3, {1.0, 1.0, 1.0}), 2, 1));
    CHECK_THROWS(build_polynomial(single(0.0), 1, 1));
}

TEST_CASE("covariance of the noise") {
    const auto s = unit({0.6, 0.8}), t = unit({1.0, 0.2});
    const int T = 10000;
    double same = 0, same2 = 0, cross = 0, cross2 = 0;
    for (int i = 0; i < T; ++i) {
        const auto poly = build_polynomial(single(0.0), 2, 1000 + i);
        const double hs = poly.noise_value(s), ht = poly.noise_value(t);
        same += hs * hs; same2 += hs * hs * hs * hs;
        cross += hs * ht; cross2 += hs * ht * hs * ht;
    }
    same /= T; cross /= T;
    const double se_same = std::sqrt((same2 / T - same * same) / T);
    const double se_cross = std::sqrt((cross2 / T - cross * cross) / T);
    CHECK(std::abs(same - 0.25) < 3 * se_same);
    CHECK(std::abs(cross - std::pow(s.dot(t), 3) / 4.0) < 3 * se_cross);
}

TEST_CASE("derivatives match finite differences") {
    const auto poly = build_polynomial(ModelParams::uniform(3, 3, {1.5, 0.5}), 4, 9);
    Eigen::VectorXd x(4);
    x << 0.3, -0.2, 0.5, 0.1;
    const double h = 1e-6;
    const auto g = poly.gradient(x);
    const auto H = poly.hessian(x);
    for (int i = 0; i < 4; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(4);
        e[i] = h;
        CHECK(g[i] == Approx((poly.value(x + e) - poly.value(x - e)) / (2 * h)).epsilon(1e-6));
        const Eigen::VectorXd col = (poly.gradient(x + e) - poly.gradient(x - e)) / (2 * h);
        for (int j = 0; j < 4; ++j) CHECK(H(j, i) == Approx(col[j]).epsilon(1e-5));
    }
    const auto s = unit({0.3, -0.2, 0.5, 0.1});
    CHECK(std::abs(poly.riemannian_gradient(s).dot(s)) < 1e-14);
    const auto B = tangent_basis(s);
    CHECK((B.transpose() * B - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
    CHECK((B.transpose() * s).norm() < 1e-12);
}

TEST_CASE("circle scans: parity, Morse relation, antipodes") {
    std::set<std::size_t> sizes;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto poly = build_polynomial(single(0.0), 2, seed);
        const auto found = find_critical_points(poly);
        CHECK(found.complete);
        const auto& pts = found.points;
        sizes.insert(pts.size());
        CHECK(pts.size() % 2 == 0);
        CHECK(pts.size() >= 2);
        int idx0 = 0, idx1 = 0;
        double min_gap = INFINITY;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            CHECK(pts[i].residual < 1e-9);
            CHECK(std::abs(pts[i].location.norm() - 1.0) < 1e-12);
            (pts[i].index == 0 ? idx0 : idx1)++;
            // -sigma is critical with the opposite value and index
            bool partner = false;
            for (std::size_t j = 0; j < pts.size(); ++j) {
                if ((pts[j].location + pts[i].location).norm() < 1e-7) {
                    partner = true;
                    CHECK(pts[j].value == Approx(-pts[i].value).epsilon(1e-9));
                    CHECK(pts[j].index == 1 - pts[i].index);
                }
                if (j != i) min_gap = std::min(min_gap, (pts[j].location - pts[i].location).norm());
            }
            CHECK(partner);
        }
        CHECK(idx0 == idx1);
        // no two points within twice the dedup radius, so halving it changes nothing
        CHECK(min_gap > 2 * kDedupRadius);
    }
    for (auto s : sizes) CHECK((s == 2 || s == 4 || s == 6));
}

TEST_CASE("indices of spiked circle scans respect the Morse relation") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto found = find_critical_points(build_polynomial(single(1.0), 2, seed));
        int idx0 = 0, idx1 = 0;
        for (const auto& p : found.points) (p.index == 0 ? idx0 : idx1)++;
        CHECK(idx0 == idx1);
    }
}

TEST_CASE("multistart Newton for n = 3") {
    const auto found = find_critical_points(build_polynomial(single(0.0), 3, 4), 1e-10, 100);
    CHECK_FALSE(found.complete);
    CHECK(found.points.size() >= 2);
    int idx[3] = {0, 0, 0};
    for (const auto& p : found.points) {
        CHECK(p.residual < 1e-9);
        idx[p.index]++;
    }
    CHECK(idx[0] == idx[2]);  // antipodal symmetry for odd p
}

TEST_CASE("count filters") {
    const auto full = full_overlap_windows(1);
    const auto none = count_expected(single(0.0), 2, 20, 1, full, Interval{1.0, 0.0}, CountSelector::total());
    CHECK(none.estimate.value == 0.0);
    const auto raw = count_expected(single(0.0), 2, 20, 1, full, Interval::all(), CountSelector::total());
    double manual = 0;
    for (int t = 0; t < 20; ++t)
        manual += find_critical_points(build_polynomial(single(0.0), 2, trial_seed(1, t))).points.size();
    CHECK(raw.estimate.value == Approx(manual / 20));
    CHECK(raw.complete);

    const std::vector<Interval> near{{0.9, 1.0}};
    const auto base = count_expected(single(0.0), 2, 400, 3, near, Interval::all(), CountSelector::total());
    const auto strong = count_expected(single(2.0), 2, 400, 3, near, Interval::all(), CountSelector::total());
    CHECK(strong.estimate.value > base.estimate.value);

    const auto maxima = count_expected(single(1.0), 2, 100, 3, full, Interval::all(), CountSelector::maxima());
    const auto idx1 = count_expected(single(1.0), 2, 100, 3, full, Interval::all(), CountSelector::of_index(1));
    CHECK(maxima.estimate.value == idx1.estimate.value);  // n = 2: index n - 1 is a maximum
    const auto three = count_expected(single(0.0), 3, 4, 1, full, Interval::all(), CountSelector::total(), 40);
    CHECK_FALSE(three.complete);
}

TEST_CASE("Kac-Rice evaluation") {
    const auto full = full_overlap_windows(1);
    KacRiceOptions opt;
    opt.seed = 2;
    opt.rel_tol = 1e-3;
    const auto tot = kac_rice_eval(single(0.0), 2, full, Interval::all(), 2000, CountSelector::total(), opt);
    CHECK(std::abs(tot.value - 2 * std::sqrt(7.0)) < 4 * tot.std_error + 1e-3);
    const auto mx = kac_rice_eval(single(0.0), 2, full, Interval::all(), 2000, CountSelector::maxima(), opt);
    CHECK(mx.value <= tot.value);
    CHECK(mx.value == Approx(tot.value / 2).epsilon(0.05));
    const auto empty = kac_rice_eval(single(0.0), 2, full, Interval{1.0, 0.0}, 200, CountSelector::total(), opt);
    CHECK(empty.value == 0.0);
    CHECK_THROWS(kac_rice_eval(ModelParams::uniform(3, 3, {1.0, 1.0}), 2, full_overlap_windows(2),
                               Interval::all(), 100, CountSelector::total(), opt));
}

TEST_CASE("best-effort counting at n = 3 matches the formula") {
    const auto prm = single(0.0);
    const auto full = full_overlap_windows(1);
    const auto count = count_expected(prm, 3, 400, 31, full, Interval::all(), CountSelector::total(), 100);
    KacRiceOptions opt;
    opt.seed = 32;
    const auto formula = kac_rice_eval(prm, 3, full, Interval::all(), 0, CountSelector::total(), opt);
    const double se = std::hypot(count.estimate.std_error, formula.std_error);
    CHECK(std::abs(count.estimate.value - formula.value) <= 3.0 * se);
}
