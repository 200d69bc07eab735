#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spikedland/quadrature.hpp"

using namespace spiked;
using doctest::Approx;

TEST_CASE("polynomials and smooth integrands") {
    auto r = integrate_gk15([](double x) { return Eigen::VectorXd::Constant(1, x * x); }, 1, 0.0, 1.0, 1e-12);
    CHECK(r.value[0] == Approx(1.0 / 3.0).epsilon(1e-14));
    auto v = integrate_gk15(
        [](double x) {
            Eigen::VectorXd out(2);
            out << std::sin(x), std::exp(x);
            return out;
        },
        2, 0.0, M_PI, 1e-12);
    CHECK(v.value[0] == Approx(2.0).epsilon(1e-12));
    CHECK(v.value[1] == Approx(std::exp(M_PI) - 1.0).epsilon(1e-12));
}

TEST_CASE("endpoint singularity converges adaptively") {
    auto r = integrate_gk15([](double x) { return Eigen::VectorXd::Constant(1, 1.0 / std::sqrt(x)); }, 1, 0.0,
                            1.0, 1e-8);
    CHECK(r.value[0] == Approx(2.0).epsilon(1e-7));
    CHECK(r.intervals > 1);
}

TEST_CASE("non-convergence reports the achieved tolerance") {
    try {
        integrate_gk15([](double x) { return Eigen::VectorXd::Constant(1, std::sin(1.0 / x) / x); }, 1, 1e-6,
                       1.0, 1e-14, 0.0, 5);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.achieved > e.target);
    }
}
