// Chebyshev-Gauss node generation and the adaptive Gauss-Kronrod
// integrator, against closed-form integrals and reference node values.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "starnoma/errors.hpp"
#include "starnoma/quadrature.hpp"

using namespace starnoma;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("Chebyshev-Gauss nodes and weights") {
    const QuadratureSpec s4 = cg_nodes(4);
    REQUIRE(s4.M == 4);
    REQUIRE(s4.nodes.size() == 4);
    CHECK(s4.nodes[0] == Catch::Approx(0.923879532511286756).epsilon(1e-15));
    CHECK(s4.nodes[1] == Catch::Approx(0.382683432365089772).epsilon(1e-15));
    CHECK(s4.nodes[2] == Catch::Approx(-0.382683432365089772).epsilon(1e-15));
    CHECK(s4.nodes[3] == Catch::Approx(-0.923879532511286756).epsilon(1e-15));
    for (double w : s4.weights) CHECK(w == Catch::Approx(M_PI / 4).epsilon(1e-15));
    CHECK_THROWS_AS(cg_nodes(0), std::domain_error);
}

TEST_CASE("Chebyshev-Gauss rule reproduces its exact finite sum") {
    // For f = 1 on [-1,1] the rule gives sum (pi/M) sqrt(1-eps_i^2), which
    // is not exactly 2: the bias is the (pi/M)^2/12-order endpoint defect
    // of the midpoint rule in the arccos variable.
    const QuadratureSpec s = cg_nodes(10);
    const double v = integrate_cg([](double) { return 1.0; }, -1.0, 1.0, s);
    CHECK(v == Catch::Approx(2.00824840790797440).epsilon(1e-14));
}

TEST_CASE("Chebyshev-Gauss rule converges at second order") {
    auto f = [](double x) { return std::exp(x); };
    const double exact = std::exp(1.0) - 1.0;
    const double e200 = std::fabs(integrate_cg(f, 0.0, 1.0, cg_nodes(200)) - exact);
    const double e400 = std::fabs(integrate_cg(f, 0.0, 1.0, cg_nodes(400)) - exact);
    const double e4000 =
        std::fabs(integrate_cg(f, 0.0, 1.0, cg_nodes(4000)) - exact);
    CHECK(e400 == Catch::Approx(e200 / 4.0).epsilon(0.02));
    CHECK(e4000 < 1.2e-7);
}

TEST_CASE("Chebyshev-Gauss rule input validation") {
    const QuadratureSpec s = cg_nodes(8);
    CHECK_THROWS_AS(integrate_cg([](double) { return 1.0; }, 2.0, 1.0, s),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        integrate_cg([](double) { return std::numeric_limits<double>::quiet_NaN(); },
                     0.0, 1.0, s),
        NumericalError);
}

TEST_CASE("adaptive integrator on closed-form integrals") {
    CHECK(integrate_adaptive([](double x) { return x * x; }, 0.0, 2.0, 1e-12) ==
          Catch::Approx(8.0 / 3.0).epsilon(1e-12));
    // int_0^1 log(1+x)/(1+x^2) dx = (pi/8) log 2
    CHECK(integrate_adaptive(
              [](double x) { return std::log1p(x) / (1.0 + x * x); }, 0.0, 1.0,
              1e-12) == Catch::Approx(M_PI / 8.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("adaptive integrator handles semi-infinite upper limits") {
    CHECK(integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, kInf,
                             1e-12) == Catch::Approx(1.0).epsilon(1e-11));
    // int_0^inf x^2 e^{-x} dx = 2
    CHECK(integrate_adaptive([](double x) { return x * x * std::exp(-x); }, 0.0,
                             kInf, 1e-12) == Catch::Approx(2.0).epsilon(1e-11));
    // shifted lower limit
    CHECK(integrate_adaptive([](double x) { return std::exp(-(x - 3.0)); }, 3.0,
                             kInf, 1e-12) == Catch::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("adaptive integrator resolves a narrow interior peak") {
    // e^{-100 (x-5)^2} over [0, 10]: essentially all mass in a width-0.3
    // window that a fixed 15-point rule on [0,10] misses entirely
    const double v = integrate_adaptive(
        [](double x) { return std::exp(-100.0 * (x - 5.0) * (x - 5.0)); }, 0.0,
        10.0, 1e-11);
    CHECK(v == Catch::Approx(std::sqrt(M_PI / 100.0)).epsilon(1e-10));
}

TEST_CASE("adaptive integrator failure modes") {
    CHECK_THROWS_AS(
        integrate_adaptive([](double x) { return std::sin(50.0 * x); }, 0.0,
                           20.0, 1e-9, 60),
        ConvergenceError);
    CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, 1.0, 0.0, 1e-9),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-9),
        NumericalError);
}
