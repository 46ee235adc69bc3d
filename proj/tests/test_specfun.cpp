// Incomplete-gamma and exponential-integral kernels against externally
// computed 30-digit reference values, plus the scaled products that keep
// the rate formulas finite outside the naive overflow range.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "starnoma/specfun.hpp"

using namespace starnoma;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("regularized lower gamma matches reference values") {
    CHECK(reg_lower_gamma(1.0, 1.0) ==
          Catch::Approx(0.632120558828557678).epsilon(1e-14));
    CHECK(reg_lower_gamma(2.0, 1.0) ==
          Catch::Approx(0.264241117657115357).epsilon(1e-14));
    // half-integer shape ties the series branch to the error function
    CHECK(reg_lower_gamma(0.5, 1.0) ==
          Catch::Approx(0.84270079294971489).epsilon(1e-14));
}

TEST_CASE("regularized lower gamma endpoints and domain") {
    CHECK(reg_lower_gamma(3.0, 0.0) == 0.0);
    CHECK(reg_lower_gamma(3.0, kInf) == 1.0);
    CHECK_THROWS_AS(reg_lower_gamma(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(reg_lower_gamma(-2.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(reg_lower_gamma(1.0, -0.5), std::domain_error);
}

TEST_CASE("regularized upper gamma is the direct complement") {
    CHECK(reg_upper_gamma(3.0, 0.0) == 1.0);
    CHECK(reg_upper_gamma(3.0, kInf) == 0.0);
    // far below the cancellation floor of 1 - P
    CHECK(reg_upper_gamma(3.0, 50.0) ==
          Catch::Approx(2.5093035522010571e-19).epsilon(1e-13));
    // both branches agree with the lower-gamma complement where that is
    // well conditioned
    for (double x : {0.3, 1.0, 2.5, 4.0, 7.0, 12.0}) {
        for (double k : {0.5, 1.0, 3.0, 5.5}) {
            CHECK(reg_upper_gamma(k, x) ==
                  Catch::Approx(1.0 - reg_lower_gamma(k, x)).margin(1e-14));
        }
    }
    CHECK_THROWS_AS(reg_upper_gamma(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(reg_upper_gamma(1.0, -1.0), std::domain_error);
}

TEST_CASE("lower/upper split sums to one across the branch boundary") {
    // 1e-12 over a grid straddling x = k+1 where the implementation switches
    // between the series and the continued fraction
    for (double k : {0.7, 1.0, 2.0, 3.0, 5.0, 8.5, 20.0}) {
        for (double f : {0.1, 0.5, 0.9, 0.999, 1.001, 1.2, 2.0, 5.0}) {
            const double x = f * (k + 1.0);
            const double p = reg_lower_gamma(k, x);
            const double q = reg_upper_gamma(k, x);
            INFO("k=" << k << " x=" << x);
            CHECK(std::fabs(p + q - 1.0) < 1e-12);
            CHECK(p >= 0.0);
            CHECK(q >= 0.0);
        }
    }
}

TEST_CASE("lower gamma is monotone in x") {
    for (double k : {0.5, 3.0, 9.0}) {
        double prev = 0.0;
        for (double x = 0.25; x < 40.0; x += 0.25) {
            const double p = reg_lower_gamma(k, x);
            CHECK(p >= prev);
            prev = p;
        }
    }
}

TEST_CASE("integer upper gamma matches reference values") {
    CHECK(upper_gamma_int(1, 1.0) ==
          Catch::Approx(0.367879441171442322).epsilon(1e-14));
    CHECK(upper_gamma_int(3, 2.0) ==
          Catch::Approx(1.35335283236612692).epsilon(1e-14));
    // Gamma(j, 0) = (j-1)!
    CHECK(upper_gamma_int(4, 0.0) == Catch::Approx(6.0).epsilon(1e-14));
    CHECK_THROWS_AS(upper_gamma_int(0, 1.0), std::domain_error);
}

TEST_CASE("scaled upper gamma survives exponents that overflow alone") {
    // e^2 Gamma(3, 2) = e^2 * 2 e^{-2} (1 + 2 + 2) = 10 exactly
    CHECK(exp_mul_upper_gamma(2.0, 3, 2.0) == Catch::Approx(10.0).epsilon(1e-13));
    // e^700 Gamma(2, 700) = 701; both factors are out of double range
    CHECK(exp_mul_upper_gamma(700.0, 2, 700.0) ==
          Catch::Approx(701.0).epsilon(1e-12));
    CHECK(std::isfinite(exp_mul_upper_gamma(700.0, 2, 700.0)));
    CHECK_THROWS_AS(exp_mul_upper_gamma(0.0, 1, -1.0), std::domain_error);
}

TEST_CASE("exponential integral matches reference values") {
    CHECK(e1(1.0) == Catch::Approx(0.21938393439552027).epsilon(1e-14));
    CHECK(e1(0.1) == Catch::Approx(1.82292395841939067).epsilon(1e-14));
    CHECK(e1(30.0) == Catch::Approx(3.0215520106888124e-15).epsilon(1e-13));
    CHECK_THROWS_AS(e1(0.0), std::domain_error);
    CHECK_THROWS_AS(e1(-1.0), std::domain_error);
}

TEST_CASE("exponential integral agrees with the standard library") {
    // E1(x) = -Ei(-x); spans the series branch, the continued fraction,
    // and the crossover at x = 1
    for (double x = 0.05; x < 40.0; x *= 1.37) {
        INFO("x=" << x);
        CHECK(e1(x) == Catch::Approx(-std::expint(-x)).epsilon(1e-12));
    }
}

TEST_CASE("scaled exponential-integral product") {
    // exp_mul_e1(a, x) = e^a E1(x)
    CHECK(exp_mul_e1(0.0, 1.0) == Catch::Approx(e1(1.0)).epsilon(1e-14));
    // e^50 E1(50): E1 alone is ~5e-24, the product is order 0.02
    CHECK(exp_mul_e1(50.0, 50.0) ==
          Catch::Approx(0.0196151099301148704).epsilon(1e-13));
    // deep into the range where e^a overflows on its own
    const double v = exp_mul_e1(800.0, 800.0);
    CHECK(std::isfinite(v));
    // asymptotically e^x E1(x) ~ (1/x)(1 - 1/x + 2/x^2)
    CHECK(v == Catch::Approx((1.0 / 800.0) * (1.0 - 1.0 / 800.0 + 2.0 / 640000.0))
                   .epsilon(1e-6));
}
