#pragma once

// Incomplete-gamma and exponential-integral primitives, plus the scaled
// products exp(a)*E1(x) and exp(a)*Gamma(j,x) that the closed-form rate
// expressions need. The scaled forms exist because the rate formulas pair
// exp(psi) factors with E1/Gamma factors whose naive values overflow or
// underflow long before the product does; direct exp()*E1() products are
// forbidden in the rate code for that reason.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace starnoma {

namespace detail {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;
inline constexpr int kMaxIter = 500;
inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kTiny = 1e-300;

// Regularized lower incomplete gamma P(k,x) by power series; converges
// quickly for x < k+1.
inline double gamma_p_series(double k, double x) {
    double ap = k;
    double del = 1.0 / k;
    double sum = del;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) {
            return sum * std::exp(k * std::log(x) - x - std::lgamma(k));
        }
    }
    throw ConvergenceError("gamma_p_series: no convergence at k=" +
                           std::to_string(k) + " x=" + std::to_string(x));
}

// Regularized upper incomplete gamma Q(k,x) by modified-Lentz continued
// fraction; the complementary regime, x >= k+1.
inline double gamma_q_cf(double k, double x) {
    double b = x + 1.0 - k;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (i - k);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) {
            return h * std::exp(k * std::log(x) - x - std::lgamma(k));
        }
    }
    throw ConvergenceError("gamma_q_cf: no convergence at k=" +
                           std::to_string(k) + " x=" + std::to_string(x));
}

// exp(x)*E1(x) by modified-Lentz continued fraction; valid for x >= 1.
// Working on the pre-scaled quantity keeps the result meaningful far past
// the x ~ 700 point where E1 itself underflows.
inline double exp_e1_cf(double x) {
    double b = x + 1.0;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("exp_e1_cf: no convergence at x=" + std::to_string(x));
}

// E1(x) by alternating power series; valid for 0 < x < 1 where the
// continued fraction is slow.
inline double e1_series(double x) {
    double sum = -kEulerGamma - std::log(x);
    double t = 1.0;
    for (int n = 1; n <= kMaxIter; ++n) {
        t *= -x / n;
        const double contrib = -t / n;
        sum += contrib;
        if (std::fabs(contrib) < std::fabs(sum) * kEps) return sum;
    }
    throw ConvergenceError("e1_series: no convergence at x=" + std::to_string(x));
}

}  // namespace detail

// Regularized lower incomplete gamma P(k,x) = gamma(k,x)/Gamma(k), in [0,1].
// Series below the x = k+1 crossover, continued fraction above it.
inline double reg_lower_gamma(double k, double x) {
    if (!(k > 0.0)) {
        throw std::domain_error("reg_lower_gamma: k must be > 0 (got " +
                                std::to_string(k) + ")");
    }
    if (!(x >= 0.0)) {
        throw std::domain_error("reg_lower_gamma: x must be >= 0 (got " +
                                std::to_string(x) + ")");
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;  // limit; the CF iteration has no fixpoint there
    if (x < k + 1.0) return detail::gamma_p_series(k, x);
    return 1.0 - detail::gamma_q_cf(k, x);
}

// Regularized upper incomplete gamma Q(k,x) = 1 - P(k,x). Computed on the
// same series/continued-fraction split but always from the side evaluated
// directly, so it stays meaningful (down to underflow) where P rounds to 1
// and the naive complement would be pure cancellation noise.
inline double reg_upper_gamma(double k, double x) {
    if (!(k > 0.0)) {
        throw std::domain_error("reg_upper_gamma: k must be > 0 (got " +
                                std::to_string(k) + ")");
    }
    if (!(x >= 0.0)) {
        throw std::domain_error("reg_upper_gamma: x must be >= 0 (got " +
                                std::to_string(x) + ")");
    }
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < k + 1.0) return 1.0 - detail::gamma_p_series(k, x);
    return detail::gamma_q_cf(k, x);
}

// Scaled product exp(a)*Gamma(j,x) for integer j >= 1, via the finite form
// Gamma(j,x) = (j-1)! e^{-x} sum_{i<j} x^i/i!. Each term is assembled in
// log space so the product stays finite wherever a - x is moderate even
// though exp(a) alone would overflow.
inline double exp_mul_upper_gamma(double a, int j, double x) {
    if (j < 1) {
        throw std::domain_error("exp_mul_upper_gamma: j must be >= 1 (got " +
                                std::to_string(j) + ")");
    }
    if (!(x >= 0.0)) {
        throw std::domain_error("exp_mul_upper_gamma: x must be >= 0 (got " +
                                std::to_string(x) + ")");
    }
    const double lgj = std::lgamma(static_cast<double>(j));
    if (x == 0.0) return std::exp(a + lgj);  // Gamma(j,0) = (j-1)!
    const double lx = std::log(x);
    double sum = 0.0;
    double lfac = 0.0;  // log(i!)
    for (int i = 0; i < j; ++i) {
        if (i > 0) lfac += std::log(static_cast<double>(i));
        sum += std::exp(a - x + lgj + i * lx - lfac);
    }
    return sum;
}

// Upper incomplete gamma Gamma(j,x) for integer j >= 1.
inline double upper_gamma_int(int j, double x) {
    return exp_mul_upper_gamma(0.0, j, x);
}

// Exponential integral E1(x), x > 0. Power series below 1, continued
// fraction above; relative error at or below 1e-12 across [1e-8, 700].
inline double e1(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("e1: x must be > 0 (got " + std::to_string(x) +
                                ")");
    }
    if (x < 1.0) return detail::e1_series(x);
    return std::exp(-x) * detail::exp_e1_cf(x);
}

// Scaled product exp(a)*E1(x), x > 0. Finite whenever a - x stays within
// the exp() range, long after exp(a) and E1(x) separately over/underflow.
inline double exp_mul_e1(double a, double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("exp_mul_e1: x must be > 0 (got " +
                                std::to_string(x) + ")");
    }
    const double log_e1 = (x < 1.0) ? std::log(detail::e1_series(x))
                                    : std::log(detail::exp_e1_cf(x)) - x;
    return std::exp(a + log_e1);
}

}  // namespace starnoma
