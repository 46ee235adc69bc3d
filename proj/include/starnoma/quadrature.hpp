#pragma once

// Chebyshev-Gauss nodes for the closed-form rate sums, and a Gauss-Kronrod
// 15(7) globally adaptive integrator used by the direct-integration oracles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace starnoma {

// Chebyshev-Gauss rule of order M: nodes eps_i = cos((2i-1)pi/(2M)) in
// (-1,1), strictly decreasing, with the uniform weight pi/M.
struct QuadratureSpec {
    int M = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline QuadratureSpec cg_nodes(int M) {
    if (M < 1) {
        throw std::domain_error("cg_nodes: M must be >= 1 (got " +
                                std::to_string(M) + ")");
    }
    QuadratureSpec spec;
    spec.M = M;
    spec.nodes.resize(M);
    spec.weights.assign(M, M_PI / M);
    for (int i = 1; i <= M; ++i) {
        spec.nodes[i - 1] = std::cos((2.0 * i - 1.0) * M_PI / (2.0 * M));
    }
    return spec;
}

// Chebyshev-Gauss approximation of the plain integral of f over [a,b]:
// ((b-a)/2) * sum_i w_i sqrt(1-eps_i^2) f(a + (b-a)(eps_i+1)/2).
// The sqrt factor folds the 1/sqrt(1-x^2) weight back out, so this is the
// midpoint rule in the arccos variable with O(1/M^2) endpoint bias.
template <class F>
double integrate_cg(F&& f, double a, double b, const QuadratureSpec& spec) {
    if (!(a < b)) {
        throw std::invalid_argument("integrate_cg: requires a < b");
    }
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < spec.M; ++i) {
        const double eps = spec.nodes[i];
        const double x = a + half * (eps + 1.0);
        const double fx = f(x);
        if (!std::isfinite(fx)) {
            throw NumericalError("integrate_cg: non-finite integrand at x=" +
                                 std::to_string(x));
        }
        sum += spec.weights[i] * std::sqrt(1.0 - eps * eps) * fx;
    }
    return half * sum;
}

namespace detail {

// Gauss-Kronrod 15-point nodes and weights on [-1,1] (7-point Gauss
// embedded at the odd Kronrod nodes), the standard QUADPACK constants.
// Index 7 is the center node.
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};

inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GkSegment {
    double a, b, integral, error;
};

template <class F>
GkSegment gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    auto eval = [&f](double x) {
        const double v = f(x);
        if (!std::isfinite(v)) {
            throw NumericalError(
                "integrate_adaptive: non-finite integrand at x=" +
                std::to_string(x));
        }
        return v;
    };
    const double fc = eval(c);
    double resk = kGk15Weights[7] * fc;
    double resg = kG7Weights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kGk15Nodes[i];
        const double pair = eval(c - dx) + eval(c + dx);
        resk += kGk15Weights[i] * pair;
        if (i % 2 == 1) resg += kG7Weights[i / 2] * pair;
    }
    return {a, b, resk * h, std::fabs((resk - resg) * h)};
}

inline bool gk_error_less(const GkSegment& x, const GkSegment& y) {
    return x.error < y.error;
}

// Finite-interval core of integrate_adaptive, split out so the
// semi-infinite mapping below does not instantiate itself recursively.
template <class F>
double integrate_adaptive_finite(F& f, double a, double b, double rel_tol,
                                 std::size_t max_evals) {
    if (!(a < b)) {
        throw std::invalid_argument("integrate_adaptive: requires a < b");
    }

    std::vector<detail::GkSegment> heap;
    heap.push_back(detail::gk15(f, a, b));
    std::size_t evals = 15;
    double total = heap.front().integral;
    double total_err = heap.front().error;

    while (total_err > rel_tol * std::fabs(total)) {
        if (evals + 30 > max_evals) {
            throw ConvergenceError(
                "integrate_adaptive: evaluation budget exhausted (err=" +
                std::to_string(total_err) + ", target=" +
                std::to_string(rel_tol * std::fabs(total)) + ")");
        }
        std::pop_heap(heap.begin(), heap.end(), detail::gk_error_less);
        const detail::GkSegment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            throw ConvergenceError(
                "integrate_adaptive: interval underflow near x=" +
                std::to_string(worst.a));
        }
        for (const auto& half : {detail::gk15(f, worst.a, mid),
                                 detail::gk15(f, mid, worst.b)}) {
            total += half.integral;
            total_err += half.error;
            heap.push_back(half);
            std::push_heap(heap.begin(), heap.end(), detail::gk_error_less);
        }
        total -= worst.integral;
        total_err -= worst.error;
        evals += 30;
    }

    // Recompute the value from the surviving segments; the incremental
    // running total above carries accumulated cancellation after many
    // updates, the direct sum does not.
    double result = 0.0;
    for (const auto& seg : heap) result += seg.integral;
    return result;
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration of f over [a,b], or over
// [a, inf) when b is +infinity (mapped through x = a + t/(1-t), t in [0,1)).
// Repeatedly bisects the segment with the largest error estimate until the
// summed error drops below rel_tol * |integral|; throws ConvergenceError
// rather than returning a value it cannot certify within the budget.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol,
                          std::size_t max_evals = 1000000) {
    if (!(rel_tol > 0.0) || rel_tol > 1e-2) {
        throw std::invalid_argument(
            "integrate_adaptive: rel_tol must be in (0, 1e-2]");
    }
    if (std::isinf(b)) {
        auto mapped = [&f, a](double t) {
            const double om = 1.0 - t;
            return f(a + t / om) / (om * om);
        };
        return detail::integrate_adaptive_finite(mapped, 0.0, 1.0, rel_tol,
                                                 max_evals);
    }
    return detail::integrate_adaptive_finite(f, a, b, rel_tol, max_evals);
}

}  // namespace starnoma
