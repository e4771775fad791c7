#pragma once

/**
 * @file quadrature.hpp
 * @brief Double-exponential (tanh-sinh) quadrature on (0, 1).
 *
 * Substituting x = (1 + tanh((pi/2) sinh t)) / 2 maps (0,1) to the real line
 * and makes the trapezoidal rule in t converge double-exponentially, even
 * when the integrand carries algebraic endpoint singularities x^s (1-x)^t
 * with s, t > -1.  With q = exp(-pi sinh|t|) the abscissa and its distance
 * to the far endpoint are
 *
 *   x = 1/(1+q),  1-x = q/(1+q)          (t > 0; mirrored for t < 0)
 *
 * and the weight is dx/dt = pi cosh(t) * q/(1+q)^2, all free of cancellation.
 * Node density doubles per refinement level; the level-to-level difference of
 * the estimates serves as the error measure.
 *
 * Integrands may be callables of one argument f(x), or of two arguments
 * f(x, xc) with xc = 1-x delivered at full precision.  The two-argument form
 * is the one to use when the singular part involves 1-x: near the right
 * endpoint the distance 1-x shrinks below the resolution of double values of
 * x, and only xc carries it accurately.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <vector>

#include "core.hpp"

namespace hyperterm {

/// Tolerance and refinement budget for adaptive quadrature.
struct quadrature_spec {
    double tol = 1e-12;
    int max_level = 12;
};

/// Quadrature outcome: the estimate, the last level-to-level difference, the
/// refinement depth used, the number of integrand evaluations, and the full
/// difference history (err_history[i] is |I_{i+1} - I_i|).
struct quad_result {
    double value = 0.0;
    double err = 0.0;
    int levels = 0;
    std::int64_t evals = 0;
    std::vector<double> err_history;
};

namespace detail {

inline void require_quad_spec(const quadrature_spec& spec) {
    if (!(spec.tol > 0.0) || !(spec.tol < 1.0))
        throw param_error("quadrature tolerance must lie in (0, 1)");
    if (spec.max_level < 1 || spec.max_level > 16)
        throw param_error("quadrature max_level must lie in [1, 16]");
}

// Nodes with |t| beyond this have q = exp(-pi sinh|t|) underflow to zero;
// their weights are not representable and their true contribution is below
// 1e-12 for any integrable endpoint exponent.
inline constexpr double tanh_sinh_t_max = 6.17;

} // namespace detail

/// Adaptive tanh-sinh integration of f over (0, 1).
/// Stops when consecutive refinements agree within spec.tol (scaled by the
/// estimate's magnitude when it exceeds 1).  Throws no_convergence_error if
/// max_level is reached first, and integrand_domain_error if f returns a
/// non-finite value anywhere except in the immediate endpoint neighborhood.
template <class F>
    requires std::invocable<F&, double> || std::invocable<F&, double, double>
quad_result tanh_sinh(F&& f, quadrature_spec spec = {}) {
    detail::require_quad_spec(spec);

    std::int64_t evals = 0;

    // Weighted integrand at t = +/- t_abs; returns 0 for dead nodes.
    const auto node = [&](double t_abs, bool right_side) -> double {
        const double u = 0.5 * std::numbers::pi * std::sinh(t_abs);
        const double q = std::exp(-2.0 * u);
        if (q == 0.0)
            return 0.0;
        const double lo = q / (1.0 + q);  // distance to the near endpoint
        const double hi = 1.0 / (1.0 + q);
        const double x = right_side ? hi : lo;
        const double xc = right_side ? lo : hi;
        const double w =
            std::numbers::pi * std::cosh(t_abs) * q / ((1.0 + q) * (1.0 + q));
        if (w == 0.0)
            return 0.0;
        ++evals;
        double fx;
        if constexpr (std::invocable<F&, double, double>)
            fx = f(x, xc);
        else
            fx = f(x);
        if (!std::isfinite(fx)) {
            if (std::min(x, xc) < 1e-10)
                return 0.0; // integrable endpoint spillover
            throw integrand_domain_error(
                "integrand returned a non-finite value inside (0, 1)");
        }
        return w * fx;
    };

    detail::neumaier_sum total;

    // Level 0: integer multiples of h = 1.  At t = 0 the node sits at
    // x = 1/2 with weight pi/4.
    {
        ++evals;
        double f_mid;
        if constexpr (std::invocable<F&, double, double>)
            f_mid = f(0.5, 0.5);
        else
            f_mid = f(0.5);
        if (!std::isfinite(f_mid))
            throw integrand_domain_error("integrand non-finite at x = 1/2");
        total.add(0.25 * std::numbers::pi * f_mid);
    }
    for (int k = 1; k <= static_cast<int>(detail::tanh_sinh_t_max); ++k) {
        total.add(node(static_cast<double>(k), true));
        total.add(node(static_cast<double>(k), false));
    }

    double h = 1.0;
    double estimate = h * total.value();

    quad_result result;
    result.value = estimate;
    result.err = std::numeric_limits<double>::infinity();

    for (int level = 1; level <= spec.max_level; ++level) {
        h *= 0.5;
        const std::int64_t k_max =
            static_cast<std::int64_t>(detail::tanh_sinh_t_max / h);
        for (std::int64_t k = 1; k <= k_max; k += 2) { // odd multiples are new
            const double t = static_cast<double>(k) * h;
            total.add(node(t, true));
            total.add(node(t, false));
        }
        const double refined = h * total.value();
        const double diff = std::abs(refined - estimate);
        result.err_history.push_back(diff);
        estimate = refined;
        result.value = estimate;
        result.err = diff;
        result.levels = level;
        result.evals = evals;
        if (level >= 2 && diff <= spec.tol * std::max(1.0, std::abs(estimate)))
            return result;
    }
    throw no_convergence_error(
        "tanh-sinh quadrature did not converge within max_level refinements");
}

} // namespace hyperterm
