#pragma once

/**
 * @file product.hpp
 * @brief Infinite-product evaluation of the interpolated term.
 *
 * The term at real index n has the product representation
 *
 *   term(n) = alpha^n * prod_{k>=0} [ (a+kb)/(a+(n+k)b) ]
 *                                 * [ (alpha+(k+1)b)/(alpha+kb) ]^n
 *
 * for any alpha > 0.  Each bracketed pair tends to 1, and its logarithm
 *
 *   lf(k) = n*log1p(b/(alpha+kb)) - log1p(n*b/(a+kb))
 *
 * decays like C/k^2 with C = n*((a-alpha)/b + (n-1)/2); choosing
 * alpha = a + (n-1)b/2 cancels C and leaves O(1/k^3) factors.  Evaluation
 * accumulates lf(k) with compensated summation and closes the sum with a
 * fitted two-term tail correction (see detail::adaptive_log_product).
 */

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "core.hpp"

namespace hyperterm {

// ---------------------------------------------------------------------------
// Truncation policy
// ---------------------------------------------------------------------------

/// Either a fixed number of product factors, or adaptive truncation to a
/// relative tolerance with a term budget.
class truncation_spec {
public:
    enum class kind { fixed, adaptive };

    static truncation_spec fixed_terms(std::int64_t i) {
        if (i < 1)
            throw param_error("fixed_terms requires i >= 1");
        truncation_spec t;
        t.kind_ = kind::fixed;
        t.terms_ = i;
        return t;
    }

    static truncation_spec adaptive(double tol,
                                    std::int64_t max_terms = 20'000'000) {
        if (!(tol > 0.0) || !(tol < 1.0))
            throw param_error("adaptive tolerance must lie in (0, 1)");
        if (max_terms < 16)
            throw param_error("adaptive max_terms must be >= 16");
        truncation_spec t;
        t.kind_ = kind::adaptive;
        t.tol_ = tol;
        t.max_terms_ = max_terms;
        return t;
    }

    kind mode() const noexcept { return kind_; }
    std::int64_t terms() const noexcept { return terms_; }
    double tol() const noexcept { return tol_; }
    std::int64_t max_terms() const noexcept { return max_terms_; }

private:
    truncation_spec() = default;
    kind kind_ = kind::adaptive;
    std::int64_t terms_ = 0;
    double tol_ = 1e-10;
    std::int64_t max_terms_ = 20'000'000;
};

// ---------------------------------------------------------------------------
// Alpha resolution
// ---------------------------------------------------------------------------

/// Resolves a strategy to a concrete alpha > 0 for the given problem.
inline double resolve_alpha(alpha_strategy strategy, series_params params,
                            double n) {
    detail::require_finite_params(params);
    switch (strategy.mode()) {
        case alpha_strategy::kind::default_a:
            return params.a;
        case alpha_strategy::kind::accelerated: {
            const double alpha = params.a + (n - 1.0) * params.b / 2.0;
            return alpha > 0.0 ? alpha : params.a;
        }
        case alpha_strategy::kind::custom: {
            const double alpha = strategy.custom_value();
            if (!(alpha > 0.0))
                throw param_error("custom alpha must be > 0");
            return alpha;
        }
    }
    throw param_error("unknown alpha strategy");
}

// ---------------------------------------------------------------------------
// Product factors
// ---------------------------------------------------------------------------

/// Natural log of the k-th merged product factor,
/// ln[(a+kb)/(a+(n+k)b)] + n*ln[(alpha+(k+1)b)/(alpha+kb)].
/// Computed through log1p so the result keeps full relative accuracy even
/// when the factor is within 1e-12 of unity.
inline double log_factor(series_params params, double n, double alpha,
                         std::int64_t k) {
    detail::require_finite_params(params);
    const double kd = static_cast<double>(k);
    const double num = params.a + kd * params.b;
    const double den = params.a + (n + kd) * params.b;
    const double tail_lo = alpha + kd * params.b;
    const double tail_hi = alpha + (kd + 1.0) * params.b;
    if (!(num > 0.0) || !(den > 0.0) || !(tail_lo > 0.0) || !(tail_hi > 0.0))
        throw param_error("log_factor requires all four inner quantities > 0");
    return n * std::log1p(params.b / tail_lo) - std::log1p(n * params.b / num);
}

/// Finite product of i leading ratio factors times the tail power:
/// prod_{k=0}^{i-1} (a+kb)/(a+(n+k)b) * (alpha+ib)^n.
/// Algebraically identical to exp(n*ln(alpha) + sum_{k<i} log_factor(k)).
inline double partial_product(series_params params, double n, double alpha,
                              std::int64_t i) {
    detail::require_finite_params(params);
    if (i < 1)
        throw param_error("partial_product requires i >= 1");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw param_error("partial_product requires alpha > 0");
    if (!(params.a + n * params.b > 0.0))
        throw param_error("partial_product requires a + n*b > 0");
    detail::neumaier_sum log_sum;
    for (std::int64_t k = 0; k < i; ++k)
        log_sum.add(-std::log1p(n * params.b /
                                (params.a + static_cast<double>(k) * params.b)));
    const double tail = n * std::log(alpha + static_cast<double>(i) * params.b);
    return std::exp(log_sum.value() + tail);
}

// ---------------------------------------------------------------------------
// Adaptive truncation engine
// ---------------------------------------------------------------------------

namespace detail {

struct log_product_result {
    double log_value = 0.0;    // accumulated log, tail correction included
    std::int64_t terms = 0;    // factors actually summed
    double err_estimate = 0.0; // relative error bound after correction
};

// Hurwitz-zeta tails: sum_{j >= x} j^-2 and j^-3 for moderate-to-large x.
inline double zeta2_tail(double x) noexcept {
    const double ix = 1.0 / x;
    return ix + 0.5 * ix * ix + ix * ix * ix / 6.0
           - ix * ix * ix * ix * ix / 30.0;
}

inline double zeta3_tail(double x) noexcept {
    const double ix = 1.0 / x;
    const double ix2 = ix * ix;
    return 0.5 * ix2 + 0.5 * ix2 * ix + 0.25 * ix2 * ix2
           - ix2 * ix2 * ix2 / 12.0;
}

/**
 * Sums log factors lf(0), lf(1), ... and closes the sum with a fitted tail.
 *
 * At every power-of-two index k >= 16 the remainder is modeled as
 * lf(j) ~ C/j^2 + D/j^3, with C and D solved from lf at k and at the previous
 * checkpoint k/2, and a corrected estimate V(k) = sum + C*zeta2 + D*zeta3 is
 * formed.  The iteration stops once three consecutive corrected estimates
 * agree pairwise within tol/2, returning the last of them; the last observed
 * gap (plus a rounding floor) is the reported error bound.
 *
 * Stopping on the Cauchy behavior of the corrected sequence, rather than on
 * the size of single factors, is what keeps the term count manageable: the
 * correction removes the C/k leading remainder, so the estimates converge
 * like 1/k^3 while raw factors only shrink like 1/k^2.
 */
template <class LF>
log_product_result adaptive_log_product(LF&& lf, double tol,
                                        std::int64_t max_terms) {
    neumaier_sum sum;
    const double half_tol = 0.5 * tol;

    std::int64_t prev_cp = 0;
    double lf_prev_cp = 0.0;
    double v1 = 0.0, v0 = 0.0; // last two corrected estimates
    int history = 0;

    for (std::int64_t k = 0; k < max_terms; ++k) {
        const double cur = lf(k);
        sum.add(cur);
        if (k < 16 || (k & (k - 1)) != 0)
            continue;

        const double kd = static_cast<double>(k);
        double tail = kd * cur; // single-power fallback
        if (prev_cp >= 16) {
            const double k0 = static_cast<double>(prev_cp);
            const double u0 = k0 * k0 * lf_prev_cp;
            const double u1 = kd * kd * cur;
            const double d = (u0 - u1) / (1.0 / k0 - 1.0 / kd);
            const double c = u1 - d / kd;
            const double fitted =
                c * zeta2_tail(kd + 1.0) + d * zeta3_tail(kd + 1.0);
            if (std::isfinite(fitted) &&
                std::abs(fitted) <= 4.0 * std::abs(kd * cur) + 1e-300)
                tail = fitted;
        }
        const double v = sum.value() + tail;
        if (history >= 2 && std::abs(v - v1) <= half_tol &&
            std::abs(v1 - v0) <= half_tol) {
            log_product_result r;
            r.log_value = v;
            r.terms = k + 1;
            r.err_estimate = std::abs(v - v1) +
                             8.0 * std::numeric_limits<double>::epsilon() *
                                 (1.0 + std::abs(v));
            return r;
        }
        v0 = v1;
        v1 = v;
        ++history;
        prev_cp = k;
        lf_prev_cp = cur;
    }
    throw no_convergence_error(
        "log product did not meet tolerance within max_terms");
}

/// Plain truncation after i factors; no tail correction.  The reported error
/// bound is |i * lf(i)|, the naive estimate of the un-summed remainder.
template <class LF>
log_product_result fixed_log_product(LF&& lf, std::int64_t i) {
    neumaier_sum sum;
    for (std::int64_t k = 0; k < i; ++k)
        sum.add(lf(k));
    log_product_result r;
    r.log_value = sum.value();
    r.terms = i;
    r.err_estimate = std::abs(static_cast<double>(i) * lf(i));
    return r;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Product-route evaluation
// ---------------------------------------------------------------------------

/// Evaluates the interpolated term by the merged infinite product.
/// Adaptive mode meets `trunc.tol()` in relative terms; fixed mode exposes
/// the classical finite approximations exactly as written, so
/// eval_product(fixed_terms(i)) == partial_product(..., i) up to roundoff.
inline eval_result eval_product(const eval_problem& problem,
                                alpha_strategy strategy,
                                truncation_spec trunc) {
    const series_params p = problem.params();
    const double n = problem.n();
    const double alpha = resolve_alpha(strategy, p, n);

    if (n == 0.0)
        return {1.0, eval_method::product, 0, 0.0, false};

    const auto lf = [&](std::int64_t k) noexcept {
        const double kd = static_cast<double>(k);
        return n * std::log1p(p.b / (alpha + kd * p.b)) -
               std::log1p(n * p.b / (p.a + kd * p.b));
    };

    detail::log_product_result lp;
    if (trunc.mode() == truncation_spec::kind::adaptive)
        lp = detail::adaptive_log_product(lf, trunc.tol(), trunc.max_terms());
    else
        lp = detail::fixed_log_product(lf, trunc.terms());

    const double value = std::exp(n * std::log(alpha) + lp.log_value);
    return {value, eval_method::product, lp.terms, lp.err_estimate, false};
}

} // namespace hyperterm
