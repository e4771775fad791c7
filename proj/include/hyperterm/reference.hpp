#pragma once

/**
 * @file reference.hpp
 * @brief Closed-form gamma oracle and the quotient-series general term.
 *
 * The interpolated term has the closed form
 *
 *   term(n) = b^n * G(a/b + n) / G(a/b)
 *
 * with G the gamma function.  G is implemented here from scratch (Lanczos
 * approximation) rather than taken from a math library, so the oracle used to
 * cross-check the product and integral routes is fully auditable.
 *
 * The quotient of two progressions sharing the difference b, with first terms
 * a and c, interpolates without any free tail parameter: alpha^n cancels
 * between numerator and denominator, leaving the product of factors
 * [(a+kb)(c+(n+k)b)] / [(a+(n+k)b)(c+kb)].  For 0 < n < 1 the same quotient
 * is the ratio pq(c, nb, b) / pq(a, nb, b) of two Beta-type integrals.
 */

#include <array>
#include <cmath>
#include <cstdint>

#include "core.hpp"
#include "integral.hpp"
#include "product.hpp"

namespace hyperterm {

namespace detail {

// Lanczos g = 7, 9-term coefficient set (Godfrey's values, the standard
// double-precision choice); relative error below ~1e-13 for arguments >= 1/2.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coeff = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

inline constexpr double half_log_two_pi = 0.91893853320467274178032973640562;

} // namespace detail

/// ln G(x) for x > 0.  Arguments below 1/2 are lifted with
/// ln G(x) = ln G(x+1) - ln x before applying the Lanczos sum.
inline double lanczos_log_gamma(double x) {
    if (!std::isfinite(x) || x <= 0.0)
        throw param_error("lanczos_log_gamma requires finite x > 0");
    double lift = 0.0;
    while (x < 0.5) {
        lift -= std::log(x);
        x += 1.0;
    }
    const double z = x - 1.0;
    double series = detail::lanczos_coeff[0];
    for (std::size_t i = 1; i < detail::lanczos_coeff.size(); ++i)
        series += detail::lanczos_coeff[i] / (z + static_cast<double>(i));
    const double t = z + detail::lanczos_g + 0.5;
    return lift + detail::half_log_two_pi + (z + 0.5) * std::log(t) - t +
           std::log(series);
}

/// G(x) for x > 0.
inline double lanczos_gamma(double x) {
    return std::exp(lanczos_log_gamma(x));
}

/// Oracle value of the interpolated term, b^n * G(a/b + n) / G(a/b).
/// Throws divergent_error at or past the pole (a + n*b <= 0).
inline double gamma_oracle(series_params params, double n) {
    detail::require_finite_params(params);
    if (!std::isfinite(n))
        throw param_error("gamma_oracle requires finite n");
    if (params.a + n * params.b <= 0.0)
        throw divergent_error("term is infinite where a + n*b <= 0");
    const double r = params.a / params.b;
    return std::exp(n * std::log(params.b) + lanczos_log_gamma(r + n) -
                    lanczos_log_gamma(r));
}

/// Oracle route packaged as an eval_result (effort 0; the error estimate is
/// the approximation's documented relative bound).
inline eval_result oracle_eval(series_params params, double n) {
    return {gamma_oracle(params, n), eval_method::oracle, 0, 1e-13, false};
}

// ---------------------------------------------------------------------------
// Quotient series
// ---------------------------------------------------------------------------

/// Two progressions with first terms a and c and shared difference b; the
/// quotient series has k-th term [a(a+b)...] / [c(c+b)...] and is
/// interpolated at index n.
struct quotient_params {
    double a = 1.0;
    double c = 1.0;
    double b = 1.0;
    double n = 0.0;
};

namespace detail {

inline void require_quotient_params(const quotient_params& q) {
    if (!std::isfinite(q.a) || !std::isfinite(q.c) || !std::isfinite(q.b) ||
        !std::isfinite(q.n) || q.a <= 0.0 || q.c <= 0.0 || q.b <= 0.0)
        throw param_error("quotient requires finite a > 0, c > 0, b > 0");
    if (q.a + q.n * q.b <= 0.0 || q.c + q.n * q.b <= 0.0)
        throw param_error("quotient requires a + n*b > 0 and c + n*b > 0");
}

} // namespace detail

/// Quotient term by the alpha-free merged product.  Same adaptive truncation
/// and fitted tail correction as eval_product.
inline double quotient_term_product(quotient_params qp, truncation_spec trunc) {
    detail::require_quotient_params(qp);
    if (qp.n == 0.0)
        return 1.0;
    const auto lf = [&](std::int64_t k) noexcept {
        const double kd = static_cast<double>(k);
        // ln[(a+kb)/(a+(n+k)b)] + ln[(c+(n+k)b)/(c+kb)]
        return std::log1p(qp.n * qp.b / (qp.c + kd * qp.b)) -
               std::log1p(qp.n * qp.b / (qp.a + kd * qp.b));
    };
    detail::log_product_result lp;
    if (trunc.mode() == truncation_spec::kind::adaptive)
        lp = detail::adaptive_log_product(lf, trunc.tol(), trunc.max_terms());
    else
        lp = detail::fixed_log_product(lf, trunc.terms());
    return std::exp(lp.log_value);
}

/// Quotient term by the integral route, pq(c, n*b, b) / pq(a, n*b, b).
/// Only 0 < n < 1 gives an integrable weight (1 - x^b)^(n-1); other indices
/// are rejected and served by the product route instead.
inline double quotient_term_integral(quotient_params qp,
                                     quadrature_spec quad = {}) {
    detail::require_quotient_params(qp);
    if (!(qp.n > 0.0) || !(qp.n < 1.0))
        throw param_error("quotient_term_integral requires 0 < n < 1");
    const double m = qp.n * qp.b;
    const double num = pq_integral({qp.c, m, qp.b}, quad);
    const double den = pq_integral({qp.a, m, qp.b}, quad);
    return num / den;
}

} // namespace hyperterm
