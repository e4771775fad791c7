#pragma once

/**
 * @file integral.hpp
 * @brief Beta-type integral routes for the half- and third-index terms.
 *
 * The workhorse is the two-parameter family
 *
 *   pq(p, m, s) = integral_0^1 x^(p-1) (1 - x^s)^(m/s - 1) dx,
 *
 * integrable for p > 0, m > 0, s > 0.  Ratios of two such integrals equal an
 * infinite product of rational factors (pq_ratio_product), and the special
 * indices reduce to them:
 *
 *   term(1/2)^2 = a * pq(2a+b, b, 2b) / pq(2a, b, 2b)
 *   term(1/3)^3 = a * [pq(a-c, c, 3c) / pq(a, c, 3c)]
 *                   * [pq(a+c, 2c, 3c) / pq(a-c, 2c, 3c)],   c = b/3.
 *
 * The third-index split requires a > c so that the auxiliary first term
 * f = a - c stays positive.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "core.hpp"
#include "quadrature.hpp"

namespace hyperterm {

/// Parameters of the integral pq(p, m, step); all three must be positive so
/// both endpoint singularities stay integrable.
struct pq_spec {
    double p = 1.0;
    double m = 1.0;
    double step = 1.0;
};

namespace detail {

inline void require_pq_spec(const pq_spec& s) {
    if (!std::isfinite(s.p) || !std::isfinite(s.m) || !std::isfinite(s.step) ||
        s.p <= 0.0 || s.m <= 0.0 || s.step <= 0.0)
        throw param_error("pq integral requires finite p > 0, m > 0, step > 0");
}

} // namespace detail

/// pq(p, m, step) with full convergence data.
/// The integrand is evaluated through logarithms: with lx = ln x taken from
/// log1p(-xc) near x = 1, the factor 1 - x^step is -expm1(step * lx), which
/// keeps full precision where naive powering of x would collapse to 0 or 1.
inline quad_result pq_integral_detailed(pq_spec spec, quadrature_spec quad = {}) {
    detail::require_pq_spec(spec);
    const double p1 = spec.p - 1.0;
    const double w = spec.m / spec.step - 1.0;
    const auto integrand = [&](double x, double xc) {
        const double lx = x <= 0.75 ? std::log(x) : std::log1p(-xc);
        const double one_minus_xs = -std::expm1(spec.step * lx);
        return std::exp(p1 * lx + w * std::log(one_minus_xs));
    };
    return tanh_sinh(integrand, quad);
}

/// pq(p, m, step) to within quad.tol.
inline double pq_integral(pq_spec spec, quadrature_spec quad = {}) {
    return pq_integral_detailed(spec, quad).value;
}

/// Truncated form of the infinite product equal to pq(p,m,s)/pq(q,m,s):
/// prod_{k=0}^{terms-1} [(q+ks)(m+p+ks)] / [(p+ks)(m+q+ks)].
/// Log-space, no tail correction: the truncation error decays like
/// m(q-p)/(s^2 * terms).
inline double pq_ratio_product(double p, double q, double m, double step,
                               std::int64_t terms) {
    if (terms < 1)
        throw param_error("pq_ratio_product requires terms >= 1");
    if (!(p > 0.0) || !(q > 0.0) || !(m > 0.0) || !(step > 0.0))
        throw param_error("pq_ratio_product requires positive p, q, m, step");
    detail::neumaier_sum log_sum;
    for (std::int64_t k = 0; k < terms; ++k) {
        const double ks = static_cast<double>(k) * step;
        // ln[(q+ks)/(p+ks)] + ln[(m+p+ks)/(m+q+ks)], cancellation-free.
        log_sum.add(std::log1p((q - p) / (p + ks)) +
                    std::log1p((p - q) / (m + q + ks)));
    }
    return std::exp(log_sum.value());
}

/// Half-index term by the integral route:
/// term(1/2) = sqrt(a * P / Q) with P = pq(2a+b, b, 2b), Q = pq(2a, b, 2b).
inline eval_result eval_half(series_params params, quadrature_spec quad = {}) {
    detail::require_finite_params(params);
    const double a = params.a;
    const double b = params.b;
    const quad_result P = pq_integral_detailed({2.0 * a + b, b, 2.0 * b}, quad);
    const quad_result Q = pq_integral_detailed({2.0 * a, b, 2.0 * b}, quad);
    const double value = std::sqrt(a * P.value / Q.value);
    const double rel_err =
        0.5 * (P.err / std::abs(P.value) + Q.err / std::abs(Q.value));
    return {value, eval_method::integral, std::max(P.levels, Q.levels),
            rel_err, false};
}

/// Third-index term by the integral route, using the two-pair split with
/// c = b/3 described above.  Requires a > b/3 so the auxiliary exponent
/// a - c stays positive; the region a <= b/3 is rejected rather than
/// continued analytically.
inline eval_result eval_third(series_params params, quadrature_spec quad = {}) {
    detail::require_finite_params(params);
    const double a = params.a;
    const double c = params.b / 3.0;
    if (!(a - c > 0.0))
        throw param_error("eval_third requires a > b/3");
    const double s = 3.0 * c;
    const quad_result P = pq_integral_detailed({a - c, c, s}, quad);
    const quad_result Q = pq_integral_detailed({a, c, s}, quad);
    const quad_result Pp = pq_integral_detailed({a + c, 2.0 * c, s}, quad);
    const quad_result Qp = pq_integral_detailed({a - c, 2.0 * c, s}, quad);
    const double value = std::cbrt(a * (P.value / Q.value) * (Pp.value / Qp.value));
    const double rel_err = (P.err / std::abs(P.value) + Q.err / std::abs(Q.value) +
                            Pp.err / std::abs(Pp.value) +
                            Qp.err / std::abs(Qp.value)) /
                           3.0;
    const int levels = std::max(std::max(P.levels, Q.levels),
                                std::max(Pp.levels, Qp.levels));
    return {value, eval_method::integral, levels, rel_err, false};
}

} // namespace hyperterm
