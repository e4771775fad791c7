#pragma once

/**
 * @file core.hpp
 * @brief Domain types and exact integer-index evaluation for rising-factorial
 *        progressions a, a(a+b), a(a+b)(a+2b), ...
 *
 * The k-th term of the progression is the product of k factors in arithmetic
 * progression, a(a+b)...(a+(k-1)b).  Everything in this library evaluates the
 * interpolated term at an arbitrary real index n; this header holds the shared
 * value types, the validation entry point, and the two operations that are
 * exact for integer data: the k-factor product and the index shift
 * term(n+1) = (a+nb) * term(n).
 */

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

namespace hyperterm {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Invalid parameters or preconditions (non-finite input, a <= 0, b <= 0, ...).
struct param_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The requested index lies at or beyond a pole of the interpolated term
/// (a + n*b <= 0), where the term is infinite.
struct divergent_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// An adaptive scheme exhausted its budget before meeting its tolerance.
struct no_convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An integrand produced a non-finite value away from the interval endpoints.
struct integrand_domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A result left the representable range even in log space.
struct overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Value types
// ---------------------------------------------------------------------------

/// First term `a` and common difference `b` of the factor progression.
/// Valid parameter sets have a > 0 and b > 0; `validate` enforces this.
struct series_params {
    double a = 1.0;
    double b = 1.0;
};

/// Marker returned by `validate` when the term at the requested index is
/// infinite (a + n*b <= 0).  A legitimate mathematical outcome, not an error.
struct divergent_marker {};

/// A validated (params, index) pair.  Construction is only possible through
/// `validate`, so a live eval_problem always satisfies a + n*b > 0, and hence
/// a + (n+k)*b > 0 for every integer k >= 0.
class eval_problem {
public:
    series_params params() const noexcept { return params_; }
    double n() const noexcept { return n_; }

private:
    eval_problem(series_params p, double n) noexcept : params_(p), n_(n) {}
    friend std::variant<eval_problem, divergent_marker>
    validate(series_params, double);

    series_params params_;
    double n_;
};

using validation = std::variant<eval_problem, divergent_marker>;

/// How the free tail parameter alpha of the product representation is chosen.
/// The limit value is independent of alpha; the truncation error is not.
class alpha_strategy {
public:
    enum class kind { default_a, accelerated, custom };

    /// alpha = a (the classical choice).
    static alpha_strategy default_a() noexcept { return {kind::default_a, 0.0}; }

    /// alpha = a + (n-1)*b/2, which cancels the 1/k^2 term of the log factors
    /// and makes them decay like 1/k^3.  Falls back to alpha = a whenever the
    /// formula would give a non-positive value.
    static alpha_strategy accelerated() noexcept { return {kind::accelerated, 0.0}; }

    /// A caller-supplied alpha > 0.
    static alpha_strategy custom(double alpha) {
        if (!std::isfinite(alpha) || alpha <= 0.0)
            throw param_error("custom alpha must be finite and > 0");
        return {kind::custom, alpha};
    }

    kind mode() const noexcept { return kind_; }
    double custom_value() const noexcept { return value_; }

private:
    alpha_strategy(kind k, double v) noexcept : kind_(k), value_(v) {}
    kind kind_;
    double value_;
};

/// Which evaluation route produced a result.
enum class eval_method { product, integral, oracle };

inline const char* to_string(eval_method m) noexcept {
    switch (m) {
        case eval_method::product: return "product";
        case eval_method::integral: return "integral";
        case eval_method::oracle: return "oracle";
    }
    return "?";
}

/// Outcome of an evaluation.  `effort` counts product terms or quadrature
/// levels depending on the route; `error_estimate` is a relative error bound.
/// When `divergent` is set the value is the +infinity indicator and
/// `error_estimate` carries no information.
struct eval_result {
    double value = 0.0;
    eval_method method = eval_method::product;
    std::int64_t effort = 0;
    double error_estimate = 0.0;
    bool divergent = false;

    static eval_result divergent_result(eval_method m) noexcept {
        return {std::numeric_limits<double>::infinity(), m, 0, 0.0, true};
    }
};

// ---------------------------------------------------------------------------
// Compensated summation
// ---------------------------------------------------------------------------

namespace detail {

/// Neumaier-compensated accumulator.  Long log-space products feed millions
/// of O(1/k^2) increments through this; naive summation would lose digits.
struct neumaier_sum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) noexcept {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    double value() const noexcept { return sum + comp; }
};

inline void require_finite_params(const series_params& p) {
    if (!std::isfinite(p.a) || !std::isfinite(p.b) || p.a <= 0.0 || p.b <= 0.0)
        throw param_error("series parameters require finite a > 0 and b > 0");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Classifies (params, n).  Returns an eval_problem when the interpolated term
/// is finite (a + n*b > 0), a divergent_marker when the index sits at or past
/// the pole (a + n*b <= 0), and throws param_error for invalid parameters or
/// a non-finite index.  Every finite input lands in exactly one of the three.
inline validation validate(series_params params, double n) {
    detail::require_finite_params(params);
    if (!std::isfinite(n))
        throw param_error("index n must be finite");
    if (params.a + n * params.b <= 0.0)
        return divergent_marker{};
    return eval_problem(params, n);
}

/// True when `v` holds the divergent marker.
inline bool is_divergent(const validation& v) noexcept {
    return std::holds_alternative<divergent_marker>(v);
}

/// Product of the first k factors, a(a+b)...(a+(k-1)b); 1 for k = 0.
/// Accumulated as a compensated sum of logarithms and exponentiated once, so
/// intermediate magnitudes cannot overflow even for very large k.
inline double direct_term(series_params params, std::int64_t k) {
    detail::require_finite_params(params);
    if (k < 0)
        throw param_error("direct_term requires k >= 0");
    detail::neumaier_sum log_sum;
    for (std::int64_t j = 0; j < k; ++j)
        log_sum.add(std::log(params.a + static_cast<double>(j) * params.b));
    const double s = log_sum.value();
    if (!std::isfinite(s))
        throw overflow_error("direct_term overflowed in log space");
    return std::exp(s);
}

/// Shifts a known value term(n) up by m integer steps:
/// term(n+m) = term(n) * prod_{j=0}^{m-1} (a + (n+j)b).
inline double shift(series_params params, double n, std::int64_t m,
                    double value_at_n) {
    detail::require_finite_params(params);
    if (m < 0)
        throw param_error("shift requires m >= 0");
    if (!std::isfinite(n) || !std::isfinite(value_at_n))
        throw param_error("shift requires finite n and value");
    double v = value_at_n;
    for (std::int64_t j = 0; j < m; ++j) {
        const double factor = params.a + (n + static_cast<double>(j)) * params.b;
        if (factor <= 0.0)
            throw param_error("shift crossed a non-positive factor a+(n+j)b");
        v *= factor;
    }
    return v;
}

} // namespace hyperterm
