#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <hyperterm/integral.hpp>
#include <hyperterm/reference.hpp>

using namespace hyperterm;

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double factorial_half = 0.88622692545275801365;   // sqrt(pi)/2
constexpr double odd_half = 0.79788456080286535588;      // sqrt(2/pi)
constexpr double gamma_4_3 = 0.89297951156924921122;     // G(4/3)
constexpr double gamma_7_3 = 1.19063934875899894829;     // G(7/3)
constexpr double big_p = 3.62759872846843570119;         // 2 pi / sqrt(3)
constexpr double big_p_prime = 1.20919957615614523373;   // 2 pi / (3 sqrt(3))
constexpr double q_prime = 2.05339021793917718103;       // G(2/3)^2 / G(4/3)

double rel(double x, double want) { return std::abs(x - want) / std::abs(want); }

} // namespace

TEST_CASE("pq_integral basic values") {
    CHECK(std::abs(pq_integral({2, 1, 2}) - 1.0) < 1e-12);
    CHECK(std::abs(pq_integral({3, 1, 2}) - pi / 4.0) < 1e-12);
    CHECK(std::abs(pq_integral({1, 1, 1}) - 1.0) < 1e-12); // integrand == 1
    CHECK_THROWS_AS(pq_integral({0, 1, 1}), param_error);
    CHECK_THROWS_AS(pq_integral({1, -1, 1}), param_error);
    CHECK_THROWS_AS(pq_integral({1, 1, 0}), param_error);
}

TEST_CASE("third-index integrals hit their closed forms") {
    CHECK(std::abs(pq_integral({2.0 / 3.0, 1.0 / 3.0, 1.0}) - big_p) < 1e-12);
    CHECK(std::abs(pq_integral({4.0 / 3.0, 2.0 / 3.0, 1.0}) - big_p_prime) <
          1e-12);
    CHECK(std::abs(pq_integral({1.0, 1.0 / 3.0, 1.0}) - 3.0) < 1e-12);
    // the fourth integral has no closed form; cross-check the gamma value
    CHECK(std::abs(pq_integral({2.0 / 3.0, 2.0 / 3.0, 1.0}) - q_prime) < 1e-12);
}

TEST_CASE("substituting x = y^3 leaves the four third-index integrals fixed") {
    const auto y_form = [](double power_y, double w) {
        // 3 integral_0^1 y^power (1-y^3)^w dy with 1-y^3 = yc (1+y+y^2)
        return tanh_sinh([=](double y, double yc) {
            const double one_minus_y3 = yc * (1.0 + y + y * y);
            return 3.0 * std::pow(y, power_y) * std::pow(one_minus_y3, w);
        }).value;
    };
    CHECK(std::abs(pq_integral({2.0 / 3.0, 1.0 / 3.0, 1.0}) -
                   y_form(1.0, -2.0 / 3.0)) < 1e-10);
    CHECK(std::abs(pq_integral({1.0, 1.0 / 3.0, 1.0}) -
                   y_form(2.0, -2.0 / 3.0)) < 1e-10);
    CHECK(std::abs(pq_integral({4.0 / 3.0, 2.0 / 3.0, 1.0}) -
                   y_form(3.0, -1.0 / 3.0)) < 1e-10);
    CHECK(std::abs(pq_integral({2.0 / 3.0, 2.0 / 3.0, 1.0}) -
                   y_form(1.0, -1.0 / 3.0)) < 1e-10);
}

TEST_CASE("pq_ratio_product") {
    CHECK(pq_ratio_product(2.5, 2.5, 1.0, 0.7, 1000) == 1.0); // p = q, exact
    CHECK(rel(pq_ratio_product(3, 2, 1, 2, 1000000), pi / 4.0) < 1e-5);
    CHECK_THROWS_AS(pq_ratio_product(1, 1, 1, 1, 0), param_error);
    CHECK_THROWS_AS(pq_ratio_product(-1, 1, 1, 1, 10), param_error);
}

TEST_CASE("integral ratios match the truncated products on random data") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(0.2, 5.0);
    for (int i = 0; i < 5; ++i) {
        const double p = dist(rng), q = dist(rng), m = dist(rng), s = dist(rng);
        const double ratio = pq_integral({p, m, s}) / pq_integral({q, m, s});
        const double prod = pq_ratio_product(p, q, m, s, 1000000);
        CHECK(rel(ratio, prod) < 1e-4);
    }
}

TEST_CASE("eval_half") {
    const auto r1 = eval_half({1, 1});
    CHECK(rel(r1.value, factorial_half) < 1e-10);
    CHECK(r1.method == eval_method::integral);
    CHECK(r1.effort >= 1);

    CHECK(rel(eval_half({1, 2}).value, odd_half) < 1e-10);
    // G(5/2)/G(2) = (3/4) sqrt(pi)
    CHECK(rel(eval_half({2, 1}).value, 1.32934038817913702047) < 1e-10);
    CHECK_THROWS_AS(eval_half({-1, 1}), param_error);
}

TEST_CASE("eval_third") {
    CHECK(rel(eval_third({1, 1}).value, gamma_4_3) < 1e-10);
    CHECK(rel(eval_third({2, 1}).value, gamma_7_3) < 1e-10);
    // a <= b/3 puts the auxiliary exponent a-c at or below zero
    CHECK_THROWS_AS(eval_third({1, 3}), param_error);
    CHECK_THROWS_AS(eval_third({1, 4}), param_error);
}

TEST_CASE("integral and product routes agree across the parameter grid") {
    const auto t = truncation_spec::adaptive(1e-10);
    double worst_half = 0.0, worst_third = 0.0;
    for (double a : {0.5, 1.0, 2.0, 3.0})
        for (double b : {0.5, 1.0, 2.0, 3.0}) {
            const auto prob = std::get<eval_problem>(validate({a, b}, 0.5));
            const auto prod = eval_product(prob, alpha_strategy::default_a(), t);
            worst_half =
                std::max(worst_half, rel(eval_half({a, b}).value, prod.value));
            if (a > b / 3.0) {
                const auto prob3 =
                    std::get<eval_problem>(validate({a, b}, 1.0 / 3.0));
                const auto prod3 =
                    eval_product(prob3, alpha_strategy::default_a(), t);
                worst_third = std::max(
                    worst_third, rel(eval_third({a, b}).value, prod3.value));
            }
        }
    CHECK(worst_half < 1e-8);
    CHECK(worst_third < 1e-8);
}
