#include <doctest.h>

#include <cmath>
#include <random>

#include "kgo/error.hpp"
#include "kgo/heun.hpp"

using namespace kgo;

namespace {

// Left-hand side of the Heun equation for a truncated or long series.
double ode_residual(const HeunSeries& hs, double z)
{
    const HeunParams& p = hs.params;
    const HeunValue h = evaluate_derivatives(hs, z, 1e-14);
    return z * h.second + (1.0 + p.a - p.b * z - 2.0 * z * z) * h.first +
           ((p.c - p.a - 2.0) * z - 0.5 * (p.d + p.b * (1.0 + p.a))) * h.value;
}

} // namespace

TEST_CASE("degree-zero series")
{
    const HeunSeries hs = series_coefficients({1, 0, 3, 0}, 6);
    for (std::size_t j = 1; j < hs.coeffs.size(); ++j) {
        CHECK(hs.coeffs[j] == 0.0);
    }
    CHECK(hs.coeffs[0] == 1.0);
    REQUIRE(hs.truncated_at);
    CHECK(*hs.truncated_at == 0);
    CHECK(evaluate(hs, 7.3, 1e-12) == 1.0);
    CHECK(evaluate(hs, 0.0, 1e-12) == 1.0);
}

TEST_CASE("first coefficient is b/2 when d = 0")
{
    for (double c : {-1.0, 3.0, 11.5}) {
        CHECK(series_coefficients({1, 2, c, 0}, 4).coeffs[1] == doctest::Approx(1.0));
    }
}

TEST_CASE("series continues when only the degree condition holds")
{
    const HeunSeries hs = series_coefficients({1, 0, 5, 0}, 8);
    CHECK(hs.coeffs[1] == 0.0);
    // (1 + 1)(1 + 2) A_2 = (0 - 2) A_0
    CHECK(hs.coeffs[2] == doctest::Approx(-1.0 / 3.0));
    CHECK_FALSE(hs.truncated_at.has_value());
    const HeunSeries long_series = series_for({1, 0, 5, 0}, 1.0, 1e-14);
    for (double z : {0.1, 0.5, 0.9}) {
        CHECK(std::abs(ode_residual(long_series, z)) < 1e-10);
    }
}

TEST_CASE("evaluate against a brute-force partial sum")
{
    const HeunParams hp{1, 2, 3, 0};
    const HeunSeries brute = series_coefficients(hp, 200);
    double sum = 0.0, zp = 1.0;
    for (double a : brute.coeffs) {
        sum += a * zp;
        zp *= 0.1;
    }
    const HeunSeries hs = series_for(hp, 0.1, 1e-12);
    CHECK(std::abs(evaluate(hs, 0.1, 1e-12) - sum) < 1e-12);
}

TEST_CASE("ODE residual of random series")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const HeunParams hp{std::abs(u(rng)), u(rng), 3.0 * u(rng), u(rng)};
        const HeunSeries hs = series_for(hp, 1.5, 1e-14);
        for (double z : {0.2, 0.8, 1.5}) {
            const HeunValue h = evaluate_derivatives(hs, z, 1e-14);
            const double scale = std::abs(z * h.second) + std::abs(h.first) * (1 + 2 * z * z + 4) +
                                 std::abs(h.value) * 10.0;
            CHECK(std::abs(ode_residual(hs, z)) <= 1e-11 * scale);
        }
    }
}

TEST_CASE("evaluate refuses a short non-terminating series far out")
{
    const HeunSeries hs = series_coefficients({1, 0, 5, 0}, 8);
    CHECK_THROWS_AS(evaluate(hs, 5.0, 1e-12), Error);
}

TEST_CASE("series needs 1 + a > 0")
{
    CHECK_THROWS_AS(series_coefficients({-1.5, 0, 0, 0}, 4), Error);
}

TEST_CASE("truncation residual")
{
    auto r = truncation_residual({1, 0, 3, 0}, 0);
    CHECK(r.coeff == 0.0);
    CHECK(r.degree == 0.0);
    r = truncation_residual({1, 2, 3, 0}, 0);
    CHECK(r.coeff == doctest::Approx(1.0));
    CHECK(r.degree == 0.0);
    r = truncation_residual({1, 0, 4, 0}, 0);
    CHECK(r.coeff == 0.0);
    CHECK(r.degree == doctest::Approx(1.0));
}

TEST_CASE("continuant small cases")
{
    const double eta = 0.5 * (1.0 + std::sqrt(5.0));
    CHECK(continuant({1, 0.7, 3, 0}, 0) == doctest::Approx(-0.7 * 1.0));
    CHECK(continuant({std::sqrt(5.0), 0.3, 0, 0}, 0) == doctest::Approx(-0.3 * eta));
    CHECK(continuant({std::sqrt(5.0), 2, 0, 4}, 0) == doctest::Approx(-(3.0 + std::sqrt(5.0))));
    CHECK(continuant({1, 0, 3, 0}, 0) == 0.0);
}

TEST_CASE("continuant changes sign between consecutive roots")
{
    for (int n = 1; n <= 5; ++n) {
        const double a = 0.8, d = 0.3;
        const auto roots = continuant_roots(a, d, n);
        REQUIRE(roots.size() == static_cast<std::size_t>(n + 1));
        for (std::size_t i = 0; i < roots.size(); ++i) {
            double gap = 1.0;
            if (i > 0) gap = std::min(gap, roots[i] - roots[i - 1]);
            if (i + 1 < roots.size()) gap = std::min(gap, roots[i + 1] - roots[i]);
            const double lo = continuant({a, roots[i] - 0.25 * gap, a + 2 + 2 * n, d}, n);
            const double hi = continuant({a, roots[i] + 0.25 * gap, a + 2 + 2 * n, d}, n);
            CHECK((lo < 0.0) != (hi < 0.0));
        }
        for (double b : roots) {
            const auto hs = series_coefficients({a, b, a + 2 + 2 * n, d}, n + 12);
            REQUIRE(hs.truncated_at);
            CHECK(*hs.truncated_at == n);
        }
    }
}
