#include <doctest.h>

#include <cmath>
#include <random>

#include "kgo/error.hpp"
#include "kgo/params.hpp"

using namespace kgo;

namespace {

Scenario cornell(double alpha, double m, double w, double a, double b)
{
    Scenario sc;
    sc.kind = ScenarioKind::cornell;
    sc.spacetime.alpha = alpha;
    sc.particle = {m, w};
    sc.cornell = {a, b};
    return sc;
}

Scenario pdm(double alpha, double m, double w, double xi, double kc)
{
    Scenario sc;
    sc.kind = ScenarioKind::pdm_linear;
    sc.spacetime.alpha = alpha;
    sc.particle = {m, w};
    sc.linear = {xi};
    sc.pdm = {kc};
    return sc;
}

} // namespace

TEST_CASE("cornell reduction on a Pythagorean triple")
{
    const auto r = reduce(cornell(1, 1, 1, 4, 0), 3.0);
    CHECK(r.freq == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(r.b_heun == 0.0);
}

TEST_CASE("cornell root index with m Omega B = 1")
{
    const auto r = reduce(cornell(0.3, 1, 1, 1, 1), 2.0);
    CHECK(r.root_index == doctest::Approx(1.0));
    CHECK(r.exponent == doctest::Approx(1.0));
    CHECK(r.a_heun == r.root_index);
}

TEST_CASE("cornell degree-zero condition at the Minkowski energy")
{
    const auto r = reduce(cornell(0, 1, 1, 1, 0), std::sqrt(5.0));
    CHECK(std::abs(r.c_heun - r.a_heun - 2.0) < 1e-14);
}

TEST_CASE("pdm with kc = 0 matches cornell with B = 0 field by field")
{
    std::mt19937_64 rng(20261014);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double alpha = u(rng) - 0.1, m = u(rng), w = u(rng), a = u(rng), e = 3.0 * u(rng);
        Scenario c = cornell(alpha, m, w, a, 0);
        Scenario p = pdm(alpha, m, w, a, 0);
        c.qn = p.qn = {i % 4, u(rng) - 1.0, u(rng)};
        const auto rc = reduce(c, e);
        const auto rp = reduce(p, e);
        CHECK(rc.freq == doctest::Approx(rp.freq).epsilon(1e-14));
        CHECK(rc.beta0 == doctest::Approx(rp.beta0).epsilon(1e-14));
        CHECK(rc.b_heun == doctest::Approx(rp.b_heun).epsilon(1e-14));
        CHECK(rc.exponent == doctest::Approx(rp.exponent).epsilon(1e-14));
        CHECK(rc.c_heun == doctest::Approx(rp.c_heun).epsilon(1e-13));
        CHECK(rc.d_heun == rp.d_heun);
    }
}

TEST_CASE("pdm root index and Minkowski frequency")
{
    const auto r = reduce(pdm(0.7, 1, 1, 1, 1), 2.0);
    CHECK(r.root_index == doctest::Approx(std::sqrt(5.0)));
    CHECK(r.exponent == doctest::Approx(0.5 * (1.0 + std::sqrt(5.0))));
    const auto m = reduce(pdm(0, 1, 1, 1, 0), 12.3);
    CHECK(m.freq == 1.0);
    CHECK(m.b_heun == 0.0);
}

TEST_CASE("effective potential")
{
    CHECK(effective_potential(cornell(0, 1, 1, 1, 1), 2.0, 1.0) == doctest::Approx(3.0));
    for (double x : {0.1, 1.0, 7.0}) {
        CHECK(effective_potential(cornell(0, 1, 0, 0, 0), 2.0, x) == 0.0);
    }
    CHECK(effective_potential(pdm(0, 1, 1, 1, 1), 2.0, 1.0) == doctest::Approx(7.0));
    CHECK_THROWS_AS(effective_potential(pdm(0, 1, 1, 1, 1), 2.0, 0.0), Error);
}

TEST_CASE("validation")
{
    CHECK_THROWS_AS(cornell(-1, 1, 1, 1, 0).validate(), Error);
    CHECK_THROWS_AS(cornell(0, 0, 1, 1, 0).validate(), Error);
    CHECK_THROWS_AS(cornell(0, 1, 1, 0, 0).validate(), Error);
    CHECK_THROWS_AS(pdm(0, 1, 1, 0, 0).validate(), Error);
    CHECK_THROWS_AS(pdm(0, 1, 1, 1, -0.1).validate(), Error);
    CHECK_NOTHROW(cornell(0, 1, 0, 0, 0).validate());
    try {
        reduce(cornell(0, 1, 1, 1, 0.5), 1.0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::degenerate_indicial);
    }
    try {
        reduce(cornell(0, 1, 1, 0, 1), 1.0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::zero_frequency);
    }
}

TEST_CASE("root index identity for cornell")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double m = std::abs(u(rng)) + 0.01, w = std::abs(u(rng)), b = u(rng);
        const double x = m * w * b;
        const double xi = std::abs(2.0 * x - 1.0);
        if (xi <= 1e-6) {
            continue;
        }
        CHECK(std::sqrt(cornell_discriminant(m, w, b)) == doctest::Approx(xi).epsilon(1e-12));
    }
}

TEST_CASE("parameter selectors round-trip")
{
    for (Param p : {Param::alpha, Param::omega_osc, Param::a_lin, Param::b_coul, Param::xi, Param::kc,
                    Param::mass, Param::l, Param::k}) {
        CHECK(param_from_string(to_string(p)) == p);
        const Scenario sc = with(pdm(0, 1, 1, 1, 0), p, 0.25);
        CHECK(get(sc, p) == 0.25);
    }
    CHECK(param_from_string("Omega") == Param::omega_osc);
    CHECK_THROWS_AS(param_from_string("nope"), Error);
}
