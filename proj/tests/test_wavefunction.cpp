#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "kgo/error.hpp"
#include "kgo/wavefunction.hpp"

using namespace kgo;

namespace {

Scenario worked()
{
    Scenario sc;
    sc.kind = ScenarioKind::cornell;
    sc.spacetime.alpha = 1;
    sc.particle = {1, 1};
    sc.cornell = {1, 0};
    return sc;
}

BoundState ground(const Scenario& sc)
{
    return solve_energy(sc, default_config(sc)).back();
}

double peak(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

TEST_CASE("ground state is the closed-form Gaussian")
{
    const Scenario sc = worked();
    const BoundState bs = ground(sc);
    const double w = bs.reduced.freq;
    const double eta = bs.reduced.exponent;
    CHECK(eta == doctest::Approx(1.0));
    const WaveTable wt = assemble(bs, sc, default_x_max(bs));
    std::size_t arg = 0;
    for (std::size_t i = 0; i < wt.psi.size(); ++i) {
        const double r = std::sqrt(w) * wt.xs[i];
        CHECK(wt.psi[i] == doctest::Approx(std::pow(r, eta) * std::exp(-0.5 * r * r)).epsilon(1e-12));
        if (wt.psi[i] > wt.psi[arg]) arg = i;
    }
    const double h = wt.xs[1] - wt.xs[0];
    CHECK(std::abs(wt.xs[arg] - std::sqrt(eta / w)) <= h);
    CHECK(wt.nodes == 0);
    CHECK(std::abs(wt.psi.back()) <= 1e-6 * peak(wt.psi));

    const RadialFunction psi(bs.reduced, bs.n, 1.0);
    CHECK(psi(1e-9) < 1e-8);
    CHECK(psi(0.0) == 0.0);
}

TEST_CASE("ground-state norm matches the gamma integral")
{
    Scenario sc = worked();
    sc.cornell.b_coul = 0.2; // eta != 1
    const BoundState bs = ground(sc);
    const double w = bs.reduced.freq;
    const double eta = bs.reduced.exponent;
    const WaveTable wt = assemble(bs, sc, default_x_max(bs));
    const double exact = std::tgamma(eta + 0.5) / (2.0 * std::sqrt(w));
    CHECK(norm_squared(wt) == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("normalize is idempotent and scale invariant")
{
    const Scenario sc = worked();
    const BoundState bs = ground(sc);
    const WaveTable once = normalize(assemble(bs, sc, default_x_max(bs), 2000));
    CHECK(norm_squared(once) == doctest::Approx(1.0).epsilon(1e-13));
    const WaveTable twice = normalize(once);
    for (std::size_t i = 0; i < once.psi.size(); ++i) {
        CHECK(std::abs(twice.psi[i] - once.psi[i]) <= 1e-14);
    }
    WaveTable scaled = assemble(bs, sc, default_x_max(bs), 2000);
    for (double& v : scaled.psi) v *= 7.0;
    const WaveTable back = normalize(scaled);
    for (std::size_t i = 0; i < once.psi.size(); ++i) {
        CHECK(back.psi[i] == doctest::Approx(once.psi[i]).epsilon(1e-13));
    }
    WaveTable zero = once;
    std::fill(zero.psi.begin(), zero.psi.end(), 0.0);
    CHECK_THROWS_AS(normalize(zero), Error);
}

TEST_CASE("node count")
{
    WaveTable wt;
    wt.psi = {0.0, 1.0, 2.0, 0.5, 1e-20, 3.0};
    CHECK(count_nodes(wt) == 0);
    wt.psi = {1.0, -1.0, 0.0, -2.0, 2.0};
    CHECK(count_nodes(wt) == 2);
}

TEST_CASE("jointly solved n = 1 state has one node")
{
    Scenario sc = worked();
    sc.qn = {1, -2.0, 0.0};
    const BoundState bs = solve_joint(sc, Param::alpha, default_config(sc), {3.3, 0.12});
    CHECK(bs.reduced.b_heun < 0.0);
    const WaveTable wt = assemble(bs, sc, default_x_max(bs));
    CHECK(wt.nodes == 1);
    CHECK(std::abs(wt.psi.back()) <= 1e-6 * peak(wt.psi));
}

TEST_CASE("sample and range checks")
{
    const Scenario sc = worked();
    const BoundState bs = ground(sc);
    CHECK_THROWS_AS(assemble(bs, sc, 5.0, 3), Error);
    CHECK_THROWS_AS(assemble(bs, sc, -1.0, 100), Error);
    const WaveTable wt = assemble(bs, sc, 5.0, 16);
    CHECK(wt.xs.size() == 16);
    CHECK(wt.xs.back() == 5.0);
}
