// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kgo/error.hpp"
#include "kgo/heun.hpp"
#include "kgo/oracle.hpp"
#include "kgo/spectrum.hpp"
#include "kgo/wavefunction.hpp"

using namespace kgo;

namespace {

struct Verdict
{
    bool ok;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Verdict()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = v.ok && secs < budget_s;
    failures += ok ? 0 : 1;
    std::printf("%s [%d] %s: %s (%.3f s, budget %.0f s)\n", ok ? "PASS" : "FAIL", id, name, v.detail.c_str(), secs,
                budget_s);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Scenario cornell(double alpha, double m, double w, double a, double b, QuantumNumbers qn = {})
{
    Scenario sc;
    sc.kind = ScenarioKind::cornell;
    sc.spacetime.alpha = alpha;
    sc.particle = {m, w};
    sc.cornell = {a, b};
    sc.qn = qn;
    return sc;
}

Scenario pdm(double alpha, double m, double w, double xi, double kc, QuantumNumbers qn = {})
{
    Scenario sc;
    sc.kind = ScenarioKind::pdm_linear;
    sc.spacetime.alpha = alpha;
    sc.particle = {m, w};
    sc.linear = {xi};
    sc.pdm = {kc};
    sc.qn = qn;
    return sc;
}

Verdict minkowski_closed_form()
{
    double worst = 0.0;
    for (int n = 0; n <= 3; ++n) {
        const Scenario sc = pdm(0, 1, 1, 1, 0, {n, 0, 0});
        const auto roots = solve_energy(sc, default_config(sc));
        const double exact = std::sqrt(1.0 + (2.0 * n + 4.0));
        if (roots.size() != 2) {
            return {false, "n = " + std::to_string(n) + ": expected two roots"};
        }
        worst = std::max({worst, std::abs(roots[0].energy + exact), std::abs(roots[1].energy - exact)});
    }
    return {worst <= 1e-10, fmt("max |E - sqrt(2n + 5)| = %.2e over n = 0..3", worst)};
}

Verdict scenario_equivalence()
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> alpha(0.0, 2.0), pos(0.2, 2.0), mom(-1.5, 1.5);
    std::uniform_int_distribution<int> level(0, 3);
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        const double al = alpha(rng), m = pos(rng), w = pos(rng), a = pos(rng);
        const QuantumNumbers qn{level(rng), mom(rng), mom(rng)};
        const Scenario c = cornell(al, m, w, a, 0, qn);
        const Scenario p = pdm(al, m, w, a, 0, qn);
        const SolveConfig cfg = default_config(c);
        const auto rc = solve_energy(c, cfg);
        const auto rp = solve_energy(p, cfg);
        if (rc.size() != rp.size()) {
            return {false, "draw " + std::to_string(draw) + ": root counts differ"};
        }
        for (std::size_t i = 0; i < rc.size(); ++i) {
            worst = std::max(worst, std::abs(rc[i].energy - rp[i].energy));
        }
    }
    return {worst <= 1e-10, fmt("max root difference %.2e over 20 draws", worst)};
}

Verdict oracle_agreement()
{
    struct Case
    {
        const char* label;
        BoundState bs;
        Scenario sc;
    };
    std::vector<Case> cases;
    const auto positive_root = [](const Scenario& sc) { return solve_energy(sc, default_config(sc)).back(); };

    const Scenario vort = cornell(1, 1, 1, 1, 0);
    cases.push_back({"worked root", positive_root(vort), vort});
    const Scenario mink = cornell(0, 1, 1, 1, 0);
    cases.push_back({"Minkowski cornell", positive_root(mink), mink});
    const Scenario coul = cornell(0.5, 1, 1, 1, 0.2, {0, 0, 0.5});
    cases.push_back({"cornell B = 0.2", positive_root(coul), coul});
    const Scenario pdm2 = pdm(0, 1, 1, 1, 0, {2, 0, 0});
    cases.push_back({"pdm n = 2", positive_root(pdm2), pdm2});
    const Scenario node1 = cornell(0.12, 1, 1, 1, 0, {1, -2, 0});
    cases.push_back({"cornell joint n = 1",
                     solve_joint(node1, Param::alpha, default_config(node1), {3.3, 0.12}), node1});
    const Scenario pdmj = pdm(1, 1, 1, 1, 0.1, {1, 1, 0});
    SolveConfig cfg = default_config(pdmj);
    cfg.free_min = 1.0;
    cfg.free_max = 100.0;
    cases.push_back({"pdm joint n = 1", solve_joint(pdmj, Param::omega_osc, cfg, {17.0, 40.0}), pdmj});

    const double worked = std::sqrt(0.5 * (13.0 + std::sqrt(189.0)));
    if (std::abs(cases[0].bs.energy - worked) > 1e-10) {
        return {false, "worked root not reproduced"};
    }
    double worst_mismatch = 0.0, worst_overlap = 1.0;
    for (const auto& c : cases) {
        const Scenario s = resolved(c.sc, c.bs);
        const OracleResult res = verify(c.bs, s, default_grid(s, c.bs.energy, 20000));
        worst_mismatch = std::max(worst_mismatch, res.relative_mismatch());
        worst_overlap = std::isnan(res.overlap) ? 0.0 : std::min(worst_overlap, res.overlap);
    }
    return {worst_mismatch <= 1e-3 && worst_overlap >= 0.999,
            fmt("%.0f scenarios, max relative mismatch %.2e, min overlap %.8f", static_cast<double>(cases.size()),
                worst_mismatch, worst_overlap)};
}

Verdict termination_lemma()
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ua(0.0, 4.0), ud(-3.0, 3.0);
    double worst = 0.0;
    int draws = 0;
    for (int n = 0; n <= 4; ++n) {
        for (int i = 0; i < 1000; ++i) {
            const double a = ua(rng), d = ud(rng);
            const auto roots = continuant_roots(a, d, n);
            const double b = roots[static_cast<std::size_t>(i) % roots.size()];
            const HeunSeries hs = series_coefficients({a, b, a + 2.0 + 2.0 * n, d}, n + 11);
            const double scale = hs.max_abs(n);
            for (int j = n + 1; j <= n + 10; ++j) {
                worst = std::max(worst, std::abs(hs.coeffs[static_cast<std::size_t>(j)]) / scale);
            }
            ++draws;
        }
    }
    return {worst <= 1e-10, fmt("max |A_j| / max|A_0..A_n| = %.2e for j = n+1..n+10, %.0f draws", worst, draws)};
}

Verdict zero_set_equivalence()
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ua(0.0, 3.0), ud(-2.0, 2.0);
    double worst = 0.0;
    for (int n = 0; n <= 6; ++n) {
        for (int draw = 0; draw < 10; ++draw) {
            const double a = ua(rng), d = ud(rng);
            const auto coeff = [&](double b) {
                return truncation_residual({a, b, a + 2.0 + 2.0 * n, d}, n).coeff;
            };
            // Roots of A_{n+1}(b), a degree n + 1 polynomial, by widening scan and bisection.
            std::vector<double> found;
            for (double half = 1.0; half < 1e6 && found.size() != static_cast<std::size_t>(n + 1); half *= 2.0) {
                found.clear();
                const int steps = 4000;
                double prev_b = -half, prev_v = coeff(prev_b);
                for (int s = 1; s <= steps; ++s) {
                    const double b = -half + 2.0 * half * s / steps;
                    const double v = coeff(b);
                    if ((prev_v < 0.0) != (v < 0.0)) {
                        double lo = prev_b, hi = b, vlo = prev_v;
                        for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
                            const double mid = 0.5 * (lo + hi);
                            if (mid <= lo || mid >= hi) break;
                            const double vm = coeff(mid);
                            if ((vm < 0.0) == (vlo < 0.0)) {
                                lo = mid;
                                vlo = vm;
                            } else {
                                hi = mid;
                            }
                        }
                        found.push_back(0.5 * (lo + hi));
                    }
                    prev_b = b;
                    prev_v = v;
                }
            }
            const auto roots = continuant_roots(a, d, n);
            if (found.size() != roots.size()) {
                return {false, "n = " + std::to_string(n) + ": root counts differ"};
            }
            for (std::size_t i = 0; i < roots.size(); ++i) {
                worst = std::max(worst, std::abs(found[i] - roots[i]));
                const double det = std::abs(continuant({a, roots[i], a + 2.0 + 2.0 * n, d}, n));
                const double ref = std::abs(continuant({a, roots[i] + 1.0, a + 2.0 + 2.0 * n, d}, n));
                if (det > 1e-8 * std::max(1.0, ref)) {
                    return {false, "continuant does not vanish at its own root"};
                }
            }
        }
    }
    return {worst <= 1e-8, fmt("max |b_continuant - b_coeff| = %.2e for n = 0..6", worst)};
}

Verdict xi_identity()
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> um(0.05, 3.0), uw(0.0, 3.0), ub(-3.0, 3.0), ue(0.5, 5.0);
    double worst = 0.0;
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const double m = um(rng), w = uw(rng), b = ub(rng);
        const double xi = std::abs(2.0 * m * w * b - 1.0);
        if (xi <= 1e-10) {
            continue;
        }
        const ReducedProblem r = reduce(cornell(0.5, m, w, 1.0, b), ue(rng));
        worst = std::max(worst, std::abs(r.root_index - xi) / std::max(1.0, xi));
        ++checked;
    }
    return {worst <= 1e-12, fmt("max |xi - |2 m Omega B - 1|| = %.2e over %.0f draws", worst, checked)};
}

Verdict node_count()
{
    struct Family
    {
        int n;
        Scenario sc;
        Param free;
        double lo, hi;
    };
    const std::vector<Family> families = {
        {0, pdm(1, 1, 1, 1, 0.1, {0, -1, 0}), Param::omega_osc, 0.05, 20.0},
        {1, cornell(0.1, 1, 1, 1, 0, {1, -2, 0}), Param::alpha, 1e-3, 3.0},
        {2, cornell(0.1, 1, 1, 1, 0, {2, -2, 0}), Param::alpha, 1e-3, 3.0},
    };
    std::string detail;
    bool ok = true;
    for (const auto& f : families) {
        int states = 0, good = 0;
        for (const auto& bs : joint_scan(f.sc, f.free, f.lo, f.hi, 300, default_config(f.sc))) {
            const HeunParams hp = heun_params(bs.reduced);
            const double extreme = continuant_roots(hp.a, hp.d, f.n).front();
            if (std::abs(hp.b - extreme) > 1e-6 * std::max(1.0, std::abs(extreme))) {
                continue;
            }
            ++states;
            const WaveTable wt = assemble(bs, f.sc, default_x_max(bs));
            good += wt.nodes == f.n ? 1 : 0;
        }
        ok = ok && states > 0 && good == states;
        detail += "n=" + std::to_string(f.n) + ": " + std::to_string(good) + "/" + std::to_string(states) + " ";
    }
    return {ok, detail + "states with n sign changes"};
}

Verdict fd_convergence()
{
    const auto v = [](double x) { return x * x; };
    std::vector<double> eig;
    for (int intervals : {500, 1000, 2000}) {
        eig.push_back(fd_eigs(v, GridSpec{1e-4, 12.0, intervals - 1}, 1).front());
    }
    const double ratio = (eig[0] - eig[1]) / (eig[1] - eig[2]);
    const bool ok = std::abs(ratio - 4.0) <= 0.5 && std::abs(eig[2] - 3.0) < 1e-3;
    return {ok, fmt("lambda_h = %.8f, ratio %.4f", eig[2], ratio)};
}

} // namespace

int main()
{
    criterion(1, "Minkowski closed form", 1, minkowski_closed_form);
    criterion(2, "scenario equivalence", 10, scenario_equivalence);
    criterion(3, "oracle agreement", 60, oracle_agreement);
    criterion(4, "termination lemma", 10, termination_lemma);
    criterion(5, "continuant and coefficient zero sets", 10, zero_set_equivalence);
    criterion(6, "root index identity", 1, xi_identity);
    criterion(7, "node-count law", 10, node_count);
    criterion(8, "FD convergence", 30, fd_convergence);
    return failures;
}
