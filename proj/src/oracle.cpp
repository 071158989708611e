#include "kgo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "kgo/error.hpp"
#include "kgo/wavefunction.hpp"

namespace kgo {

void GridSpec::validate() const
{
    if (!(x_min > 0.0) || !(x_min < x_max) || !std::isfinite(x_max)) {
        throw Error(Errc::invalid_params, "grid needs 0 < x_min < x_max");
    }
    if (points < 100) {
        throw Error(Errc::invalid_params, "grid needs at least 100 points");
    }
}

double OracleResult::relative_mismatch() const
{
    return mismatch / std::abs(beta0);
}

GridSpec default_grid(const Scenario& sc, double energy, int points)
{
    const ReducedProblem r = reduce(sc, energy);
    const double root = std::sqrt(r.freq);
    GridSpec g;
    // The wall at x_min suppresses the small solution r^(1 - eta) at a cost
    // of order r_min^a, which matters once a = 2 eta - 1 drops below 1.
    const double r_min = std::clamp(std::pow(1e-6, 1.0 / std::max(r.a_heun, 1e-3)), 1e-12, 1e-4);
    g.x_min = r_min / root;
    g.x_max = std::max(3.0 * turning_point(r, sc.qn.n), 6.0 / root);
    g.points = points;
    return g;
}

SymTridiag fd_operator(const std::function<double(double)>& potential, const GridSpec& grid)
{
    grid.validate();
    const double h = grid.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const auto n = static_cast<std::size_t>(grid.points);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.node(static_cast<int>(i));
        const double v = potential(x);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "potential is not finite at x = " << x;
            throw Error(Errc::discretization_error, os.str());
        }
        diag[i] = 2.0 * inv_h2 + v;
    }
    return SymTridiag(std::move(diag), std::vector<double>(n - 1, -inv_h2));
}

std::vector<double> fd_eigs(const std::function<double(double)>& potential, const GridSpec& grid, int count)
{
    if (count < 1 || count > grid.points / 10) {
        throw Error(Errc::invalid_params, "fd_eigs: count must be in [1, points / 10]");
    }
    return fd_operator(potential, grid).lowest(static_cast<std::size_t>(count));
}

namespace {

std::function<double(double)> potential_at(const Scenario& sc, double energy)
{
    const PotentialTerms t = potential_terms(sc, energy);
    return [t](double x) {
        return t.freq_sq * x * x + 2.0 * t.linear * x + t.constant + t.inv / x + t.inv_sq / (x * x);
    };
}

// eig_j(-D^2 + V_E) + beta0(E); NaN where the scenario is not defined.
double self_consistency_gap(const Scenario& sc, int j, double energy, const GridSpec& grid, double* eig_out)
{
    try {
        (void)reduce(sc, energy);
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const PotentialTerms t = potential_terms(sc, energy);
    const double eig = fd_operator(potential_at(sc, energy), grid).eigenvalue(static_cast<std::size_t>(j));
    if (eig_out) {
        *eig_out = eig;
    }
    return eig + t.beta0;
}

} // namespace

std::vector<OracleResult> self_consistent_energy(const Scenario& sc, int j, double e_lo, double e_hi,
                                                 const GridSpec& grid, int scan_points)
{
    sc.validate();
    grid.validate();
    if (!(e_lo < e_hi) || !std::isfinite(e_lo) || !std::isfinite(e_hi) || j < 0 || scan_points < 2) {
        throw Error(Errc::invalid_params, "self-consistent search needs a finite e_lo < e_hi and j >= 0");
    }
    std::vector<OracleResult> out;
    const auto gap = [&](double e) { return self_consistency_gap(sc, j, e, grid, nullptr); };
    double prev_e = e_lo;
    double prev_g = gap(prev_e);
    for (int i = 1; i < scan_points; ++i) {
        const double e = e_lo + (e_hi - e_lo) * static_cast<double>(i) / (scan_points - 1);
        const double ge = gap(e);
        if (std::isfinite(prev_g) && std::isfinite(ge) && (prev_g < 0.0) != (ge < 0.0)) {
            double lo = prev_e, hi = e, g_lo = prev_g;
            for (int iter = 0; iter < 100; ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi || hi - lo <= 1e-13 * std::max(1.0, std::abs(mid))) {
                    break;
                }
                const double gm = gap(mid);
                if (!std::isfinite(gm)) {
                    break;
                }
                if ((gm < 0.0) == (g_lo < 0.0)) {
                    lo = mid;
                    g_lo = gm;
                } else {
                    hi = mid;
                }
            }
            OracleResult res;
            res.energy = 0.5 * (lo + hi);
            res.eig_index = j;
            res.mismatch = std::abs(self_consistency_gap(sc, j, res.energy, grid, &res.eigenvalue));
            res.beta0 = potential_terms(sc, res.energy).beta0;
            res.overlap = std::numeric_limits<double>::quiet_NaN();
            res.grid = grid;
            out.push_back(res);
        }
        prev_e = e;
        prev_g = ge;
    }
    if (out.empty()) {
        std::ostringstream os;
        os << "no self-consistent FD level j = " << j << " in [" << e_lo << ", " << e_hi << "]";
        throw Error(Errc::no_root_found, os.str());
    }
    return out;
}

OracleResult verify(const BoundState& bs, const Scenario& sc, const GridSpec& grid)
{
    const Scenario s = resolved(sc, bs);
    const double energy = bs.energy;
    const PotentialTerms t = potential_terms(s, energy);
    const SymTridiag op = fd_operator(potential_at(s, energy), grid);
    const double target = -t.beta0;

    const std::size_t below = op.count_below(target);
    OracleResult res;
    res.energy = energy;
    res.beta0 = t.beta0;
    res.grid = grid;
    res.mismatch = HUGE_VAL;
    for (std::size_t k : {below == 0 ? below : below - 1, below}) {
        if (k >= op.size()) {
            continue;
        }
        const double eig = op.eigenvalue(k);
        if (std::abs(eig - target) < res.mismatch) {
            res.mismatch = std::abs(eig - target);
            res.eigenvalue = eig;
            res.eig_index = static_cast<int>(k);
        }
    }

    res.overlap = std::numeric_limits<double>::quiet_NaN();
    try {
        const RadialFunction psi(bs.reduced, bs.n, grid.x_max);
        const std::vector<double> v = op.eigenvector(res.eigenvalue);
        double dot = 0.0, vv = 0.0, pp = 0.0;
        for (int i = 0; i < grid.points; ++i) {
            const double a = psi(grid.node(i));
            const double b = v[static_cast<std::size_t>(i)];
            dot += a * b;
            vv += b * b;
            pp += a * a;
        }
        if (vv > 0.0 && pp > 0.0) {
            res.overlap = std::abs(dot) / std::sqrt(vv * pp);
        }
    } catch (const Error&) {
        // Non-polynomial states may not be evaluable out to x_max.
    }
    return res;
}

OracleResult verify(const BoundState& bs, const Scenario& sc)
{
    const Scenario s = resolved(sc, bs);
    return verify(bs, s, default_grid(s, bs.energy));
}

} // namespace kgo
