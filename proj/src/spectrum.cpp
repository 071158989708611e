#include "kgo/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "kgo/error.hpp"
#include "kgo/heun.hpp"

namespace kgo {

std::string_view to_string(Branch b) noexcept
{
    return b == Branch::positive ? "positive" : "negative";
}

Scenario resolved(const Scenario& sc, const BoundState& bs)
{
    return bs.free_param ? with(sc, bs.free_param->name, bs.free_param->value) : sc;
}

void SolveConfig::validate() const
{
    if (!(e_min < e_max) || !std::isfinite(e_min) || !std::isfinite(e_max)) {
        throw Error(Errc::invalid_params, "energy bracket needs finite e_min < e_max");
    }
    if (grid_points < 100) {
        throw Error(Errc::invalid_params, "grid_points must be >= 100");
    }
    if (!(tol > 0.0)) {
        throw Error(Errc::invalid_params, "tol must be > 0");
    }
    if (max_iter < 1) {
        throw Error(Errc::invalid_params, "max_iter must be >= 1");
    }
    if (free_steps < 2) {
        throw Error(Errc::invalid_params, "free_steps must be >= 2");
    }
    if (free_min && free_max && !(*free_min < *free_max)) {
        throw Error(Errc::invalid_params, "free parameter range needs free_min < free_max");
    }
}

SolveConfig default_config(const Scenario& sc)
{
    const double m = sc.particle.mass;
    const double w = sc.particle.omega_osc;
    const double coupling = sc.kind == ScenarioKind::cornell
                                ? std::abs(sc.cornell.a_lin) + std::abs(sc.cornell.b_coul)
                                : sc.linear.xi + sc.pdm.kc;
    // The alpha term covers the large-vorticity regime E ~ (2n + 3) alpha.
    const double scale = m + m * w * (coupling + 1.0) + std::abs(sc.qn.l) + std::abs(sc.qn.k) + 1.0 +
                         sc.spacetime.alpha * (2.0 * sc.qn.n + 4.0);
    SolveConfig cfg;
    cfg.e_max = 10.0 * scale;
    cfg.e_min = -cfg.e_max;
    return cfg;
}

double energy_residual(const Scenario& sc, double energy)
{
    // reduce() owns the precondition checks.
    (void)reduce(sc, energy);
    const double alpha = sc.spacetime.alpha;
    const double m = sc.particle.mass;
    const double w = sc.particle.omega_osc;
    const double l = sc.qn.l;
    const double k = sc.qn.k;
    const double n = sc.qn.n;
    const double e2 = energy * energy;
    if (sc.kind == ScenarioKind::cornell) {
        const double a = sc.cornell.a_lin;
        const double b = sc.cornell.b_coul;
        const double omega = std::sqrt(alpha * alpha * e2 + m * m * w * w * a * a);
        const double xi = std::sqrt(cornell_discriminant(m, w, b));
        return alpha * alpha * l * l * e2 / (omega * omega) -
               (m * m + l * l + k * k - e2 + m * w * a + 2.0 * a * b * m * m * w * w) -
               (2.0 + xi) * omega - 2.0 * n * omega;
    }
    const double xi = sc.linear.xi;
    const double kc = sc.pdm.kc;
    const double omega = std::sqrt(alpha * alpha * e2 + m * m * w * w * xi * xi);
    const double zeta = std::sqrt(1.0 + 4.0 * m * m * kc * kc);
    const double shift = alpha * energy * l + kc * m * m * w * w * xi * xi;
    return e2 + shift * shift / (omega * omega) -
           (m * m + l * l + k * k + m * w * xi + m * m * kc * kc * xi * xi * w * w) -
           (1.0 + zeta) * omega - (2.0 * n + 1.0) * omega;
}

double scaled_energy_residual(const Scenario& sc, double energy)
{
    const ReducedProblem r = reduce(sc, energy);
    return r.c_heun - r.a_heun - 2.0 - 2.0 * sc.qn.n;
}

namespace {

double scaled_coefficient(const Scenario& sc, double energy)
{
    const HeunSeries hs = series_coefficients(heun_params(reduce(sc, energy)), sc.qn.n + 2);
    return hs.coeffs[static_cast<std::size_t>(sc.qn.n + 1)] / hs.max_abs(sc.qn.n);
}

// Bisection of a bracketed sign change down to adjacent doubles.
template <class F>
double bisect(F&& f, double lo, double hi, double flo)
{
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double fm = f(mid);
        if (fm == 0.0) {
            return mid;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double safe_residual(const Scenario& sc, double e)
{
    try {
        return energy_residual(sc, e);
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

std::vector<double> energy_roots(const Scenario& sc, double e_min, double e_max, int points)
{
    std::vector<double> roots;
    const auto f = [&](double e) { return safe_residual(sc, e); };
    double prev_e = e_min;
    double prev_f = f(prev_e);
    if (prev_f == 0.0) {
        roots.push_back(prev_e);
    }
    for (int i = 1; i < points; ++i) {
        const double e = e_min + (e_max - e_min) * static_cast<double>(i) / (points - 1);
        const double fe = f(e);
        if (fe == 0.0) {
            roots.push_back(e);
        } else if (std::isfinite(prev_f) && std::isfinite(fe) && prev_f != 0.0 &&
                   (prev_f < 0.0) != (fe < 0.0)) {
            const double root = bisect(f, prev_e, e, prev_f);
            if (std::isfinite(f(root))) {
                roots.push_back(root);
            }
        }
        prev_e = e;
        prev_f = fe;
    }
    return roots;
}

struct Point
{
    double energy;
    double param;
};

struct JointEval
{
    std::array<double, 2> f{};
    bool ok = false;
    double norm() const { return ok ? std::max(std::abs(f[0]), std::abs(f[1])) : HUGE_VAL; }
};

class JointProblem
{
  public:
    JointProblem(const Scenario& sc, Param free, double tol, int max_iter)
        : sc_(sc)
        , free_(free)
        , tol_(tol)
        , max_iter_(max_iter)
        , bound_(lower_bound(free))
    {
    }

    bool admissible(double p) const { return bound_.inclusive ? p >= bound_.lower : p > bound_.lower; }

    double project(double p, double from) const
    {
        if (admissible(p)) {
            return p;
        }
        return bound_.inclusive ? bound_.lower : 0.5 * (from + bound_.lower);
    }

    Scenario at(double p) const { return with(sc_, free_, p); }

    JointEval eval(Point x) const
    {
        JointEval out;
        if (!admissible(x.param)) {
            return out;
        }
        try {
            const Scenario s = at(x.param);
            s.validate();
            out.f[0] = scaled_energy_residual(s, x.energy);
            out.f[1] = scaled_coefficient(s, x.energy);
            out.ok = std::isfinite(out.f[0]) && std::isfinite(out.f[1]);
        } catch (const Error&) {
            out.ok = false;
        }
        return out;
    }

    /// Newton on the energy condition alone with the parameter held fixed.
    std::optional<Point> polish_energy(Point x) const
    {
        const Scenario s = at(x.param);
        const auto f = [&](double e) {
            try {
                return scaled_energy_residual(s, e);
            } catch (const Error&) {
                return std::numeric_limits<double>::quiet_NaN();
            }
        };
        double e = x.energy;
        double fe = f(e);
        for (int iter = 0; iter < max_iter_ && std::isfinite(fe); ++iter) {
            if (std::abs(fe) <= tol_) {
                return Point{e, x.param};
            }
            const double h = 1e-7 * std::max(1.0, std::abs(e));
            const double slope = (f(e + h) - f(e - h)) / (2.0 * h);
            if (!std::isfinite(slope) || slope == 0.0) {
                return std::nullopt;
            }
            const double step = -fe / slope;
            double lambda = 1.0;
            bool moved = false;
            while (lambda > 1e-8) {
                const double trial = e + lambda * step;
                const double ft = f(trial);
                if (std::isfinite(ft) && std::abs(ft) < std::abs(fe)) {
                    e = trial;
                    fe = ft;
                    moved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!moved) {
                break;
            }
        }
        if (std::isfinite(fe) && std::abs(fe) <= tol_) {
            return Point{e, x.param};
        }
        return std::nullopt;
    }

    /// Damped Newton with a central-difference Jacobian. Returns the last
    /// iterate and whether both scaled residuals reached tol.
    std::pair<Point, bool> newton(Point x) const
    {
        JointEval fx = eval(x);
        if (!fx.ok) {
            return {x, false};
        }
        for (int iter = 0; iter < max_iter_; ++iter) {
            if (fx.norm() <= tol_) {
                return {x, true};
            }
            const double he = 1e-7 * std::max(1.0, std::abs(x.energy));
            const double hp = 1e-7 * std::max(1.0, std::abs(x.param));
            const JointEval e_hi = eval({x.energy + he, x.param});
            const JointEval e_lo = eval({x.energy - he, x.param});
            const JointEval p_hi = eval({x.energy, x.param + hp});
            JointEval p_lo = eval({x.energy, x.param - hp});
            if (!e_hi.ok || !e_lo.ok || !p_hi.ok) {
                return {x, false};
            }
            double j[2][2];
            for (int r = 0; r < 2; ++r) {
                j[r][0] = (e_hi.f[r] - e_lo.f[r]) / (2.0 * he);
                j[r][1] = p_lo.ok ? (p_hi.f[r] - p_lo.f[r]) / (2.0 * hp) : (p_hi.f[r] - fx.f[r]) / hp;
            }
            const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            const double scale = std::abs(j[0][0] * j[1][1]) + std::abs(j[0][1] * j[1][0]);
            if (!(std::abs(det) > 1e-14 * scale)) {
                return {x, false};
            }
            const double de = -(j[1][1] * fx.f[0] - j[0][1] * fx.f[1]) / det;
            const double dp = -(-j[1][0] * fx.f[0] + j[0][0] * fx.f[1]) / det;
            double lambda = 1.0;
            bool moved = false;
            while (lambda > 1e-10) {
                Point trial{x.energy + lambda * de, project(x.param + lambda * dp, x.param)};
                const JointEval ft = eval(trial);
                if (ft.ok && ft.norm() < fx.norm()) {
                    x = trial;
                    fx = ft;
                    moved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!moved) {
                break;
            }
        }
        return {x, fx.norm() <= tol_};
    }

    const Scenario& scenario() const { return sc_; }
    Param free() const { return free_; }
    double tol() const { return tol_; }

  private:
    Scenario sc_;
    Param free_;
    double tol_;
    int max_iter_;
    ParamBound bound_;
};

BoundState finish(const JointProblem& jp, Point x)
{
    BoundState bs = make_bound_state(jp.at(x.param), x.energy);
    bs.free_param = FreeParam{jp.free(), x.param};
    return bs;
}

// k-th root of the given sign, ordered by |E|.
std::optional<double> pick_root(const std::vector<double>& roots, bool positive, std::size_t index)
{
    std::vector<double> sel;
    for (double r : roots) {
        if ((r >= 0.0) == positive) {
            sel.push_back(r);
        }
    }
    std::sort(sel.begin(), sel.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (index < sel.size()) {
        return sel[index];
    }
    return std::nullopt;
}

} // namespace

double coefficient_residual(const Scenario& sc, double energy)
{
    return truncation_residual(heun_params(reduce(sc, energy)), sc.qn.n).coeff;
}

BoundState make_bound_state(const Scenario& sc, double energy)
{
    BoundState bs;
    bs.energy = energy;
    bs.n = sc.qn.n;
    bs.reduced = reduce(sc, energy);
    bs.residual_energy = energy_residual(sc, energy);
    bs.residual_coeff = truncation_residual(heun_params(bs.reduced), sc.qn.n).coeff;
    return bs;
}

std::vector<BoundState> solve_energy(const Scenario& sc, const SolveConfig& cfg)
{
    sc.validate();
    cfg.validate();
    const std::vector<double> roots = energy_roots(sc, cfg.e_min, cfg.e_max, cfg.grid_points);
    if (roots.empty()) {
        std::ostringstream os;
        os << "no sign change of the energy condition in [" << cfg.e_min << ", " << cfg.e_max << "]";
        throw Error(Errc::no_root_found, os.str());
    }
    std::vector<BoundState> out;
    out.reserve(roots.size());
    for (double e : roots) {
        out.push_back(make_bound_state(sc, e));
    }
    return out;
}

std::vector<BoundState> joint_scan(const Scenario& sc, Param free, double lo, double hi, int steps,
                                   const SolveConfig& cfg)
{
    sc.validate();
    cfg.validate();
    if (!(lo < hi) || steps < 1) {
        throw Error(Errc::invalid_params, "joint scan needs lo < hi and steps >= 1");
    }
    const JointProblem jp(sc, free, cfg.tol, cfg.max_iter);

    std::vector<double> ps(static_cast<std::size_t>(steps) + 1);
    std::vector<std::vector<double>> roots(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        ps[i] = lo + (hi - lo) * static_cast<double>(i) / steps;
        if (!jp.admissible(ps[i])) {
            continue;
        }
        try {
            const Scenario s = jp.at(ps[i]);
            s.validate();
            roots[i] = energy_roots(s, cfg.e_min, cfg.e_max, cfg.grid_points);
        } catch (const Error&) {
            roots[i].clear();
        }
    }

    std::vector<BoundState> found;
    const auto record = [&](Point x) {
        const auto [polished, ok] = jp.newton(x);
        if (!ok) {
            return;
        }
        for (const auto& bs : found) {
            const double de = std::abs(bs.energy - polished.energy);
            const double dp = std::abs(bs.free_param->value - polished.param);
            if (de <= 1e-8 * std::max(1.0, std::abs(polished.energy)) &&
                dp <= 1e-8 * std::max(1.0, std::abs(polished.param))) {
                return;
            }
        }
        found.push_back(finish(jp, polished));
    };

    // Energy root near `target` at parameter p, searched in a local window first.
    const auto branch_energy = [&](double p, double e_a, double e_b, bool positive,
                                   std::size_t index) -> std::optional<double> {
        const Scenario s = jp.at(p);
        const double width = std::abs(e_b - e_a) + 1e-3 * std::max(1.0, std::abs(e_a));
        const double lo_e = std::min(e_a, e_b) - width;
        const double hi_e = std::max(e_a, e_b) + width;
        const std::vector<double> local = energy_roots(s, lo_e, hi_e, 64);
        if (!local.empty()) {
            const double target = 0.5 * (e_a + e_b);
            return *std::min_element(local.begin(), local.end(), [&](double a, double b) {
                return std::abs(a - target) < std::abs(b - target);
            });
        }
        return pick_root(energy_roots(s, cfg.e_min, cfg.e_max, cfg.grid_points), positive, index);
    };

    for (int sign = 0; sign < 2; ++sign) {
        const bool positive = sign == 0;
        std::size_t max_index = 0;
        for (const auto& r : roots) {
            max_index = std::max(max_index, r.size());
        }
        for (std::size_t index = 0; index < max_index; ++index) {
            bool have_prev = false;
            double prev_e = 0.0;
            double prev_f = 0.0;
            double prev_p = 0.0;
            bool prev_zero = false;
            for (std::size_t i = 0; i < ps.size(); ++i) {
                const auto e = pick_root(roots[i], positive, index);
                std::optional<double> fval;
                if (e) {
                    const JointEval ev = jp.eval({*e, ps[i]});
                    if (ev.ok) {
                        fval = ev.f[1];
                    }
                }
                if (!fval) {
                    have_prev = false;
                    prev_zero = false;
                    continue;
                }
                const bool zero = std::abs(*fval) <= cfg.tol;
                if (zero && !prev_zero) {
                    record({*e, ps[i]});
                } else if (have_prev && !zero && !prev_zero && (prev_f < 0.0) != (*fval < 0.0)) {
                    // Bisect the coefficient along the tracked energy branch.
                    double p_lo = prev_p, p_hi = ps[i];
                    double e_lo = prev_e, e_hi = *e;
                    double f_lo = prev_f;
                    bool lost = false;
                    for (int iter = 0; iter < 100; ++iter) {
                        const double p_mid = 0.5 * (p_lo + p_hi);
                        if (p_mid <= p_lo || p_mid >= p_hi) {
                            break;
                        }
                        const auto e_mid = branch_energy(p_mid, e_lo, e_hi, positive, index);
                        const JointEval ev = e_mid ? jp.eval({*e_mid, p_mid}) : JointEval{};
                        if (!ev.ok) {
                            lost = true;
                            break;
                        }
                        if ((ev.f[1] < 0.0) == (f_lo < 0.0)) {
                            p_lo = p_mid;
                            e_lo = *e_mid;
                            f_lo = ev.f[1];
                        } else {
                            p_hi = p_mid;
                            e_hi = *e_mid;
                        }
                    }
                    if (!lost) {
                        record({0.5 * (e_lo + e_hi), 0.5 * (p_lo + p_hi)});
                    }
                }
                have_prev = true;
                prev_e = *e;
                prev_f = *fval;
                prev_p = ps[i];
                prev_zero = zero;
            }
        }
    }
    return found;
}

BoundState solve_joint(const Scenario& sc, Param free, const SolveConfig& cfg,
                       std::pair<double, double> guess)
{
    sc.validate();
    cfg.validate();
    if (!std::isfinite(guess.first) || !std::isfinite(guess.second)) {
        throw Error(Errc::invalid_params, "joint solve needs a finite guess");
    }
    const JointProblem jp(sc, free, cfg.tol, cfg.max_iter);
    Point start{guess.first, jp.project(guess.second, guess.second)};
    if (!jp.admissible(start.param)) {
        start.param = guess.second;
    }

    // The second condition may already hold (e.g. A_1 = 0 identically).
    if (const auto e_only = jp.polish_energy(start)) {
        const JointEval ev = jp.eval(*e_only);
        if (ev.ok && ev.norm() <= cfg.tol) {
            return finish(jp, *e_only);
        }
        const auto [x, ok] = jp.newton(*e_only);
        if (ok) {
            return finish(jp, x);
        }
    }
    {
        const auto [x, ok] = jp.newton(start);
        if (ok) {
            return finish(jp, x);
        }
    }

    const double p0 = start.param;
    const ParamBound bound = lower_bound(free);
    double lo = cfg.free_min.value_or(p0 - 4.0 * std::abs(p0) - 1.0);
    double hi = cfg.free_max.value_or(p0 + 4.0 * std::abs(p0) + 1.0);
    if (lo < bound.lower || (!bound.inclusive && lo == bound.lower)) {
        lo = bound.inclusive ? bound.lower : bound.lower + 1e-9 * std::max(1.0, hi - bound.lower);
    }
    std::vector<BoundState> candidates;
    if (lo < hi) {
        candidates = joint_scan(sc, free, lo, hi, cfg.free_steps, cfg);
    }
    if (candidates.empty()) {
        const JointEval ev = jp.eval(start);
        std::ostringstream os;
        os << "joint solve for " << to_string(free) << " did not converge; best residuals at guess ("
           << ev.f[0] << ", " << ev.f[1] << ")";
        throw Error(Errc::no_convergence, os.str());
    }
    const double e_scale = std::max(1.0, std::abs(guess.first));
    const double p_scale = std::max(1.0, std::abs(guess.second));
    return *std::min_element(candidates.begin(), candidates.end(), [&](const BoundState& a, const BoundState& b) {
        const auto dist = [&](const BoundState& s) {
            return std::hypot((s.energy - guess.first) / e_scale, (s.free_param->value - guess.second) / p_scale);
        };
        return dist(a) < dist(b);
    });
}

std::pair<double, double> minkowski_energy(const ParticleParams& p, const LinearPotential& lin,
                                           const PdmParams& pdm, const QuantumNumbers& qn)
{
    const double m0 = p.mass;
    const double coupling = m0 * p.omega_osc * lin.xi;
    if (!(coupling >= 0.0)) {
        throw Error(Errc::invalid_params, "Minkowski closed form needs m0 Omega Xi >= 0");
    }
    const double zeta = std::sqrt(1.0 + 4.0 * m0 * m0 * pdm.kc * pdm.kc);
    const double rhs = m0 * m0 + qn.l * qn.l + qn.k * qn.k + coupling * (2.0 * qn.n + 3.0 + zeta);
    if (rhs < 0.0) {
        throw Error(Errc::negative_discriminant, "E^2 < 0 in the Minkowski closed form");
    }
    const double e = std::sqrt(rhs);
    return {e, -e};
}

std::pair<double, double> minkowski_energy_cornell(const ParticleParams& p, const CornellPotential& pot,
                                                   const QuantumNumbers& qn)
{
    const double coupling = p.mass * p.omega_osc * pot.a_lin;
    const double rhs =
        p.mass * p.mass + qn.l * qn.l + qn.k * qn.k + coupling + (2.0 * qn.n + 3.0) * std::abs(coupling);
    if (rhs < 0.0) {
        throw Error(Errc::negative_discriminant, "E^2 < 0 in the Minkowski closed form");
    }
    const double e = std::sqrt(rhs);
    return {e, -e};
}

namespace {

unsigned worker_count(unsigned requested, std::size_t jobs)
{
    unsigned n = requested;
    if (n == 0) {
        n = std::max(1u, std::thread::hardware_concurrency());
        if (const char* env = std::getenv("KGO_THREADS")) {
            const long cap = std::strtol(env, nullptr, 10);
            if (cap > 0) {
                n = std::min(n, static_cast<unsigned>(cap));
            }
        }
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

} // namespace

std::vector<ScanRow> scan(const Scenario& tmpl, Param param, const std::vector<double>& values,
                          const std::vector<int>& levels, unsigned threads)
{
    if (values.empty()) {
        throw Error(Errc::invalid_params, "scan needs at least one parameter value");
    }
    std::vector<ScanRow> rows;
    for (double v : values) {
        for (int n : levels) {
            ScanRow row;
            row.value = v;
            row.n = n;
            rows.push_back(row);
        }
    }
    const auto compute = [&](ScanRow& row) {
        try {
            Scenario sc = with(tmpl, param, row.value);
            sc.qn.n = row.n;
            sc.validate();
            row.roots = solve_energy(sc, default_config(sc));
        } catch (const Error& err) {
            row.error = err.what();
        }
    };

    const unsigned workers = worker_count(threads, rows.size());
    if (workers <= 1) {
        for (auto& row : rows) {
            compute(row);
        }
        return rows;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < rows.size(); i += workers) {
                compute(rows[i]);
            }
        });
    }
    pool.clear();
    return rows;
}

} // namespace kgo
