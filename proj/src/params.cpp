#include "kgo/params.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "kgo/error.hpp"

namespace kgo {

std::string_view to_string(ScenarioKind kind) noexcept
{
    return kind == ScenarioKind::cornell ? "cornell" : "pdm";
}

namespace {

// xi below this is treated as the logarithmic Frobenius branch.
constexpr double degenerate_xi = 1e-10;

void require(bool ok, const char* what)
{
    if (!ok) {
        throw Error(Errc::invalid_params, what);
    }
}

bool finite_all(std::initializer_list<double> xs)
{
    for (double x : xs) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

} // namespace

void Scenario::validate() const
{
    require(finite_all({spacetime.alpha, particle.mass, particle.omega_osc, cornell.a_lin,
                        cornell.b_coul, linear.xi, pdm.kc, qn.l, qn.k}),
            "non-finite parameter");
    require(spacetime.alpha >= 0.0, "alpha must be >= 0");
    require(particle.mass > 0.0, "mass must be > 0");
    require(particle.omega_osc >= 0.0, "omega_osc must be >= 0");
    require(qn.n >= 0, "n must be >= 0");
    if (kind == ScenarioKind::cornell) {
        require(particle.omega_osc == 0.0 || cornell.a_lin != 0.0 || cornell.b_coul != 0.0,
                "Cornell coupling needs A or B nonzero when omega_osc > 0");
    } else {
        require(linear.xi > 0.0, "xi must be > 0");
        require(pdm.kc >= 0.0, "kc must be >= 0");
    }
}

std::string_view to_string(Param p) noexcept
{
    switch (p) {
        case Param::alpha: return "alpha";
        case Param::omega_osc: return "omega_osc";
        case Param::a_lin: return "A";
        case Param::b_coul: return "B";
        case Param::xi: return "xi";
        case Param::kc: return "kc";
        case Param::mass: return "mass";
        case Param::l: return "l";
        case Param::k: return "k";
    }
    return "?";
}

Param param_from_string(std::string_view name)
{
    if (name == "alpha") return Param::alpha;
    if (name == "omega_osc" || name == "omega-osc" || name == "Omega") return Param::omega_osc;
    if (name == "A" || name == "a_lin") return Param::a_lin;
    if (name == "B" || name == "b_coul") return Param::b_coul;
    if (name == "xi" || name == "Xi") return Param::xi;
    if (name == "kc") return Param::kc;
    if (name == "mass" || name == "m" || name == "m0") return Param::mass;
    if (name == "l") return Param::l;
    if (name == "k") return Param::k;
    throw Error(Errc::invalid_params, "unknown parameter '" + std::string(name) + "'");
}

double get(const Scenario& sc, Param p)
{
    switch (p) {
        case Param::alpha: return sc.spacetime.alpha;
        case Param::omega_osc: return sc.particle.omega_osc;
        case Param::a_lin: return sc.cornell.a_lin;
        case Param::b_coul: return sc.cornell.b_coul;
        case Param::xi: return sc.linear.xi;
        case Param::kc: return sc.pdm.kc;
        case Param::mass: return sc.particle.mass;
        case Param::l: return sc.qn.l;
        case Param::k: return sc.qn.k;
    }
    return 0.0;
}

Scenario with(Scenario sc, Param p, double value)
{
    switch (p) {
        case Param::alpha: sc.spacetime.alpha = value; break;
        case Param::omega_osc: sc.particle.omega_osc = value; break;
        case Param::a_lin: sc.cornell.a_lin = value; break;
        case Param::b_coul: sc.cornell.b_coul = value; break;
        case Param::xi: sc.linear.xi = value; break;
        case Param::kc: sc.pdm.kc = value; break;
        case Param::mass: sc.particle.mass = value; break;
        case Param::l: sc.qn.l = value; break;
        case Param::k: sc.qn.k = value; break;
    }
    return sc;
}

ParamBound lower_bound(Param p)
{
    switch (p) {
        case Param::alpha:
        case Param::omega_osc:
        case Param::kc: return {0.0, true};
        case Param::xi:
        case Param::mass: return {0.0, false};
        default: return {-HUGE_VAL, false};
    }
}

double cornell_discriminant(double mass, double omega_osc, double b_coul) noexcept
{
    // 1 + 4x(x - 1) == (2x - 1)^2; x - 1 is exact near x = 1/2.
    const double x = mass * omega_osc * b_coul;
    return std::fma(4.0 * x, x - 1.0, 1.0);
}

ReducedProblem cornell_reduce(const SpacetimeParams& st, const ParticleParams& p,
                              const CornellPotential& pot, const QuantumNumbers& qn,
                              double energy)
{
    const double m = p.mass;
    const double w = p.omega_osc;
    const double mwa = m * w * pot.a_lin;
    const double freq = std::sqrt(st.alpha * st.alpha * energy * energy + mwa * mwa);
    if (!(freq > 0.0)) {
        throw Error(Errc::zero_frequency, "omega = sqrt(alpha^2 E^2 + m^2 Omega^2 A^2) vanishes");
    }
    const double disc = cornell_discriminant(m, w, pot.b_coul);
    const double xi = std::sqrt(disc);
    if (!(xi > degenerate_xi)) {
        throw Error(Errc::degenerate_indicial, "m Omega B = 1/2 gives a logarithmic Frobenius branch");
    }

    ReducedProblem r;
    r.freq = freq;
    r.beta0 = m * m + qn.l * qn.l + qn.k * qn.k - energy * energy + mwa;
    r.b_heun = 2.0 * st.alpha * energy * qn.l / std::pow(freq, 1.5);
    r.root_index = xi;
    r.a_heun = xi;
    r.exponent = 0.5 * (1.0 + xi);
    r.c_heun = 0.25 * r.b_heun * r.b_heun - (2.0 * mwa * m * w * pot.b_coul + r.beta0) / freq;
    r.d_heun = 0.0;
    return r;
}

ReducedProblem pdm_reduce(const SpacetimeParams& st, const ParticleParams& p,
                          const LinearPotential& lin, const PdmParams& pdm,
                          const QuantumNumbers& qn, double energy)
{
    const double m0 = p.mass;
    const double w = p.omega_osc;
    const double mwx = m0 * w * lin.xi;
    const double freq = std::sqrt(st.alpha * st.alpha * energy * energy + mwx * mwx);
    if (!(freq > 0.0)) {
        throw Error(Errc::zero_frequency, "omega-tilde = sqrt(alpha^2 E^2 + m0^2 Omega^2 Xi^2) vanishes");
    }
    const double kc = pdm.kc;
    const double zeta = std::sqrt(1.0 + 4.0 * m0 * m0 * kc * kc);

    ReducedProblem r;
    r.freq = freq;
    r.beta0 = m0 * m0 + qn.l * qn.l + qn.k * qn.k - energy * energy + mwx;
    r.b_heun = 2.0 * (st.alpha * energy * qn.l + kc * mwx * mwx) / std::pow(freq, 1.5);
    r.root_index = zeta;
    r.a_heun = zeta;
    r.exponent = 0.5 * (1.0 + zeta);
    r.c_heun = 0.25 * r.b_heun * r.b_heun - (kc * kc * mwx * mwx + r.beta0) / freq;
    r.d_heun = 4.0 * m0 * m0 * kc / std::sqrt(freq);
    return r;
}

ReducedProblem reduce(const Scenario& sc, double energy)
{
    if (sc.kind == ScenarioKind::cornell) {
        return cornell_reduce(sc.spacetime, sc.particle, sc.cornell, sc.qn, energy);
    }
    return pdm_reduce(sc.spacetime, sc.particle, sc.linear, sc.pdm, sc.qn, energy);
}

PotentialTerms potential_terms(const Scenario& sc, double energy)
{
    const double alpha = sc.spacetime.alpha;
    const double m = sc.particle.mass;
    const double w = sc.particle.omega_osc;
    const double l = sc.qn.l;
    const double k = sc.qn.k;
    PotentialTerms t{};
    if (sc.kind == ScenarioKind::cornell) {
        const double a = sc.cornell.a_lin;
        const double b = sc.cornell.b_coul;
        t.freq_sq = alpha * alpha * energy * energy + m * m * w * w * a * a;
        t.linear = alpha * energy * l;
        t.constant = 2.0 * a * b * m * m * w * w;
        t.inv = 0.0;
        t.inv_sq = m * m * w * w * b * b - m * w * b;
        t.beta0 = m * m + l * l + k * k - energy * energy + m * w * a;
    } else {
        const double xi = sc.linear.xi;
        const double kc = sc.pdm.kc;
        t.freq_sq = alpha * alpha * energy * energy + m * m * w * w * xi * xi;
        t.linear = alpha * energy * l + kc * m * m * w * w * xi * xi;
        t.constant = m * m * kc * kc * xi * xi * w * w;
        t.inv = 2.0 * m * m * kc;
        t.inv_sq = m * m * kc * kc;
        t.beta0 = m * m + l * l + k * k - energy * energy + m * w * xi;
    }
    return t;
}

double effective_potential(const Scenario& sc, double energy, double x)
{
    if (!(x > 0.0)) {
        std::ostringstream os;
        os << "effective potential needs x > 0, got " << x;
        throw Error(Errc::domain_error, os.str());
    }
    const PotentialTerms t = potential_terms(sc, energy);
    return t.freq_sq * x * x + 2.0 * t.linear * x + t.constant + t.inv / x + t.inv_sq / (x * x);
}

} // namespace kgo
