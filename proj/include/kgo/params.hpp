#pragma once

// Physical parameters of the generalized Klein-Gordon oscillator in the
// Goedel-type background ds^2 = -(dt + alpha x dy)^2 + dx^2 + dy^2 + dz^2,
// and the algebraic map from a physical scenario onto the dimensionless
// biconfluent Heun problem
//
//   z H'' + (1 + a - b z - 2 z^2) H' + [(c - a - 2) z - (d + b (1 + a)) / 2] H = 0.
//
// Natural units (hbar = c = 1) throughout.

#include <string_view>

namespace kgo {

struct SpacetimeParams
{
    double alpha = 0.0; ///< vorticity-like parameter, alpha = 0 is Minkowski
};

struct ParticleParams
{
    double mass = 1.0;      ///< m (Cornell) or the rest mass m0 (PDM)
    double omega_osc = 0.0; ///< oscillator frequency Omega
};

/// Coupling profile f(x) = A x + B / x.
struct CornellPotential
{
    double a_lin = 0.0;
    double b_coul = 0.0;
};

/// Coupling profile f(x) = xi * x.
struct LinearPotential
{
    double xi = 1.0;
};

/// m(x) = m0 (1 + kc / x); only the product K*C ever enters.
struct PdmParams
{
    double kc = 0.0;
};

struct QuantumNumbers
{
    int n = 0;      ///< Heun polynomial degree
    double l = 0.0; ///< y-momentum
    double k = 0.0; ///< z-momentum
};

enum class ScenarioKind { cornell, pdm_linear };

std::string_view to_string(ScenarioKind kind) noexcept;

/// One radial problem. Only the payload matching `kind` is read: `cornell`
/// for ScenarioKind::cornell, `linear` and `pdm` for ScenarioKind::pdm_linear.
struct Scenario
{
    ScenarioKind kind = ScenarioKind::cornell;
    SpacetimeParams spacetime;
    ParticleParams particle;
    CornellPotential cornell;
    LinearPotential linear;
    PdmParams pdm;
    QuantumNumbers qn;

    /// Throws Error(invalid_params) when a field invariant is violated.
    void validate() const;
};

/// Scalar parameters that can be swept or solved for.
enum class Param { alpha, omega_osc, a_lin, b_coul, xi, kc, mass, l, k };

std::string_view to_string(Param p) noexcept;
/// Accepts both the long key ("omega_osc") and the symbol ("Omega", "A", ...).
Param param_from_string(std::string_view name);

double get(const Scenario& sc, Param p);
Scenario with(Scenario sc, Param p, double value);
/// Lower bound of the admissible range and whether it is attainable.
struct ParamBound
{
    double lower;
    bool inclusive;
};
ParamBound lower_bound(Param p);

/// Dimensionless Heun data for a scenario at a trial energy.
struct ReducedProblem
{
    double freq = 0.0;       ///< omega (Cornell) or omega-tilde (PDM)
    double beta0 = 0.0;      ///< constant right-hand side of the radial ODE
    double b_heun = 0.0;     ///< Lambda_1 or Theta_1
    double exponent = 0.0;   ///< Frobenius exponent eta or delta
    double root_index = 0.0; ///< xi or zeta, equal to a_heun
    double c_heun = 0.0;     ///< lambda or kappa
    double d_heun = 0.0;     ///< 0 (Cornell) or 4 m0^2 kc / sqrt(freq)
    double a_heun = 0.0;     ///< 2 * exponent - 1
};

ReducedProblem cornell_reduce(const SpacetimeParams& st, const ParticleParams& p,
                              const CornellPotential& pot, const QuantumNumbers& qn,
                              double energy);

ReducedProblem pdm_reduce(const SpacetimeParams& st, const ParticleParams& p,
                          const LinearPotential& lin, const PdmParams& pdm,
                          const QuantumNumbers& qn, double energy);

ReducedProblem reduce(const Scenario& sc, double energy);

/// Coefficients of V_E(x) = freq^2 x^2 + 2 p x + q + s / x + t / x^2.
struct PotentialTerms
{
    double freq_sq;
    double linear; ///< p
    double constant;
    double inv;    ///< s
    double inv_sq; ///< t
    double beta0;
};

PotentialTerms potential_terms(const Scenario& sc, double energy);

/// V_E(x) such that the radial equation reads psi'' - V_E psi = beta0 psi.
double effective_potential(const Scenario& sc, double energy, double x);

/// 1 + 4 (m^2 Omega^2 B^2 - m Omega B) evaluated with a single rounding.
double cornell_discriminant(double mass, double omega_osc, double b_coul) noexcept;

} // namespace kgo
