#pragma once

// Quantization conditions, energy roots and the joint (energy, parameter)
// solve that makes the Heun series terminate.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kgo/params.hpp"

namespace kgo {

enum class Branch { positive, negative };

std::string_view to_string(Branch b) noexcept;

struct FreeParam
{
    Param name;
    double value;
};

struct BoundState
{
    double energy = 0.0;
    std::optional<FreeParam> free_param;
    int n = 0;
    double residual_energy = 0.0; ///< energy_residual at `energy`
    double residual_coeff = 0.0;  ///< A_{n+1} with A_0 = 1
    ReducedProblem reduced;

    Branch branch() const noexcept { return energy < 0.0 ? Branch::negative : Branch::positive; }
};

/// The scenario with the bound state's solved parameter written back.
Scenario resolved(const Scenario& sc, const BoundState& bs);

struct SolveConfig
{
    double e_min = -10.0;
    double e_max = 10.0;
    int grid_points = 2000;
    double tol = 1e-12;
    int max_iter = 100;

    /// Free-parameter grid of the joint-solve fallback; unset = around the guess.
    std::optional<double> free_min;
    std::optional<double> free_max;
    int free_steps = 400;

    void validate() const;
};

/// Default bracket |E| <= 10 (m + m Omega (|A| + |B| + Xi + 1) + |l| + |k| + 1).
SolveConfig default_config(const Scenario& sc);

/// First quantization condition as a signed residual, in the printed
/// energy-equation form. Zero exactly when c - a - 2 = 2n.
double energy_residual(const Scenario& sc, double energy);

/// energy_residual / freq, i.e. c - a - 2 - 2n.
double scaled_energy_residual(const Scenario& sc, double energy);

/// A_{n+1}(E) for the scenario's Heun parameters.
double coefficient_residual(const Scenario& sc, double energy);

BoundState make_bound_state(const Scenario& sc, double energy);

/// Every sign change of energy_residual on the grid, refined by bisection.
/// Throws Error(no_root_found) if there is none.
std::vector<BoundState> solve_energy(const Scenario& sc, const SolveConfig& cfg);

/// Both conditions: damped Newton on (E, free) with a nested-scan fallback.
/// Throws Error(no_convergence) with the best residuals on failure.
BoundState solve_joint(const Scenario& sc, Param free, const SolveConfig& cfg,
                       std::pair<double, double> guess);

/// All joint solutions found by tracking the energy roots across the free
/// parameter grid [lo, hi] with `steps` intervals.
std::vector<BoundState> joint_scan(const Scenario& sc, Param free, double lo, double hi,
                                   int steps, const SolveConfig& cfg);

/// Closed-form alpha = 0 spectrum of the PDM/linear scenario, (+E, -E).
std::pair<double, double> minkowski_energy(const ParticleParams& p, const LinearPotential& lin,
                                           const PdmParams& pdm, const QuantumNumbers& qn);

/// alpha = 0, B = 0 Cornell counterpart: E^2 = m^2 + l^2 + k^2 + m Omega A + (2n + 3) |m Omega A|,
/// i.e. (2n + 4) m Omega A for A > 0.
std::pair<double, double> minkowski_energy_cornell(const ParticleParams& p,
                                                   const CornellPotential& pot,
                                                   const QuantumNumbers& qn);

struct ScanRow
{
    double value = 0.0;
    int n = 0;
    std::vector<BoundState> roots;
    std::optional<std::string> error;
};

/// Parameter sweep; rows ordered by (value, level) in input order. Rows are
/// computed on up to `threads` workers (0 = KGO_THREADS or hardware).
std::vector<ScanRow> scan(const Scenario& tmpl, Param param, const std::vector<double>& values,
                          const std::vector<int>& levels, unsigned threads = 0);

} // namespace kgo
