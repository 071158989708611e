#pragma once

// Finite-difference cross-check of the analytic bound states.
//
// The radial equation psi'' - V_E psi = beta0(E) psi is discretized with
// central differences and Dirichlet walls at x_min and x_max; a bound state
// at energy E shows up as an eigenvalue of -D^2 + V_E equal to -beta0(E).

#include <functional>
#include <optional>
#include <vector>

#include "kgo/spectrum.hpp"
#include "kgo/tridiag.hpp"

namespace kgo {

struct GridSpec
{
    double x_min = 1e-4;
    double x_max = 10.0;
    int points = 20000; ///< interior nodes

    void validate() const;
    double spacing() const noexcept { return (x_max - x_min) / (points + 1); }
    double node(int i) const noexcept { return x_min + (i + 1) * spacing(); }
};

/// x_min = r_min / sqrt(freq) with r_min^a ~ 1e-6 in [1e-12, 1e-4], x_max from
/// the wave-function default, at energy E.
GridSpec default_grid(const Scenario& sc, double energy, int points = 20000);

/// -D^2 + diag(V) on the interior nodes of the grid.
SymTridiag fd_operator(const std::function<double(double)>& potential, const GridSpec& grid);

/// Lowest `count` eigenvalues of -D^2 + V, ascending.
std::vector<double> fd_eigs(const std::function<double(double)>& potential, const GridSpec& grid, int count);

struct OracleResult
{
    double energy = 0.0;
    int eig_index = -1;
    double eigenvalue = 0.0;
    double mismatch = 0.0; ///< |eig + beta0(E)|
    double beta0 = 0.0;
    double overlap = 0.0;  ///< |<fd, analytic>| of unit vectors, NaN if psi unavailable
    GridSpec grid;

    double relative_mismatch() const;
};

/// Roots in [e_lo, e_hi] of eig_j(E) + beta0(E) found by scan and bisection.
std::vector<OracleResult> self_consistent_energy(const Scenario& sc, int j, double e_lo, double e_hi,
                                                 const GridSpec& grid, int scan_points = 80);

/// Nearest FD eigenvalue to -beta0 at the bound-state energy, plus the
/// overlap of its eigenvector with the sampled analytic wave function.
OracleResult verify(const BoundState& bs, const Scenario& sc, const GridSpec& grid);
OracleResult verify(const BoundState& bs, const Scenario& sc);

} // namespace kgo
