#pragma once

// Biconfluent Heun engine.
//
// H(z) = sum_j A_j z^j solves
//   z H'' + (1 + a - b z - 2 z^2) H' + [(c - a - 2) z - (d + b (1 + a)) / 2] H = 0
// with A_0 = 1 and, writing e = (1 + a) / 2, g = d / 2, N = c - a - 2,
//   2 e A_1 = (b e + g) A_0
//   (k + 1)(k + 2e) A_{k+1} = [b (k + e) + g] A_k + [2 (k - 1) - N] A_{k-1},  k >= 1.
// The series collapses to a degree-n polynomial iff N = 2n and A_{n+1} = 0.

#include <optional>
#include <vector>

#include "kgo/params.hpp"

namespace kgo {

struct HeunParams
{
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    double exponent() const noexcept { return 0.5 * (1.0 + a); }
    double g() const noexcept { return 0.5 * d; }
    /// c - a - 2; the first quantization condition asks this to equal 2n.
    double degree_gap() const noexcept { return c - a - 2.0; }
};

HeunParams heun_params(const ReducedProblem& r) noexcept;

/// Relative magnitude below which a coefficient counts as zero.
inline constexpr double coeff_zero_tol = 1e-10;

struct HeunSeries
{
    std::vector<double> coeffs; ///< A_0 .. A_{count-1}, A_0 = 1
    HeunParams params;
    /// n with c - a - 2 = 2n and A_{n+1} ~ A_{n+2} ~ 0 relative to max |A_0..A_n|.
    std::optional<int> truncated_at;

    /// max |A_j| over j <= n (or over all coefficients when n < 0).
    double max_abs(int n = -1) const;
};

HeunSeries series_coefficients(const HeunParams& hp, int count);

/// Sum of A_j z^j. Exact polynomial sum for a truncated series; otherwise
/// throws Error(not_converged) when the geometric tail estimate exceeds
/// tol * max(1, |sum|).
double evaluate(const HeunSeries& hs, double z, double tol);

struct HeunValue
{
    double value;
    double first;
    double second;
};

/// H, H', H'' by term-wise differentiation, same convergence control as evaluate.
HeunValue evaluate_derivatives(const HeunSeries& hs, double z, double tol);

/// Series with enough terms for evaluate at |z| <= z_max, grown up to max_count.
HeunSeries series_for(const HeunParams& hp, double z_max, double tol, int max_count = 4000);

struct TruncationResidual
{
    double coeff;  ///< A_{n+1}
    double degree; ///< c - a - 2 - 2n
};

TruncationResidual truncation_residual(const HeunParams& hp, int n);

/// D_{n+1} of the (n+1)x(n+1) tridiagonal determinant encoding A_{n+1} = 0:
/// diagonal -(b (e + j) + g), super-diagonal 1, sub-diagonal 2(j+1)(j+2e)(n-j).
double continuant(const HeunParams& hp, int n);

/// All n+1 real b with continuant(b) = 0 for fixed (a, d), ascending.
std::vector<double> continuant_roots(double a, double d, int n);

} // namespace kgo
