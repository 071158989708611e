#pragma once

// psi(x) = (sqrt(w) x)^e exp[-(b sqrt(w) x + w x^2) / 2] H(sqrt(w) x)
// on the half-line x > 0, with w = freq and e the Frobenius exponent.

#include <vector>

#include "kgo/heun.hpp"
#include "kgo/spectrum.hpp"

namespace kgo {

/// Radial function of one bound state, evaluable at any x >= 0.
class RadialFunction
{
  public:
    RadialFunction(const ReducedProblem& reduced, int n, double x_max);

    double operator()(double x) const;

    const HeunSeries& series() const noexcept { return series_; }

  private:
    ReducedProblem reduced_;
    HeunSeries series_;
    double sqrt_freq_;
};

struct WaveTable
{
    std::vector<double> xs;
    std::vector<double> psi;
    double norm = 0.0;
    int nodes = 0;
    double x_max = 0.0;
    BoundState bound_state;
};

inline constexpr int default_samples = 4001;
inline constexpr int min_samples = 16;

/// Outer turning-point estimate in x for a reduced problem of degree n.
double turning_point(const ReducedProblem& r, int n);

/// 3 x turning point, at least 6 / sqrt(freq).
double default_x_max(const BoundState& bs);

/// Samples x_i = i x_max / samples, i = 1..samples. Not normalized.
WaveTable assemble(const BoundState& bs, const Scenario& sc, double x_max, int samples = default_samples);

/// Composite Simpson integral of psi^2 over [0, x_max] (psi(0) = 0).
double norm_squared(const WaveTable& wt);

WaveTable normalize(WaveTable wt);

int count_nodes(const WaveTable& wt);

} // namespace kgo
