#include "kgo/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kgo/error.hpp"

namespace kgo {

namespace {

constexpr double series_tol = 1e-13;

} // namespace

RadialFunction::RadialFunction(const ReducedProblem& reduced, int n, double x_max)
    : reduced_(reduced)
    , sqrt_freq_(std::sqrt(reduced.freq))
{
    const HeunParams hp = heun_params(reduced);
    try {
        // A polynomial state needs only n + 3 coefficients to be recognized.
        HeunSeries short_series = series_coefficients(hp, n + 3);
        series_ = short_series.truncated_at ? std::move(short_series)
                                            : series_for(hp, sqrt_freq_ * x_max, series_tol);
    } catch (const Error& err) {
        throw Error(Errc::eval_error, err.what());
    }
}

double RadialFunction::operator()(double x) const
{
    if (x <= 0.0) {
        return 0.0;
    }
    const double r = sqrt_freq_ * x;
    double h;
    try {
        h = evaluate(series_, r, series_tol);
    } catch (const Error& err) {
        throw Error(Errc::eval_error, err.what());
    }
    const double envelope =
        std::exp(reduced_.exponent * std::log(r) - 0.5 * (reduced_.b_heun * r + r * r));
    const double value = envelope * h;
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os << "non-finite wave function at x = " << x;
        throw Error(Errc::eval_error, os.str());
    }
    return value;
}

double turning_point(const ReducedProblem& r, int n)
{
    const double half_b = 0.5 * std::abs(r.b_heun);
    const double inner = half_b * half_b + std::abs(r.beta0) / r.freq + std::abs(r.c_heun) +
                         2.0 * n + 2.0 * r.exponent + 1.0;
    return (half_b + std::sqrt(inner)) / std::sqrt(r.freq);
}

double default_x_max(const BoundState& bs)
{
    const double root = std::sqrt(bs.reduced.freq);
    return std::max(3.0 * turning_point(bs.reduced, bs.n), 6.0 / root);
}

WaveTable assemble(const BoundState& bs, const Scenario& sc, double x_max, int samples)
{
    if (samples < min_samples) {
        throw Error(Errc::invalid_params, "wave function needs at least 16 samples");
    }
    if (!(x_max > 0.0)) {
        throw Error(Errc::invalid_params, "x_max must be > 0");
    }
    resolved(sc, bs).validate();
    const RadialFunction psi(bs.reduced, bs.n, x_max);

    WaveTable wt;
    wt.x_max = x_max;
    wt.bound_state = bs;
    wt.xs.resize(static_cast<std::size_t>(samples));
    wt.psi.resize(wt.xs.size());
    for (int i = 0; i < samples; ++i) {
        const double x = x_max * static_cast<double>(i + 1) / samples;
        wt.xs[static_cast<std::size_t>(i)] = x;
        wt.psi[static_cast<std::size_t>(i)] = psi(x);
    }
    wt.norm = std::sqrt(norm_squared(wt));
    wt.nodes = count_nodes(wt);
    return wt;
}

double norm_squared(const WaveTable& wt)
{
    const std::size_t intervals = wt.psi.size();
    if (intervals < 2) {
        return 0.0;
    }
    const double h = wt.x_max / static_cast<double>(intervals);
    // f[0] is the origin, where psi vanishes.
    const auto f = [&](std::size_t i) { return i == 0 ? 0.0 : wt.psi[i - 1] * wt.psi[i - 1]; };
    const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
    double sum = 0.0;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
        sum += f(i) + 4.0 * f(i + 1) + f(i + 2);
    }
    sum *= h / 3.0;
    if (simpson_end != intervals) {
        const std::size_t i = simpson_end;
        sum += 3.0 * h / 8.0 * (f(i) + 3.0 * f(i + 1) + 3.0 * f(i + 2) + f(i + 3));
    }
    return sum;
}

WaveTable normalize(WaveTable wt)
{
    const double norm = std::sqrt(norm_squared(wt));
    if (!(norm > 1e-300) || !std::isfinite(norm)) {
        throw Error(Errc::zero_norm, "wave function norm vanishes or is not finite");
    }
    for (double& v : wt.psi) {
        v /= norm;
    }
    wt.norm = norm;
    return wt;
}

int count_nodes(const WaveTable& wt)
{
    double peak = 0.0;
    for (double v : wt.psi) {
        peak = std::max(peak, std::abs(v));
    }
    const double floor = 1e-12 * peak;
    int nodes = 0;
    int last_sign = 0;
    for (double v : wt.psi) {
        if (std::abs(v) <= floor) {
            continue;
        }
        const int sign = v > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) {
            ++nodes;
        }
        last_sign = sign;
    }
    return nodes;
}

} // namespace kgo
