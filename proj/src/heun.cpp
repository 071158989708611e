#include "kgo/heun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kgo/error.hpp"
#include "kgo/tridiag.hpp"

namespace kgo {

namespace {

void check_params(const HeunParams& hp)
{
    if (!(1.0 + hp.a > 0.0) || !std::isfinite(hp.a) || !std::isfinite(hp.b) ||
        !std::isfinite(hp.c) || !std::isfinite(hp.d)) {
        std::ostringstream os;
        os << "biconfluent Heun parameters need finite values with 1 + a > 0 (a = " << hp.a << ")";
        throw Error(Errc::invalid_params, os.str());
    }
}

// Termination needs the degree condition N = 2n as well as small A_{n+1},
// A_{n+2}: a fast-decaying entire series also has tiny late coefficients.
std::optional<int> detect_truncation(const std::vector<double>& c, double gap)
{
    const double half = std::round(0.5 * gap);
    if (half < 0.0 || half + 2.0 >= static_cast<double>(c.size()) ||
        std::abs(gap - 2.0 * half) > 1e-8 * std::max(1.0, std::abs(gap))) {
        return std::nullopt;
    }
    const auto n = static_cast<std::size_t>(half);
    double peak = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        peak = std::max(peak, std::abs(c[j]));
    }
    const double cut = coeff_zero_tol * peak;
    if (std::abs(c[n + 1]) <= cut && std::abs(c[n + 2]) <= cut) {
        return static_cast<int>(n);
    }
    return std::nullopt;
}

// Sum of terms t_j = w_j A_j z^{j - shift} and its geometric tail estimate.
// Weights are 1, j, or j(j-1) for the value and the two derivatives.
template <class Weight>
double sum_series(const HeunSeries& hs, double z, double tol, int shift, Weight weight)
{
    const auto& a = hs.coeffs;
    if (hs.truncated_at) {
        const int deg = *hs.truncated_at;
        double acc = 0.0;
        for (int j = deg; j >= shift; --j) {
            acc = acc * z + weight(j) * a[static_cast<std::size_t>(j)];
        }
        return acc;
    }
    if (z == 0.0) {
        return a.size() > static_cast<std::size_t>(shift) ? weight(shift) * a[static_cast<std::size_t>(shift)] : 0.0;
    }
    const int count = static_cast<int>(a.size());
    double sum = 0.0;
    double zp = 1.0;
    std::vector<double> mag(a.size(), 0.0);
    for (int j = shift; j < count; ++j) {
        const double t = weight(j) * a[static_cast<std::size_t>(j)] * zp;
        sum += t;
        mag[static_cast<std::size_t>(j)] = std::abs(t);
        zp *= z;
    }
    if (!std::isfinite(sum)) {
        throw Error(Errc::not_converged, "Heun series overflowed");
    }
    // The three-term recurrence can zero every other coefficient, so compare
    // pair sums two steps apart.
    if (count - shift < 6) {
        throw Error(Errc::not_converged, "too few Heun coefficients for a tail estimate");
    }
    const auto pair = [&](int j) { return mag[static_cast<std::size_t>(j)] + mag[static_cast<std::size_t>(j - 1)]; };
    const double last = pair(count - 1);
    const double prev = pair(count - 3);
    double tail = 0.0;
    if (last > 0.0) {
        const double ratio = prev > 0.0 ? std::sqrt(last / prev) : 1.0;
        tail = ratio < 1.0 ? last * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
    }
    if (tail > tol * std::max(1.0, std::abs(sum))) {
        std::ostringstream os;
        os << "Heun series at z = " << z << " with " << count << " terms: tail estimate " << tail;
        throw Error(Errc::not_converged, os.str());
    }
    return sum;
}

} // namespace

HeunParams heun_params(const ReducedProblem& r) noexcept
{
    return {r.a_heun, r.b_heun, r.c_heun, r.d_heun};
}

double HeunSeries::max_abs(int n) const
{
    const auto last = n < 0 ? coeffs.size() : std::min(coeffs.size(), static_cast<std::size_t>(n) + 1);
    double m = 0.0;
    for (std::size_t j = 0; j < last; ++j) {
        m = std::max(m, std::abs(coeffs[j]));
    }
    return m;
}

HeunSeries series_coefficients(const HeunParams& hp, int count)
{
    check_params(hp);
    if (count < 2) {
        throw Error(Errc::invalid_params, "Heun series needs at least two coefficients");
    }
    const double e = hp.exponent();
    const double g = hp.g();
    const double gap = hp.degree_gap();

    HeunSeries hs;
    hs.params = hp;
    hs.coeffs.resize(static_cast<std::size_t>(count));
    auto& A = hs.coeffs;
    A[0] = 1.0;
    A[1] = (hp.b * e + g) / (2.0 * e);
    for (int k = 1; k + 1 < count; ++k) {
        const double kk = static_cast<double>(k);
        const double lhs = (kk + 1.0) * (kk + 2.0 * e);
        A[static_cast<std::size_t>(k + 1)] =
            ((hp.b * (kk + e) + g) * A[static_cast<std::size_t>(k)] +
             (2.0 * (kk - 1.0) - gap) * A[static_cast<std::size_t>(k - 1)]) /
            lhs;
    }
    hs.truncated_at = detect_truncation(A, gap);
    return hs;
}

double evaluate(const HeunSeries& hs, double z, double tol)
{
    return sum_series(hs, z, tol, 0, [](int) { return 1.0; });
}

HeunValue evaluate_derivatives(const HeunSeries& hs, double z, double tol)
{
    HeunValue v{};
    v.value = sum_series(hs, z, tol, 0, [](int) { return 1.0; });
    v.first = sum_series(hs, z, tol, 1, [](int j) { return static_cast<double>(j); });
    v.second = sum_series(hs, z, tol, 2, [](int j) { return static_cast<double>(j) * (j - 1); });
    return v;
}

HeunSeries series_for(const HeunParams& hp, double z_max, double tol, int max_count)
{
    int count = 64;
    for (;;) {
        HeunSeries hs = series_coefficients(hp, count);
        if (hs.truncated_at) {
            return hs;
        }
        try {
            (void)evaluate(hs, z_max, tol);
            return hs;
        } catch (const Error& err) {
            if (err.code() != Errc::not_converged || count >= max_count) {
                throw;
            }
        }
        count = std::min(2 * count, max_count);
    }
}

TruncationResidual truncation_residual(const HeunParams& hp, int n)
{
    if (n < 0) {
        throw Error(Errc::invalid_params, "truncation degree must be >= 0");
    }
    const HeunSeries hs = series_coefficients(hp, n + 2);
    return {hs.coeffs[static_cast<std::size_t>(n + 1)], hp.degree_gap() - 2.0 * n};
}

double continuant(const HeunParams& hp, int n)
{
    check_params(hp);
    if (n < 0) {
        throw Error(Errc::invalid_params, "continuant order must be >= 0");
    }
    const double e = hp.exponent();
    const double g = hp.g();
    double prev = 1.0;
    double cur = -(hp.b * e + g);
    for (int j = 1; j <= n; ++j) {
        const double jj = static_cast<double>(j);
        const double sub = 2.0 * jj * (jj - 1.0 + 2.0 * e) * (n - j + 1);
        const double next = -(hp.b * (e + jj) + g) * cur - sub * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> continuant_roots(double a, double d, int n)
{
    const HeunParams probe{a, 0.0, 0.0, d};
    check_params(probe);
    if (n < 0) {
        throw Error(Errc::invalid_params, "continuant order must be >= 0");
    }
    // det(J - g I - b W) = 0 with W = diag(e + j): the roots are the
    // eigenvalues of the symmetrized W^{-1/2} (J - g I) W^{-1/2}.
    const double e = probe.exponent();
    const double g = probe.g();
    const auto size = static_cast<std::size_t>(n + 1);
    std::vector<double> diag(size), off(size - 1);
    for (std::size_t j = 0; j < size; ++j) {
        diag[j] = -g / (e + static_cast<double>(j));
    }
    for (std::size_t j = 0; j + 1 < size; ++j) {
        const double jj = static_cast<double>(j);
        const double sigma = 2.0 * (jj + 1.0) * (jj + 2.0 * e) * (n - jj);
        off[j] = std::sqrt(sigma / ((e + jj) * (e + jj + 1.0)));
    }
    return SymTridiag(std::move(diag), std::move(off)).lowest(size);
}

} // namespace kgo
