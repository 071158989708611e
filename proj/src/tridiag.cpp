#include "kgo/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kgo/error.hpp"

namespace kgo {

SymTridiag::SymTridiag(std::vector<double> diag, std::vector<double> off)
    : diag_(std::move(diag))
    , off_(std::move(off))
{
    if (diag_.empty() || off_.size() + 1 != diag_.size()) {
        throw Error(Errc::invalid_params, "tridiagonal: off-diagonal length must be size - 1");
    }
    off_sq_.resize(off_.size());
    std::transform(off_.begin(), off_.end(), off_sq_.begin(), [](double e) { return e * e; });
}

std::size_t SymTridiag::count_below(double lambda) const
{
    // Signs of the LDL^T pivots of (T - lambda I).
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    std::size_t negatives = 0;
    double q = diag_[0] - lambda;
    for (std::size_t i = 0;; ++i) {
        if (q == 0.0) {
            q = -tiny;
        }
        if (q < 0.0) {
            ++negatives;
        }
        if (i + 1 == diag_.size()) {
            break;
        }
        q = diag_[i + 1] - lambda - off_sq_[i] / q;
    }
    return negatives;
}

std::pair<double, double> SymTridiag::bounds() const noexcept
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const std::size_t n = diag_.size();
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(off_[i - 1]);
        if (i + 1 < n) r += std::abs(off_[i]);
        lo = std::min(lo, diag_[i] - r);
        hi = std::max(hi, diag_[i] + r);
    }
    const double pad = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    return {lo - pad, hi + pad};
}

double SymTridiag::eigenvalue(std::size_t k) const
{
    if (k >= diag_.size()) {
        throw Error(Errc::invalid_params, "tridiagonal: eigenvalue index out of range");
    }
    auto [lo, hi] = bounds();
    // Invariant: count_below(lo) <= k < count_below(hi).
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (count_below(mid) > k) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> SymTridiag::lowest(std::size_t count) const
{
    count = std::min(count, diag_.size());
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = eigenvalue(k);
    }
    return out;
}

std::vector<double> SymTridiag::eigenvector(double lambda) const
{
    // Inverse iteration on (T - lambda I) with a partially pivoted LU,
    // the shift nudged off the eigenvalue so the factorization stays finite.
    const std::size_t n = diag_.size();
    const auto [lo, hi] = bounds();
    const double shift = lambda + 1e-13 * std::max(1.0, hi - lo);

    // Rows of U hold up to three nonzeros: u0 (diag), u1, u2 (fill-in from a swap).
    std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0), mult(n, 0.0);
    std::vector<char> swapped(n, 0);
    {
        double a = diag_[0] - shift;
        double c = n > 1 ? off_[0] : 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double sub = off_[i];
            const double next_diag = diag_[i + 1] - shift;
            const double next_super = i + 2 < n ? off_[i + 1] : 0.0;
            if (std::abs(a) >= std::abs(sub)) {
                const double m = a != 0.0 ? sub / a : 0.0;
                u0[i] = a;
                u1[i] = c;
                mult[i] = m;
                a = next_diag - m * c;
                c = next_super;
            } else {
                swapped[i] = 1;
                const double m = a / sub;
                u0[i] = sub;
                u1[i] = next_diag;
                u2[i] = next_super;
                mult[i] = m;
                a = c - m * next_diag;
                c = -m * next_super;
            }
        }
        u0[n - 1] = a;
    }
    const double floor = std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
    for (auto& p : u0) {
        if (std::abs(p) < floor) {
            p = p < 0.0 ? -floor : floor;
        }
    }

    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (int iter = 0; iter < 4; ++iter) {
        // Forward elimination with the recorded row swaps.
        std::vector<double> y = x;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (swapped[i]) {
                std::swap(y[i], y[i + 1]);
            }
            y[i + 1] -= mult[i] * y[i];
        }
        // Back substitution.
        for (std::size_t ii = n; ii-- > 0;) {
            double s = y[ii];
            if (ii + 1 < n) s -= u1[ii] * y[ii + 1];
            if (ii + 2 < n) s -= u2[ii] * y[ii + 2];
            y[ii] = s / u0[ii];
        }
        const double norm = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = y[i] / norm;
        }
    }
    return x;
}

} // namespace kgo
