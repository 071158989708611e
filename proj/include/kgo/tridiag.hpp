#pragma once

// Symmetric tridiagonal matrices: Sturm-sequence bisection for selected
// eigenvalues and inverse iteration for eigenvectors.

#include <span>
#include <utility>
#include <vector>

namespace kgo {

class SymTridiag
{
  public:
    /// `off[i]` couples rows i and i+1; off.size() == diag.size() - 1.
    SymTridiag(std::vector<double> diag, std::vector<double> off);

    std::size_t size() const noexcept { return diag_.size(); }
    std::span<const double> diag() const noexcept { return diag_; }
    std::span<const double> off() const noexcept { return off_; }

    /// Number of eigenvalues strictly below `lambda`.
    std::size_t count_below(double lambda) const;

    /// Gershgorin enclosure of the spectrum.
    std::pair<double, double> bounds() const noexcept;

    /// k-th smallest eigenvalue (k = 0 is the lowest).
    double eigenvalue(std::size_t k) const;

    /// Lowest `count` eigenvalues, ascending.
    std::vector<double> lowest(std::size_t count) const;

    /// Unit-norm (Euclidean) eigenvector for an accurate eigenvalue estimate.
    std::vector<double> eigenvector(double lambda) const;

  private:
    std::vector<double> diag_;
    std::vector<double> off_;
    std::vector<double> off_sq_;
};

} // namespace kgo
