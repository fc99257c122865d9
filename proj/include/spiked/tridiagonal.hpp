#pragma once

#include <cstddef>
#include <vector>

#include "spiked/spectrum.hpp"

namespace spiked {

/// Real symmetric tridiagonal matrix. diag[0] is the top-left entry.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> offdiag;  // offdiag[i] couples rows i and i+1

    std::size_t size() const noexcept { return diag.size(); }
    double trace() const noexcept;
    /// max row sum of absolute values; bounds the spectral radius.
    double norm_inf() const noexcept;
    /// Throws InputError on shape mismatch, empty matrix, or non-finite entries.
    void validate() const;
};

/// Number of eigenvalues strictly less than x, from the LDL^T pivot signs of T - xI.
std::size_t sturm_count(const SymTridiag& t, double x);

/// All eigenvalues, strictly decreasing, by Sturm bisection.
SpectrumSample tridiag_eigenvalues(const SymTridiag& t);

/// The k largest eigenvalues, decreasing. Cost O(k * size * iterations).
std::vector<double> tridiag_top_eigenvalues(const SymTridiag& t, std::size_t k);

/// The k smallest eigenvalues, increasing.
std::vector<double> tridiag_bottom_eigenvalues(const SymTridiag& t, std::size_t k);

/// Absolute first components q_j of the normalized eigenvectors, paired with
/// tridiag_eigenvalues(t).values[j]. Uses
///   q_j^2 = prod_k (lambda_j - mu_k) / prod_{k != j} (lambda_j - lambda_k)
/// with mu the eigenvalues of t with its first row and column removed.
/// Requires every offdiag entry to be nonzero.
std::vector<double> tridiag_first_components(const SymTridiag& t);

}  // namespace spiked
