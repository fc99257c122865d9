#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "spiked/rng.hpp"
#include "spiked/tridiagonal.hpp"

namespace spiked {

/// Finite-difference discretization of -d^2/dx^2 + x + (2/sqrt(beta)) B'(x) on [0, L]
/// with psi'(0) = w psi(0) and psi(L) = 0. w = +infinity means Dirichlet at 0.
/// beta = +infinity switches the noise off.
struct RobinSAOConfig {
    double beta = 1.0;
    double w = std::numeric_limits<double>::infinity();
    double L = 20.0;
    double h = 0.02;
    std::size_t k = 1;

    /// L = 20 + 5 max(0, -w), h = 0.02, k = 1.
    static RobinSAOConfig with_defaults(double beta, double w);
    bool dirichlet() const noexcept { return w == std::numeric_limits<double>::infinity(); }
    /// Number of grid intervals L/h; throws InputError if not integral or if h > 0.5.
    std::size_t intervals() const;
};

/// Symmetric tridiagonal for one noise realization (noise omitted when beta is infinite).
/// Dirichlet: unknowns at x_1..x_{M-1}. Robin: unknowns at x_0..x_{M-1}; the ghost value
/// psi_{-1} = psi_1 - 2 h w psi_0 is eliminated into row 0 and the row rescaled to keep
/// the matrix symmetric.
SymTridiag stochastic_airy_matrix(const RobinSAOConfig& cfg, Rng& rng);

/// The k smallest eigenvalues, increasing.
std::vector<double> sample_stochastic_airy(const RobinSAOConfig& cfg, Rng& rng);

}  // namespace spiked
