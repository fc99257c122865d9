#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spiked/sampling.hpp"
#include "spiked/spectrum.hpp"

namespace spiked {

/// Trapezoid quadrature of the line integral int e^{w} prod (w - p_j)^{-beta/2} dw along
/// Re w = sigma. sigma is placed to the right of every branch point (for b > 1 the points
/// mu lambda_j lie right of the imaginary axis and the line is shifted past them; the
/// integral is unchanged for b <= 1). The integrand decays only like |t|^{-N beta/2}, so
/// the cut-off at t_max is closed with an asymptotic tail expansion plus Euler-Maclaurin
/// end corrections.
struct ContourQuadrature {
    /// Cut-off of the t-integral; 0 selects it adaptively (doubling from the initial grid
    /// until two estimates agree to rel_tol).
    double t_max = 0.0;
    /// Initial node count on [0, t_max]; at least 64.
    std::size_t n_nodes = 256;
    double rel_tol = 1e-10;
    /// Upper bound on nodes before giving up with NumericalError.
    std::size_t max_nodes = std::size_t{1} << 22;

    void validate() const;
};

/// Result of one contour evaluation. The integral equals value * exp(log_scale).
struct ContourResult {
    double value = 0.0;
    double log_scale = 0.0;
    double error_estimate = 0.0;  // absolute, in units of exp(log_scale)
    std::size_t nodes = 0;
    double t_max = 0.0;
};

/// (1/2 pi) int_R e^{it} prod_j (it - mu lambda_j)^{-beta/2} dt, analytically continued in mu
/// (the line is moved right of the branch points). Requires N beta/2 > 1.
ContourResult spiked_contour_integral(double beta, double mu, std::span<const double> lambda,
                                      const ContourQuadrature& quad = {});

/// log of prod lambda_j^{beta(n-N+1)/2-1} e^{-lambda_j/2} prod_{j<k} (lambda_j - lambda_k)^beta.
double log_spiked_prefactor(const SpikeConfig& cfg, std::span<const double> lambda);

/// Unnormalized spiked density: prefactor times 2 pi times the contour integral above with
/// mu = (b-1)/(2b). Throws NumericalError if the quadrature does not converge to rel 1e-6
/// or returns a value below -1e-8 of its scale; tiny negative values are clamped to 0.
double spiked_pdf(const SpikeConfig& cfg, const SpectrumSample& lambda, const ContourQuadrature& quad = {});
/// Natural log of spiked_pdf (-inf when the integral is 0 after clamping).
double log_spiked_pdf(const SpikeConfig& cfg, const SpectrumSample& lambda, const ContourQuadrature& quad = {});

/// The hypergeometric function 1F1^{(2/beta)}(beta/2; N beta/2; c x) of N variables,
/// normalized to 1 at c = 0. Evaluated as Gamma(N beta/2) times the inverse Laplace integral
/// (1/2 pi i) int e^{cw} prod (w - x_j)^{-beta/2} dw, with the Bromwich line deformed onto a
/// left-opening hyperbola (exponential convergence in the node count). Requires x.size() == N.
double hyp1f1_spiked(double beta, std::size_t N, double c, const SpectrumSample& x);

/// Residue form at beta = 2: (N-1)!/c^{N-1} sum_j e^{c x_j} / prod_{k != j} (x_j - x_k).
/// Throws NumericalError when two x_j are closer than 1e-10 of their scale or the sum loses
/// more than 8 digits to cancellation.
double hyp1f1_residue_beta2(double c, const SpectrumSample& x);

/// Joint density of an interlaced pair, unnormalized. y.size() == N-1 selects the zero-block
/// form (requires cfg.n >= N), y.size() == N the form without it. Returns 0 off support.
double joint_pdf(const SpikeConfig& cfg, const InterlacedPair& pair);
double log_joint_pdf(const SpikeConfig& cfg, const InterlacedPair& pair);

/// Normalized Dixon-Anderson density of y (N-1 values) given x (N values), interlacing with
/// y_N := 0: Gamma(N beta/2)/Gamma(beta/2)^N prod(y_j-y_k) / prod(x_j-x_k)^{beta-1}
/// prod |y_i - x_j|^{beta/2-1}. 0 off support.
double da_conditional_pdf(double beta, const SpectrumSample& x, const SpectrumSample& y);
double log_da_conditional_pdf(double beta, const SpectrumSample& x, const SpectrumSample& y);

/// exp(-s sum_j 1/(2 b_j)).
double hard_edge_gap(double s, std::span<const double> spikes);

}  // namespace spiked
