#pragma once

#include <vector>

namespace spiked {

/// Soft-edge density of the y species (Laguerre symplectic, weight e^{-x/2}):
///   K(X, X) / 2 - Ai(X) int_X^inf Ai / 4.   Requires X >= -10.
double density_species_y(double X);

/// GOE soft-edge density K(X, X) + Ai(X) int_{-inf}^X Ai / 2, the w = 0 blind density.
double goe_soft_edge_density(double X);

/// kConvergent accepts only w <= 0, where the t-integral converges. kContinued also accepts
/// w > 0 by using the continuation Phi(y) = e^{p^3/3 - p y} - int_y^inf e^{p(t-y)} Ai(t) dt,
/// which is entire in p.
enum class BlindDomain { kConvergent, kContinued };

/// Parity-blind soft-edge density of the interlaced beta = 4 pair for w <= 0.
///
/// With p = -w/2 and Phi(y) = int_{-inf}^y e^{p(s-y)} Ai(s) ds the three-term kernel formula
/// reduces, after exchanging the order of integration, to
///   K(X,X)/2 - (1/2) int_X^inf Ai'(y) Phi(y) dy - (w/4) int_X^inf AiInt(y) (Ai(y) - p Phi(y)) dy
/// where AiInt(y) = int_y^inf Ai. Phi solves Phi' = Ai - p Phi and is tabulated left to right
/// with an exact exponential step per cell, so no truncation of the t-integral is needed.
/// Construction costs a few hundred thousand Airy evaluations; evaluation is cheap.
class BlindDensityCurve {
public:
    /// Throws InputError for w > 0 under kConvergent (the kernel formula diverges), for
    /// |w| > 12 under kContinued, or for x_min < -20.
    explicit BlindDensityCurve(double w, double x_min = -8.0, BlindDomain domain = BlindDomain::kConvergent);

    double w() const noexcept { return w_; }
    double x_min() const noexcept { return x_min_; }
    /// Density at X >= x_min.
    double operator()(double X) const;
    /// Phi at X >= x_min, exposed for tests.
    double phi(double X) const;

private:
    double w_;
    double p_;
    double x_min_;
    double step_;
    std::vector<double> phi_;  // Phi at grid nodes
    std::vector<double> s2_;   // int_{node}^inf Ai' Phi
    std::vector<double> s3_;   // int_{node}^inf AiInt (Ai - p Phi)
};

/// Blind density of the beta = 4 pair in the parametrization of spiked_edge_cdf, i.e. for
/// spikes b = 2 - 2^{1/3} w / N^{1/3}. The kernel parameter is -2 w, continued where it is
/// positive; for large X the curve reproduces d/dX spiked_edge_cdf(X; w), the density of
/// the largest eigenvalue. Requires |w| <= 6.
BlindDensityCurve spiked_blind_density(double w_edge, double x_min = -8.0);

/// One-shot evaluation, w <= 0 and X >= -8 (builds a curve starting at X).
double density_blind(double X, double w);

/// Literal evaluation of the three-term kernel formula with kernel derivatives computed by
/// quadrature and the t-integral truncated at depth T: T = 40 for w = 0, otherwise where
/// e^{w(X-t)/2} < 1e-10. Slow (seconds per point); used to cross-check BlindDensityCurve.
double density_blind_direct(double X, double w);

/// d/dY K(X, Y) = int_0^inf Ai(u + X) Ai'(u + Y) du by composite Gauss-Legendre.
double airy_kernel_dy(double X, double Y);

}  // namespace spiked
