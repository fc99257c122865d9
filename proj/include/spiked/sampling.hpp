#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spiked/pencil.hpp"
#include "spiked/rng.hpp"
#include "spiked/spectrum.hpp"
#include "spiked/tridiagonal.hpp"

namespace spiked {

/// Ensemble parameters shared by all samplers. `n` is a real degree-of-freedom count and
/// may be non-integral for general beta.
struct SpikeConfig {
    double beta = 1.0;
    double n = 1.0;
    std::size_t N = 1;
    std::vector<double> spikes{1.0};

    /// Throws InputError unless beta > 0, N >= 1, every spike > 0 and is finite.
    void validate() const;
    /// The single spike b; throws InputError if spikes.size() != 1.
    double spike() const;
    /// beta (n - N + 1) / 2, the gamma shape of the mass sitting on the zero eigenvalues.
    double zero_shape() const noexcept { return 0.5 * beta * (n - static_cast<double>(N) + 1.0); }
    /// n = N - 1 + 2/beta, the degree of freedom at which the null spectrum has no lambda^k factor.
    static double hard_edge_n(double beta, std::size_t N) noexcept {
        return static_cast<double>(N) - 1.0 + 2.0 / beta;
    }
};

/// Lower bidiagonal factor L of the spiked Laguerre model; the spectrum is that of L L^T.
/// x holds the diagonal (x[0] carries the spike), y the subdiagonal (y[j] = L(j+1, j)).
struct BidiagonalModel {
    std::vector<double> x;
    std::vector<double> y;
};

/// Two eigenvalue lists satisfying x_1 > y_1 > x_2 > ... ; y has N-1 entries when a zero
/// eigenvalue block is present (then x_N > 0), N entries otherwise.
struct InterlacedPair {
    SpectrumSample x;
    SpectrumSample y;
};

/// Scale of the gamma variate attached to the zero block in the secular equation.
/// kChiSquare (scale 2) matches every other variate; kPrinted (scale 1/2) is kept so the
/// equivalence harness can show it produces the wrong ensemble.
enum class ZeroMassScale { kChiSquare, kPrinted };

/// How the spike enters the last pencil entries a_N and b_{N-1}. kLinear (factor b) is the
/// factor that reproduces the secular characteristic polynomial; kSqrt (factor sqrt(b)) is
/// kept for falsification runs.
enum class PencilSpikeFactor { kLinear, kSqrt };

inline double zero_mass_scale_value(ZeroMassScale s) noexcept { return s == ZeroMassScale::kChiSquare ? 2.0 : 0.5; }

// ---------------------------------------------------------------------------------------
// Bidiagonal construction

/// x_1 = sqrt(b) chi_{beta n}, x_j = chi_{beta(n-j+1)} (j = 2..N), y_j = chi_{beta(N-j)}.
BidiagonalModel sample_bidiagonal(const SpikeConfig& cfg, Rng& rng);

/// L L^T as a symmetric tridiagonal (top-left entry x_1^2).
SymTridiag gram_matrix(const BidiagonalModel& m);

SpectrumSample spectrum_from_bidiagonal(const BidiagonalModel& m);

/// Hermite beta-ensemble tridiagonal: diagonal N(0, 2)/sqrt(2), off-diagonal
/// chi_{beta(N-k)}/sqrt(2). For beta = 1 this has the GOE spectrum with edge sqrt(2N).
SymTridiag sample_hermite_tridiagonal(double beta, std::size_t N, Rng& rng);

// ---------------------------------------------------------------------------------------
// Secular-equation construction

/// Roots of 0 = 1 + b ( -q0/lambda + sum_j q_j / (y_j - lambda) ), decreasing.
/// With q0 = 0 and `zero_block` false the -q0/lambda term is absent and there are
/// y.size() roots; otherwise y.size() + 1 roots with the last in (0, y_last).
/// Deterministic; every root is strictly inside its bracket.
std::vector<double> secular_roots(std::span<const double> y, double b, double q0, std::span<const double> q,
                                  bool zero_block);

/// Draws q_j ~ Gamma(beta/2, 2) and, when zero_shape > 0, q0 ~ Gamma(zero_shape, scale),
/// then returns the secular roots. zero_shape == 0 selects the no-zero-block equation.
SpectrumSample rank_one_update(const SpectrumSample& y, double b, double zero_shape, double beta, Rng& rng,
                               ZeroMassScale scale = ZeroMassScale::kChiSquare);

/// n >= N: y (N-1 values) is the null spectrum with (n, N-1) and x solves the zero-block
/// secular equation. n < N: requires n = N - 1 + 2/beta; y (N values) is the null spectrum
/// with (n, N) and x solves the equation without a zero block.
InterlacedPair sample_secular_pair(const SpikeConfig& cfg, Rng& rng,
                                   ZeroMassScale scale = ZeroMassScale::kChiSquare);

/// Top `k` values of both species of the n < N pair, in law identical to sample_secular_pair.
/// Uses that the first eigenvector components of the null tridiagonal are Dirichlet(beta/2)
/// and independent of its spectrum, so diag(y) + b q q^T is orthogonally similar to
/// T_y + b G e_1 e_1^T with G ~ Gamma(N beta/2, 2). Cost O(k N) per draw.
InterlacedPair sample_secular_pair_top(const SpikeConfig& cfg, std::size_t k, Rng& rng);

/// Spikes b_1..b_N applied one at a time starting from the empty spectrum; step j uses the
/// zero-block equation with zero_shape = beta (n - j + 1)/2.
SpectrumSample sample_multi_spike(const SpikeConfig& cfg, Rng& rng);

// ---------------------------------------------------------------------------------------
// Pencil construction

/// a_j ~ Gamma((N-j) beta/2 + alpha0 + 1, 2), b_j ~ Gamma(j beta/2, 2), with a_N and
/// b_{N-1} multiplied by the spike factor; alpha0 = beta(n-N+1)/2 - 1.
BidiagonalPencil sample_pencil(const SpikeConfig& cfg, Rng& rng,
                               PencilSpikeFactor factor = PencilSpikeFactor::kLinear);

}  // namespace spiked
