#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spiked/painleve.hpp"
#include "spiked/sampling.hpp"
#include "spiked/stochastic_airy.hpp"

namespace spiked {

// ---------------------------------------------------------------------------------------
// Kolmogorov-Smirnov

struct KSResult {
    double statistic = 0.0;  // sup |F_a - F_b|
    std::size_t n = 0;
    std::size_t m = 0;  // 0 for the one-sample test
    double p_value = 1.0;
};

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// Exact sup-distance of the two empirical CDFs, asymptotic p-value with the Stephens
/// small-sample correction. Both inputs sorted ascending with at least 10 entries.
KSResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// a sorted ascending, at least 10 entries. Throws InputError if cdf decreases along a
/// (by more than 1e-12) or leaves [-1e-9, 1 + 1e-9].
KSResult ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf);

// ---------------------------------------------------------------------------------------
// Sampling fan-out

/// Runs fn(i) for i in [0, n) on min(threads, n) workers; threads = 0 uses the hardware
/// concurrency. The first exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

enum class Construction { kBidiagonal, kSecular, kPencil, kMultiSpike, kSao };

std::string_view construction_name(Construction c);
/// Accepts bidiagonal, secular, pencil, multispike, sao.
Construction parse_construction(std::string_view name);

struct BatchOptions {
    std::size_t threads = 0;
    ZeroMassScale zero_scale = ZeroMassScale::kChiSquare;
    PencilSpikeFactor pencil_factor = PencilSpikeFactor::kLinear;
};

/// n_samples spectra (each decreasing). Sample i draws from Rng(seed, hash_tag(name), i),
/// so output is independent of the thread count. Sampler errors are rethrown with the
/// construction name prefixed. kSao is rejected here; use sample_sao_batch.
std::vector<std::vector<double>> sample_batch(Construction c, const SpikeConfig& cfg, std::size_t n_samples,
                                              std::uint64_t seed, const BatchOptions& opt = {});

/// The k smallest SAO eigenvalues per draw, increasing.
std::vector<std::vector<double>> sample_sao_batch(const RobinSAOConfig& cfg, std::size_t n_samples,
                                                  std::uint64_t seed, std::size_t threads = 0);

// ---------------------------------------------------------------------------------------
// Reports

struct Comparison {
    std::string name;
    double statistic = 0.0;
    double p_value = std::numeric_limits<double>::quiet_NaN();  // NaN when not a test
    double threshold = 0.0;  // significance level, or tolerance on statistic
    bool pass = false;
    nlohmann::json detail = nlohmann::json::object();
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<Comparison> comparisons;
    /// Comparisons reported for information only; they do not affect pass().
    std::vector<Comparison> diagnostics;

    bool pass() const noexcept;
    nlohmann::json to_json() const;
};

/// KS comparison passing when p >= level.
Comparison ks_comparison(std::string name, const KSResult& ks, double level);

// ---------------------------------------------------------------------------------------
// Suites

struct EquivalenceOptions {
    double alpha = 1e-3;
    std::size_t order_stats = 3;  // top k and bottom k marginals
    BatchOptions batch;
    /// When non-empty, sample CSVs of every construction are written here if the suite fails.
    std::string dump_dir;
};

/// Bidiagonal, secular and pencil samples on disjoint streams; pairwise two-sample KS on
/// the top and bottom order statistics and on the pooled spectrum, Bonferroni at alpha.
SuiteReport equivalence_suite(const SpikeConfig& cfg, std::size_t n_samples, std::uint64_t seed,
                              const EquivalenceOptions& opt = {});

/// Minimum eigenvalue of the multi-spike construction at n = N - 1 + 2/beta: survival
/// frequency at each s within 3 binomial standard errors of exp(-s sum 1/(2 b_j)), plus a
/// one-sample KS against 1 - exp(-s sum 1/(2 b_j)).
SuiteReport hardedge_suite(double beta, const std::vector<double>& spikes, std::size_t n_samples,
                           std::uint64_t seed, const std::vector<double>& s_values = {0.1, 0.3, 1.0},
                           std::size_t threads = 0);

/// Soft-edge scaling (lambda - 16N) / (4 (4N)^{1/3}) of the beta = 4 spiked pair.
double spiked_soft_edge_scale(double lambda, std::size_t N);
/// b = 2 - 2^{1/3} w / N^{1/3}.
double spike_for_w(double w, std::size_t N);

/// Scaled largest eigenvalue sqrt(2) n^{1/6} (lambda - sqrt(2n - 1)) of GOE tridiagonal draws
/// at size n = n_goe, and (spiked_soft_edge_scale) of the
/// beta = 4 spiked pair at b = 2 and size n_spiked, each KS-tested against tw_goe_cdf.
SuiteReport softedge_w0_suite(const PainleveTable& table, std::size_t n_samples, std::uint64_t seed,
                              std::size_t n_goe = 400, std::size_t n_spiked = 200, double alpha = 1e-3,
                              std::size_t threads = 0);

/// For each w, scaled largest eigenvalue of the beta = 4 spiked pair at b = spike_for_w(w, N)
/// KS-tested against spiked_edge_cdf(table, ., w).
SuiteReport softedge_w_suite(const PainleveTable& table, const std::vector<double>& w_values, std::size_t N,
                             std::size_t n_samples, std::uint64_t seed, double alpha = 1e-3,
                             std::size_t threads = 0);

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    double density = 0.0;  // count / (draws * width)
    double sigma = 0.0;    // sqrt(count) / (draws * width)
    double expected = 0.0;
};

/// Blind density: w = 0 curve vs the GOE closed form on [-6, 2] (tolerance 1e-4), then the
/// pooled-species Monte Carlo histogram at b = spike_for_w(w, N) on [x_lo, x_hi] against
/// spiked_blind_density(w), each bin within 5% + 3 sigma. For w <= 0 a diagnostic counts
/// the bins that miss the kernel formula evaluated at parameter w directly.
SuiteReport density_blind_suite(double w, std::size_t N, std::size_t n_draws, std::uint64_t seed,
                                double x_lo = -4.0, double x_hi = 0.0, double bin_width = 0.25,
                                std::size_t threads = 0, std::vector<HistogramBin>* histogram = nullptr);

/// Residual of the beta = 4 boundary-value equation on the F^box field over
/// [x_lo, x_hi] x [w_lo, w_hi] at step h and h/2. Passes when the smaller of the two sign
/// conventions is below tol at step h and it decreases at h/2. Diagnostics report the
/// rescaled field F^box(2^{2/3} x; 2^{1/3} w).
SuiteReport pde_residual_suite(const PainleveTable& table, double h = 0.02, double tol = 5e-3,
                               double x_lo = -4.0, double x_hi = 2.0, double w_lo = -2.0, double w_hi = 2.0);

/// Deterministic Dirichlet ground state at step h and h/2 against the first Airy zero
/// magnitude; then the -lambda_min law at (beta, w) KS-tested against
/// spiked_edge_cdf(table, ., w_edge).
SuiteReport stochastic_airy_suite(const PainleveTable& table, double beta, double w, double w_edge,
                                  std::size_t n_samples, std::uint64_t seed, double alpha = 1e-3,
                                  std::size_t threads = 0);

// ---------------------------------------------------------------------------------------
// Files

/// Header lambda_1,...,lambda_k; one row per draw; 17 significant digits.
void write_samples_csv(std::ostream& out, const std::vector<std::vector<double>>& samples,
                       std::string_view column_prefix = "lambda");
/// Header "<x_name>,<y_name>", 17 significant digits.
void write_curve_csv(std::ostream& out, std::string_view x_name, std::string_view y_name,
                     std::span<const double> x, std::span<const double> y);
/// Writes text to path, throwing InputError if the file cannot be opened.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace spiked
