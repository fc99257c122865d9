#include "spiked/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "spiked/errors.hpp"

namespace spiked {

namespace {

void require_positive_strictly_decreasing(std::span<const double> y, std::string_view where) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
            throw InputError(std::string(where) + ": values must be positive and finite");
        }
        if (i > 0 && !(y[i] < y[i - 1])) {
            throw InputError(std::string(where) + ": values must be strictly decreasing");
        }
    }
}

struct Secular {
    std::span<const double> y;
    std::span<const double> q;
    double b;
    double q0;
    bool zero_block;

    double value(double lam) const {
        double s = zero_block ? -q0 / lam : 0.0;
        for (std::size_t j = 0; j < y.size(); ++j) s += q[j] / (y[j] - lam);
        return 1.0 + b * s;
    }
    double derivative(double lam) const {
        double s = zero_block ? q0 / (lam * lam) : 0.0;
        for (std::size_t j = 0; j < y.size(); ++j) {
            const double d = y[j] - lam;
            s += q[j] / (d * d);
        }
        return b * s;
    }
};

// Root of the increasing function f on (lo, hi), f(lo+) = -inf, f(hi-) > 0.
double solve_bracket(const Secular& f, double lo, double hi) {
    double a = lo, c = hi;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (a + c);
        if (mid <= a || mid >= c || c - a <= 1e-13 * std::abs(mid)) break;
        if (f.value(mid) > 0.0) {
            c = mid;
        } else {
            a = mid;
        }
    }
    double root = 0.5 * (a + c);
    for (int k = 0; k < 2; ++k) {
        const double g = f.value(root);
        const double dg = f.derivative(root);
        if (!(dg > 0.0) || !std::isfinite(g)) break;
        const double next = root - g / dg;
        if (!(next > a && next < c)) break;
        root = next;
    }
    // keep the root strictly inside the open interval between poles
    if (!(root > lo)) root = std::nextafter(lo, hi);
    if (!(root < hi)) root = std::nextafter(hi, lo);
    return root;
}

}  // namespace

void SpikeConfig::validate() const {
    std::ostringstream os;
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        os << "SpikeConfig: beta must be positive (got " << beta << ")";
        throw InputError(os.str());
    }
    if (!std::isfinite(n)) throw InputError("SpikeConfig: n must be finite");
    if (N < 1) throw InputError("SpikeConfig: N must be at least 1");
    if (spikes.empty()) throw InputError("SpikeConfig: at least one spike required");
    for (double b : spikes) {
        if (!(b > 0.0) || !std::isfinite(b)) {
            os << "SpikeConfig: spikes must be positive (got " << b << ")";
            throw InputError(os.str());
        }
    }
}

double SpikeConfig::spike() const {
    if (spikes.size() != 1) throw InputError("SpikeConfig: this construction takes exactly one spike");
    return spikes.front();
}

// ---------------------------------------------------------------------------------------

BidiagonalModel sample_bidiagonal(const SpikeConfig& cfg, Rng& rng) {
    cfg.validate();
    const double b = cfg.spike();
    const double beta = cfg.beta;
    const double n = cfg.n;
    const std::size_t N = cfg.N;
    if (!(beta * (n - static_cast<double>(N) + 1.0) > 0.0)) {
        std::ostringstream os;
        os << "sample_bidiagonal: need beta (n - N + 1) > 0 (beta=" << beta << ", n=" << n << ", N=" << N << ")";
        throw InputError(os.str());
    }
    BidiagonalModel m;
    m.x.resize(N);
    m.y.resize(N - 1);
    m.x[0] = std::sqrt(b) * sample_chi(beta * n, rng);
    for (std::size_t j = 2; j <= N; ++j) m.x[j - 1] = sample_chi(beta * (n - static_cast<double>(j) + 1.0), rng);
    for (std::size_t j = 1; j < N; ++j) m.y[j - 1] = sample_chi(beta * static_cast<double>(N - j), rng);
    return m;
}

SymTridiag gram_matrix(const BidiagonalModel& m) {
    const std::size_t N = m.x.size();
    if (N == 0 || m.y.size() + 1 != N) throw InputError("gram_matrix: malformed bidiagonal model");
    SymTridiag t;
    t.diag.resize(N);
    t.offdiag.resize(N - 1);
    t.diag[0] = m.x[0] * m.x[0];
    for (std::size_t i = 1; i < N; ++i) t.diag[i] = m.y[i - 1] * m.y[i - 1] + m.x[i] * m.x[i];
    for (std::size_t i = 0; i + 1 < N; ++i) t.offdiag[i] = m.y[i] * m.x[i];
    return t;
}

SpectrumSample spectrum_from_bidiagonal(const BidiagonalModel& m) {
    const SymTridiag t = gram_matrix(m);
    SpectrumSample s = tridiag_eigenvalues(t);
    require_strictly_decreasing(s.values, t.norm_inf(), "spectrum_from_bidiagonal");
    s.construction = "bidiagonal";
    return s;
}

SymTridiag sample_hermite_tridiagonal(double beta, std::size_t N, Rng& rng) {
    if (!(beta > 0.0)) throw InputError("sample_hermite_tridiagonal: beta must be positive");
    if (N < 1) throw InputError("sample_hermite_tridiagonal: N must be at least 1");
    SymTridiag t;
    t.diag.resize(N);
    t.offdiag.resize(N - 1);
    for (std::size_t i = 0; i < N; ++i) t.diag[i] = rng.normal();
    for (std::size_t k = 1; k < N; ++k) t.offdiag[k - 1] = sample_chi(beta * static_cast<double>(N - k), rng) / std::sqrt(2.0);
    return t;
}

// ---------------------------------------------------------------------------------------

std::vector<double> secular_roots(std::span<const double> y, double b, double q0, std::span<const double> q,
                                  bool zero_block) {
    if (!(b > 0.0)) throw InputError("secular_roots: b must be positive");
    if (q.size() != y.size()) throw InputError("secular_roots: q and y differ in length");
    if (zero_block && !(q0 > 0.0)) throw InputError("secular_roots: zero block needs q0 > 0");
    require_positive_strictly_decreasing(y, "secular_roots");
    for (double v : q)
        if (!(v > 0.0)) throw InputError("secular_roots: weights q_j must be positive");

    const Secular f{y, q, b, q0, zero_block};
    const double mass = (zero_block ? q0 : 0.0) + std::accumulate(q.begin(), q.end(), 0.0);
    std::vector<double> roots;
    roots.reserve(y.size() + 1);

    if (y.empty()) {
        if (zero_block) roots.push_back(b * q0);
        return roots;
    }
    if (y.size() == 1 && !zero_block) {
        roots.push_back(y[0] + b * q[0]);
        return roots;
    }

    const double upper = y[0] + b * mass + 1.0;
    roots.push_back(solve_bracket(f, y[0], upper));
    for (std::size_t j = 1; j < y.size(); ++j) roots.push_back(solve_bracket(f, y[j], y[j - 1]));
    if (zero_block) roots.push_back(solve_bracket(f, 0.0, y.back()));

    if (!strictly_interlaced(roots, y, zero_block)) {
        throw NumericalError("secular_roots: roots failed to interlace with the unperturbed spectrum");
    }
    return roots;
}

SpectrumSample rank_one_update(const SpectrumSample& y, double b, double zero_shape, double beta, Rng& rng,
                               ZeroMassScale scale) {
    if (!(beta > 0.0)) throw InputError("rank_one_update: beta must be positive");
    if (!(zero_shape >= 0.0)) throw InputError("rank_one_update: zero_shape must be >= 0");
    require_positive_strictly_decreasing(y.values, "rank_one_update");
    const bool zero_block = zero_shape > 0.0;
    std::vector<double> q(y.size());
    for (double& v : q) v = sample_gamma(0.5 * beta, 2.0, rng);
    const double q0 = zero_block ? sample_gamma(zero_shape, zero_mass_scale_value(scale), rng) : 0.0;

    SpectrumSample x;
    x.values = secular_roots(y.values, b, q0, q, zero_block);
    const std::size_t expected = y.size() + (zero_block ? 1 : 0);
    if (x.values.size() != expected) {
        std::ostringstream os;
        os << "rank_one_update: found " << x.values.size() << " roots, interlacing predicts " << expected;
        throw NumericalError(os.str());
    }
    require_strictly_decreasing(x.values, x.values.empty() ? 1.0 : x.values.front(), "rank_one_update");
    x.seed = y.seed;
    x.construction = "secular";
    return x;
}

InterlacedPair sample_secular_pair(const SpikeConfig& cfg, Rng& rng, ZeroMassScale scale) {
    cfg.validate();
    const double b = cfg.spike();
    const double N = static_cast<double>(cfg.N);
    InterlacedPair out;
    if (cfg.n >= N) {
        if (cfg.N >= 2) {
            const SpikeConfig null_cfg{cfg.beta, cfg.n, cfg.N - 1, {1.0}};
            out.y = spectrum_from_bidiagonal(sample_bidiagonal(null_cfg, rng));
        }
        out.x = rank_one_update(out.y, b, cfg.zero_shape(), cfg.beta, rng, scale);
    } else {
        const double target = SpikeConfig::hard_edge_n(cfg.beta, cfg.N);
        if (std::abs(cfg.n - target) > 1e-12 * std::max(1.0, N)) {
            std::ostringstream os;
            os << "sample_secular_pair: for n < N the construction needs n = N - 1 + 2/beta = " << target
               << " (got " << cfg.n << ")";
            throw InputError(os.str());
        }
        const SpikeConfig null_cfg{cfg.beta, cfg.n, cfg.N, {1.0}};
        out.y = spectrum_from_bidiagonal(sample_bidiagonal(null_cfg, rng));
        out.x = rank_one_update(out.y, b, 0.0, cfg.beta, rng, scale);
    }
    out.x.seed = out.y.seed = rng.seed();
    out.x.construction = out.y.construction = "secular";
    return out;
}

InterlacedPair sample_secular_pair_top(const SpikeConfig& cfg, std::size_t k, Rng& rng) {
    cfg.validate();
    const double b = cfg.spike();
    const double target = SpikeConfig::hard_edge_n(cfg.beta, cfg.N);
    if (!(cfg.n < static_cast<double>(cfg.N)) || std::abs(cfg.n - target) > 1e-12 * static_cast<double>(cfg.N)) {
        throw InputError("sample_secular_pair_top: needs n = N - 1 + 2/beta < N");
    }
    const SpikeConfig null_cfg{cfg.beta, cfg.n, cfg.N, {1.0}};
    SymTridiag t = gram_matrix(sample_bidiagonal(null_cfg, rng));
    const double mass = sample_gamma(0.5 * cfg.beta * static_cast<double>(cfg.N), 2.0, rng);

    InterlacedPair out;
    out.y.values = tridiag_top_eigenvalues(t, k);
    t.diag[0] += b * mass;
    out.x.values = tridiag_top_eigenvalues(t, k);
    out.x.seed = out.y.seed = rng.seed();
    out.x.construction = out.y.construction = "secular-top";
    return out;
}

SpectrumSample sample_multi_spike(const SpikeConfig& cfg, Rng& rng) {
    cfg.validate();
    if (cfg.spikes.size() != cfg.N) {
        std::ostringstream os;
        os << "sample_multi_spike: need one spike per eigenvalue (N=" << cfg.N << ", got " << cfg.spikes.size()
           << ")";
        throw InputError(os.str());
    }
    SpectrumSample current;
    for (std::size_t j = 1; j <= cfg.N; ++j) {
        const double shape = 0.5 * cfg.beta * (cfg.n - static_cast<double>(j) + 1.0);
        if (!(shape > 0.0)) {
            std::ostringstream os;
            os << "sample_multi_spike: beta (n - j + 1)/2 must be positive at step j=" << j;
            throw InputError(os.str());
        }
        current = rank_one_update(current, cfg.spikes[j - 1], shape, cfg.beta, rng);
    }
    current.seed = rng.seed();
    current.construction = "multispike";
    return current;
}

// ---------------------------------------------------------------------------------------

BidiagonalPencil sample_pencil(const SpikeConfig& cfg, Rng& rng, PencilSpikeFactor factor) {
    cfg.validate();
    const double b = cfg.spike();
    const double beta = cfg.beta;
    const std::size_t N = cfg.N;
    const double alpha0 = cfg.zero_shape() - 1.0;
    if (!(alpha0 + 1.0 > 0.0)) throw InputError("sample_pencil: need alpha0 + 1 = beta (n - N + 1)/2 > 0");
    const double f = factor == PencilSpikeFactor::kLinear ? b : std::sqrt(b);

    BidiagonalPencil p;
    p.a.resize(N);
    p.b.resize(N - 1);
    for (std::size_t j = 1; j < N; ++j) {
        p.a[j - 1] = sample_gamma(static_cast<double>(N - j) * beta / 2.0 + alpha0 + 1.0, 2.0, rng);
    }
    p.a[N - 1] = f * sample_gamma(alpha0 + 1.0, 2.0, rng);
    for (std::size_t j = 1; j + 1 < N; ++j) p.b[j - 1] = sample_gamma(static_cast<double>(j) * beta / 2.0, 2.0, rng);
    if (N >= 2) p.b[N - 2] = f * sample_gamma(static_cast<double>(N - 1) * beta / 2.0, 2.0, rng);
    return p;
}

}  // namespace spiked
