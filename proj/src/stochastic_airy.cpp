#include "spiked/stochastic_airy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spiked/errors.hpp"

namespace spiked {

RobinSAOConfig RobinSAOConfig::with_defaults(double beta, double w) {
    RobinSAOConfig cfg;
    cfg.beta = beta;
    cfg.w = w;
    cfg.L = 20.0 + 5.0 * std::max(0.0, std::isfinite(w) ? -w : 0.0);
    cfg.h = 0.02;
    cfg.k = 1;
    return cfg;
}

std::size_t RobinSAOConfig::intervals() const {
    if (!(L > 0.0) || !(h > 0.0) || !std::isfinite(L)) throw InputError("RobinSAOConfig: need L > 0 and h > 0");
    if (h > 0.5) {
        std::ostringstream os;
        os << "RobinSAOConfig: grid step h=" << h << " is too coarse (h must be <= 0.5)";
        throw InputError(os.str());
    }
    const double m = L / h;
    const double r = std::round(m);
    if (std::abs(m - r) > 1e-9 * m || r < 2) throw InputError("RobinSAOConfig: L/h must be an integer >= 2");
    if (k < 1) throw InputError("RobinSAOConfig: k must be at least 1");
    if (!(beta > 0.0)) throw InputError("RobinSAOConfig: beta must be positive");
    if (std::isnan(w) || w == -std::numeric_limits<double>::infinity()) throw InputError("RobinSAOConfig: invalid w");
    return static_cast<std::size_t>(r);
}

SymTridiag stochastic_airy_matrix(const RobinSAOConfig& cfg, Rng& rng) {
    const std::size_t M = cfg.intervals();
    const double h = cfg.h;
    const double inv_h2 = 1.0 / (h * h);
    const bool noisy = std::isfinite(cfg.beta);
    const double noise_scale = noisy ? 2.0 / std::sqrt(cfg.beta) / std::sqrt(h) : 0.0;

    const std::size_t first = cfg.dirichlet() ? 1 : 0;
    const std::size_t n = M - first;  // nodes first..M-1
    if (n < 1) throw InputError("stochastic_airy_matrix: grid has no interior nodes");
    SymTridiag t;
    t.diag.resize(n);
    t.offdiag.assign(n - 1, -inv_h2);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i + first) * h;
        t.diag[i] = 2.0 * inv_h2 + x + (noisy ? noise_scale * rng.normal() : 0.0);
    }
    if (!cfg.dirichlet()) {
        // row 0: (2 + 2 h w) psi_0 / h^2 - 2 psi_1 / h^2; scaling psi_0 by sqrt(2) symmetrizes it
        t.diag[0] += 2.0 * h * cfg.w * inv_h2;
        if (n > 1) t.offdiag[0] = -std::sqrt(2.0) * inv_h2;
    }
    return t;
}

std::vector<double> sample_stochastic_airy(const RobinSAOConfig& cfg, Rng& rng) {
    const SymTridiag t = stochastic_airy_matrix(cfg, rng);
    return tridiag_bottom_eigenvalues(t, cfg.k);
}

}  // namespace spiked
