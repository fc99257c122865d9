#include "spiked/analytic_pdf.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "spiked/errors.hpp"

namespace spiked {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_positive_decreasing(std::span<const double> v, const char* where) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]) || v[i] <= 0.0) {
            std::ostringstream os;
            os << where << ": entries must be finite and positive";
            throw InputError(os.str());
        }
        if (i > 0 && !(v[i] < v[i - 1])) {
            std::ostringstream os;
            os << where << ": entries must be distinct and strictly decreasing";
            throw InputError(os.str());
        }
    }
}

// Integrand pieces along w = sigma + i t for branch points q_j <= 0.
struct LinePoint {
    cplx g;    // prod (w - q_j)^{-a}
    cplx d1;   // g'
    cplx d2;   // g''
    cplx d3;   // g'''
};

LinePoint line_point(double a, double sigma, std::span<const double> q, double t, bool derivatives) {
    const cplx w(sigma, t);
    cplx logsum = 0.0;
    cplx L = 0.0, M = 0.0, Mp = 0.0;
    const cplx I(0.0, 1.0);
    for (double qj : q) {
        const cplx z = w - qj;
        logsum += std::log(z);
        if (derivatives) {
            const cplx r = 1.0 / z;
            L += -a * I * r;
            M += -a * r * r;
            Mp += 2.0 * a * I * r * r * r;
        }
    }
    LinePoint p;
    p.g = std::exp(-a * logsum);
    if (derivatives) {
        p.d1 = p.g * L;
        p.d2 = p.g * (L * L + M);
        p.d3 = p.g * (L * L * L + 3.0 * L * M + Mp);
    }
    return p;
}

// Re of the end corrections at t = T: Euler-Maclaurin for the trapezoid sum of e^{it} g and
// the asymptotic expansion of int_T^inf e^{it} g dt.
double end_corrections(double a, double sigma, std::span<const double> q, double T, double h) {
    const LinePoint p = line_point(a, sigma, q, T, true);
    const cplx I(0.0, 1.0);
    const cplx e = std::exp(I * T);
    const cplx f1 = e * (I * p.g + p.d1);
    const cplx f3 = e * (-I * p.g - 3.0 * p.d1 + 3.0 * I * p.d2 + p.d3);
    const cplx tail = e * (I * p.g - p.d1 - I * p.d2 + p.d3);
    return (-(h * h / 12.0) * f1 + (h * h * h * h / 720.0) * f3 + tail).real();
}

}  // namespace

void ContourQuadrature::validate() const {
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw InputError("ContourQuadrature: t_max must be >= 0");
    if (n_nodes < 64) throw InputError("ContourQuadrature: n_nodes must be at least 64");
    if (!(rel_tol > 0.0)) throw InputError("ContourQuadrature: rel_tol must be positive");
    if (max_nodes < n_nodes) throw InputError("ContourQuadrature: max_nodes below n_nodes");
}

ContourResult spiked_contour_integral(double beta, double mu, std::span<const double> lambda,
                                      const ContourQuadrature& quad) {
    quad.validate();
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("spiked_contour_integral: beta must be positive");
    if (!std::isfinite(mu)) throw InputError("spiked_contour_integral: mu must be finite");
    if (lambda.empty()) throw InputError("spiked_contour_integral: empty spectrum");
    const double a = 0.5 * beta;
    const double na = a * static_cast<double>(lambda.size());
    if (!(na > 1.0)) {
        throw InputError("spiked_contour_integral: N beta/2 must exceed 1 (the integrand is not absolutely "
                         "integrable); use hyp1f1_residue_beta2 at beta = 2");
    }
    std::vector<double> q(lambda.size());
    double pmax = -std::numeric_limits<double>::infinity();
    for (double l : lambda) pmax = std::max(pmax, mu * l);
    for (std::size_t j = 0; j < lambda.size(); ++j) q[j] = mu * lambda[j] - pmax;

    // The line sits at the saddle of e^{w} w^{-Na}; every factor keeps Re(w - q_j) >= sigma > 0,
    // so the principal logarithm never meets its cut.
    const double sigma = na;
    const double h = 2.0 * kPi * sigma / (40.0 + sigma);

    auto f_re = [&](double t) {
        const LinePoint p = line_point(a, sigma, q, t, false);
        return (std::exp(cplx(0.0, t)) * p.g).real();
    };

    ContourResult res;
    res.log_scale = pmax + sigma;
    const bool fixed = quad.t_max > 0.0;
    std::size_t m = fixed ? std::max<std::size_t>(quad.n_nodes, static_cast<std::size_t>(std::ceil(quad.t_max / h)))
                          : quad.n_nodes;
    const double hh = fixed ? quad.t_max / static_cast<double>(m) : h;

    double partial = 0.5 * f_re(0.0);  // sum of f over nodes 0..k with half weight at 0
    std::size_t done = 0;
    double prev = std::numeric_limits<double>::quiet_NaN();
    double estimate = 0.0;
    for (;;) {
        for (std::size_t k = done + 1; k < m; ++k) partial += f_re(static_cast<double>(k) * hh);
        done = m - 1;
        const double T = static_cast<double>(m) * hh;
        const double trap = hh * (partial + 0.5 * f_re(T));
        estimate = (trap + end_corrections(a, sigma, q, T, hh)) / kPi;
        if (fixed) {
            // error estimate from the same rule cut at T/2
            const std::size_t half = m / 2;
            double s = 0.5 * f_re(0.0);
            for (std::size_t k = 1; k < half; ++k) s += f_re(static_cast<double>(k) * hh);
            const double Th = static_cast<double>(half) * hh;
            const double est_half = (hh * (s + 0.5 * f_re(Th)) + end_corrections(a, sigma, q, Th, hh)) / kPi;
            res.error_estimate = std::abs(estimate - est_half);
            res.t_max = T;
            break;
        }
        if (std::isfinite(prev)) {
            const double diff = std::abs(estimate - prev);
            if (diff <= quad.rel_tol * std::abs(estimate)) {
                res.error_estimate = diff;
                res.t_max = T;
                break;
            }
        }
        if (2 * m > quad.max_nodes) {
            std::ostringstream os;
            os << "spiked_contour_integral: no convergence with " << m << " nodes (t_max " << T
               << "), last estimates " << prev << " and " << estimate;
            throw NumericalError(os.str());
        }
        prev = estimate;
        m *= 2;
    }
    res.value = estimate;
    res.nodes = m;
    return res;
}

double log_spiked_prefactor(const SpikeConfig& cfg, std::span<const double> lambda) {
    cfg.validate();
    if (lambda.size() != cfg.N) throw InputError("log_spiked_prefactor: spectrum length differs from N");
    require_positive_decreasing(lambda, "log_spiked_prefactor");
    const double expo = cfg.zero_shape() - 1.0;
    double s = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        s += expo * std::log(lambda[j]) - 0.5 * lambda[j];
        for (std::size_t k = j + 1; k < lambda.size(); ++k) s += cfg.beta * std::log(lambda[j] - lambda[k]);
    }
    return s;
}

double log_spiked_pdf(const SpikeConfig& cfg, const SpectrumSample& lambda, const ContourQuadrature& quad) {
    const double b = cfg.spike();
    const double logpre = log_spiked_prefactor(cfg, lambda.values);
    const double mu = (b - 1.0) / (2.0 * b);
    const ContourResult c = spiked_contour_integral(cfg.beta, mu, lambda.values, quad);
    const double scale = std::abs(c.value) + c.error_estimate;
    if (c.error_estimate > 1e-6 * std::abs(c.value)) {
        std::ostringstream os;
        os << "spiked_pdf: contour quadrature error estimate " << c.error_estimate << " exceeds 1e-6 of value "
           << c.value << " (t_max " << c.t_max << ", " << c.nodes << " nodes)";
        throw NumericalError(os.str());
    }
    if (c.value < -1e-8 * scale) {
        std::ostringstream os;
        os << "spiked_pdf: contour integral is negative (" << c.value << ")";
        throw NumericalError(os.str());
    }
    if (c.value <= 0.0) return kNegInf;
    return logpre + std::log(2.0 * kPi) + c.log_scale + std::log(c.value);
}

double spiked_pdf(const SpikeConfig& cfg, const SpectrumSample& lambda, const ContourQuadrature& quad) {
    return std::exp(log_spiked_pdf(cfg, lambda, quad));
}

double hyp1f1_spiked(double beta, std::size_t N, double c, const SpectrumSample& x) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("hyp1f1_spiked: beta must be positive");
    if (x.size() != N || N == 0) throw InputError("hyp1f1_spiked: x must have N >= 1 entries");
    if (!std::isfinite(c)) throw InputError("hyp1f1_spiked: c must be finite");
    require_positive_decreasing(x.values, "hyp1f1_spiked");
    if (c == 0.0) return 1.0;

    const double a = 0.5 * beta;
    const double na = a * static_cast<double>(N);
    // c x_j - max_k c x_k <= 0: for c > 0 the extreme point is x_1, for c < 0 it is x_N
    const double pext = c > 0.0 ? c * x.values.front() : c * x.values.back();
    std::vector<double> q(N);
    for (std::size_t j = 0; j < N; ++j) q[j] = c * x.values[j] - pext;

    // Hyperbola z(u) = m (1 + sin(i u - alpha)), trapezoid in u; parameters tuned for
    // evaluation at time 1 with singularities on the negative axis.
    auto hyperbola = [&](int n) {
        const double alpha = 1.1721;
        const double h = 1.0818 / n;
        const double m = 4.4921 * n;
        const cplx I(0.0, 1.0);
        double acc = 0.0;
        for (int k = 0; k <= n; ++k) {
            const double u = k * h;
            const cplx z = m * (1.0 + std::sin(I * u - alpha));
            const cplx dz = I * m * std::cos(I * u - alpha);
            cplx logsum = 0.0;
            for (double qj : q) logsum += std::log(z - qj);
            const double term = (std::exp(z - a * logsum) * dz).imag();
            acc += (k == 0 ? 1.0 : 2.0) * term;
        }
        return h * acc / (2.0 * kPi);
    };

    // Truncation error falls like e^{-1.17 n}; rounding grows like e^{0.35 n}, so n = 20 sits
    // near the optimum. The change from n = 20 to 24 serves as the error estimate.
    const double best = hyperbola(20);
    const double diff = std::abs(hyperbola(24) - best);
    if (!(diff <= 1e-9 * std::abs(best)) || !(best > 0.0)) {
        std::ostringstream os;
        os << "hyp1f1_spiked: hyperbolic contour did not converge (estimate " << best << ", change " << diff << ")";
        throw NumericalError(os.str());
    }
    return std::exp(std::lgamma(na) + pext + std::log(best));
}

double hyp1f1_residue_beta2(double c, const SpectrumSample& x) {
    const std::size_t N = x.size();
    if (N == 0) throw InputError("hyp1f1_residue_beta2: empty x");
    if (!std::isfinite(c)) throw InputError("hyp1f1_residue_beta2: c must be finite");
    double scale = 0.0;
    for (double v : x.values) {
        if (!std::isfinite(v)) throw InputError("hyp1f1_residue_beta2: non-finite x");
        scale = std::max(scale, std::abs(v));
    }
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t k = j + 1; k < N; ++k) {
            if (std::abs(x[j] - x[k]) < 1e-10 * std::max(scale, 1.0)) {
                throw NumericalError("hyp1f1_residue_beta2: x values closer than 1e-10 of their scale");
            }
        }
    }
    if (c == 0.0) return 1.0;
    if (N == 1) return std::exp(c * x[0]);
    // exponent shift keeps the largest term at O(1); long double absorbs part of the
    // cancellation between terms of alternating sign
    double ref = c * x[0];
    for (double v : x.values) ref = std::max(ref, c * v);
    long double sum = 0.0L, mag = 0.0L;
    for (std::size_t j = 0; j < N; ++j) {
        long double den = 1.0L;
        for (std::size_t k = 0; k < N; ++k) {
            if (k != j) den *= static_cast<long double>(c) * (static_cast<long double>(x[j]) - x[k]);
        }
        const long double term = std::exp(static_cast<long double>(c) * x[j] - ref) / den;
        sum += term;
        mag += std::fabs(term);
    }
    if (std::fabs(sum) < 1e-8L * mag) {
        throw NumericalError("hyp1f1_residue_beta2: residue sum lost more than 8 digits to cancellation");
    }
    return static_cast<double>(std::tgamma(static_cast<long double>(N)) * sum * std::exp(static_cast<long double>(ref)));
}

double log_joint_pdf(const SpikeConfig& cfg, const InterlacedPair& pair) {
    cfg.validate();
    const double b = cfg.spike();
    const auto& x = pair.x.values;
    const auto& y = pair.y.values;
    const std::size_t N = cfg.N;
    if (x.size() != N) throw InputError("joint_pdf: x must have N entries");
    const bool zero_block = y.size() + 1 == N;
    if (!zero_block && y.size() != N) throw InputError("joint_pdf: y must have N-1 or N entries");
    if (zero_block && !(cfg.zero_shape() > 0.0)) throw InputError("joint_pdf: N-1 y values need beta(n-N+1)/2 > 0");
    for (double v : x) {
        if (!std::isfinite(v)) return kNegInf;
    }
    for (double v : y) {
        if (!std::isfinite(v)) return kNegInf;
    }
    if (!strictly_interlaced(x, y, true)) return kNegInf;

    const double half_beta_m1 = 0.5 * cfg.beta - 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t k = i + 1; k < N; ++k) s += std::log(x[i] - x[k]);
        for (double yj : y) s += half_beta_m1 * std::log(std::abs(x[i] - yj));
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        for (std::size_t k = i + 1; k < y.size(); ++k) s += std::log(y[i] - y[k]);
    }
    if (zero_block) {
        for (double xv : x) s += (cfg.zero_shape() - 1.0) * std::log(xv) - xv / (2.0 * b);
        for (double yv : y) s += -(1.0 - 1.0 / b) * yv / 2.0;
    } else {
        for (std::size_t j = 0; j < N; ++j) s += -(y[j] + (x[j] - y[j]) / b) / 2.0;
    }
    return s;
}

double joint_pdf(const SpikeConfig& cfg, const InterlacedPair& pair) {
    cfg.validate();
    const double b = cfg.spike();
    const auto& x = pair.x.values;
    const auto& y = pair.y.values;
    const std::size_t N = cfg.N;
    if (x.size() != N) throw InputError("joint_pdf: x must have N entries");
    const bool zero_block = y.size() + 1 == N;
    if (!zero_block && y.size() != N) throw InputError("joint_pdf: y must have N-1 or N entries");
    if (zero_block && !(cfg.zero_shape() > 0.0)) throw InputError("joint_pdf: N-1 y values need beta(n-N+1)/2 > 0");
    if (!strictly_interlaced(x, y, true)) return 0.0;

    double prod = 1.0;
    double expo = 0.0;
    if (zero_block) {
        for (double xv : x) {
            prod *= std::pow(xv, cfg.zero_shape() - 1.0);
            expo -= xv / (2.0 * b);
        }
        for (double yv : y) expo -= (1.0 - 1.0 / b) * yv / 2.0;
    } else {
        for (std::size_t j = 0; j < N; ++j) expo -= (y[j] + (x[j] - y[j]) / b) / 2.0;
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        for (std::size_t k = i + 1; k < y.size(); ++k) prod *= y[i] - y[k];
    }
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t k = i + 1; k < N; ++k) prod *= x[i] - x[k];
        for (double yj : y) prod *= std::pow(std::abs(x[i] - yj), 0.5 * cfg.beta - 1.0);
    }
    return prod * std::exp(expo);
}

double log_da_conditional_pdf(double beta, const SpectrumSample& x, const SpectrumSample& y) {
    if (!(beta > 0.0)) throw InputError("da_conditional_pdf: beta must be positive");
    const std::size_t N = x.size();
    if (N == 0 || y.size() + 1 != N) throw InputError("da_conditional_pdf: need N x values and N-1 y values");
    if (!strictly_interlaced(x.values, y.values, true)) return kNegInf;
    const double a = 0.5 * beta;
    double s = std::lgamma(a * static_cast<double>(N)) - static_cast<double>(N) * std::lgamma(a);
    for (std::size_t j = 0; j < y.size(); ++j) {
        for (std::size_t k = j + 1; k < y.size(); ++k) s += std::log(y[j] - y[k]);
    }
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t k = j + 1; k < N; ++k) s -= (beta - 1.0) * std::log(x[j] - x[k]);
    }
    for (double yi : y.values) {
        for (double xj : x.values) s += (a - 1.0) * std::log(std::abs(yi - xj));
    }
    return s;
}

double da_conditional_pdf(double beta, const SpectrumSample& x, const SpectrumSample& y) {
    if (!(beta > 0.0)) throw InputError("da_conditional_pdf: beta must be positive");
    const std::size_t N = x.size();
    if (N == 0 || y.size() + 1 != N) throw InputError("da_conditional_pdf: need N x values and N-1 y values");
    if (!strictly_interlaced(x.values, y.values, true)) return 0.0;
    const double a = 0.5 * beta;
    double v = std::tgamma(a * static_cast<double>(N)) / std::pow(std::tgamma(a), static_cast<double>(N));
    for (std::size_t j = 0; j < y.size(); ++j) {
        for (std::size_t k = j + 1; k < y.size(); ++k) v *= y[j] - y[k];
    }
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t k = j + 1; k < N; ++k) v /= std::pow(x[j] - x[k], beta - 1.0);
    }
    for (double yi : y.values) {
        for (double xj : x.values) v *= std::pow(std::abs(yi - xj), a - 1.0);
    }
    return v;
}

double hard_edge_gap(double s, std::span<const double> spikes) {
    if (std::isnan(s) || s < 0.0) throw InputError("hard_edge_gap: s must be >= 0");
    double rate = 0.0;
    for (double b : spikes) {
        if (!(b > 0.0) || !std::isfinite(b)) throw InputError("hard_edge_gap: spikes must be positive");
        rate += 1.0 / (2.0 * b);
    }
    return std::exp(-s * rate);
}

}  // namespace spiked
