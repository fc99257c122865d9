#include "spiked/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spiked/errors.hpp"

namespace spiked {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Bounds {
    double lo;
    double hi;
};

Bounds gershgorin(const SymTridiag& t) {
    const std::size_t n = t.size();
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(t.offdiag[i - 1]);
        if (i + 1 < n) r += std::abs(t.offdiag[i]);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    const double pad = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + std::numeric_limits<double>::min();
    return {lo - pad, hi + pad};
}

double pivot_floor(const SymTridiag& t) {
    double m = 1.0;
    for (double b : t.offdiag) m = std::max(m, b * b);
    return std::numeric_limits<double>::min() * m;
}

std::size_t sturm_count_impl(const SymTridiag& t, double x, double pivmin) {
    std::size_t count = 0;
    double d = t.diag[0] - x;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0) ++count;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double b = t.offdiag[i - 1];
        d = (t.diag[i] - x) - (b * b) / d;
        if (std::abs(d) < pivmin) d = -pivmin;
        if (d < 0) ++count;
    }
    return count;
}

// Eigenvalue with ascending index `idx` (0 = smallest).
double bisect_index(const SymTridiag& t, std::size_t idx, Bounds b, double pivmin, double abs_tol) {
    double lo = b.lo, hi = b.hi;
    for (int iter = 0; iter < 4096; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double width = hi - lo;
        if (width <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + abs_tol || mid <= lo || mid >= hi) {
            return mid;
        }
        if (sturm_count_impl(t, mid, pivmin) > idx) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double SymTridiag::trace() const noexcept {
    double s = 0.0;
    for (double d : diag) s += d;
    return s;
}

double SymTridiag::norm_inf() const noexcept {
    double m = 0.0;
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double r = std::abs(diag[i]);
        if (i > 0) r += std::abs(offdiag[i - 1]);
        if (i + 1 < n) r += std::abs(offdiag[i]);
        m = std::max(m, r);
    }
    return m;
}

void SymTridiag::validate() const {
    if (diag.empty()) throw InputError("SymTridiag: empty matrix");
    if (offdiag.size() + 1 != diag.size()) {
        std::ostringstream os;
        os << "SymTridiag: offdiag has " << offdiag.size() << " entries, expected " << diag.size() - 1;
        throw InputError(os.str());
    }
    for (double v : diag)
        if (!std::isfinite(v)) throw InputError("SymTridiag: non-finite diagonal entry");
    for (double v : offdiag)
        if (!std::isfinite(v)) throw InputError("SymTridiag: non-finite off-diagonal entry");
}

std::size_t sturm_count(const SymTridiag& t, double x) {
    t.validate();
    return sturm_count_impl(t, x, pivot_floor(t));
}

std::vector<double> tridiag_top_eigenvalues(const SymTridiag& t, std::size_t k) {
    t.validate();
    const std::size_t n = t.size();
    k = std::min(k, n);
    const Bounds b = gershgorin(t);
    const double pivmin = pivot_floor(t);
    const double abs_tol = kEps * std::max(t.norm_inf(), std::numeric_limits<double>::min());
    std::vector<double> out;
    out.reserve(k);
    Bounds window = b;
    for (std::size_t j = 0; j < k; ++j) {
        const double v = bisect_index(t, n - 1 - j, window, pivmin, abs_tol);
        out.push_back(v);
        window.hi = v + abs_tol;  // next eigenvalue is no larger
    }
    return out;
}

std::vector<double> tridiag_bottom_eigenvalues(const SymTridiag& t, std::size_t k) {
    t.validate();
    const std::size_t n = t.size();
    k = std::min(k, n);
    const Bounds b = gershgorin(t);
    const double pivmin = pivot_floor(t);
    const double abs_tol = kEps * std::max(t.norm_inf(), std::numeric_limits<double>::min());
    std::vector<double> out;
    out.reserve(k);
    Bounds window = b;
    for (std::size_t j = 0; j < k; ++j) {
        const double v = bisect_index(t, j, window, pivmin, abs_tol);
        out.push_back(v);
        window.lo = v - abs_tol;
    }
    return out;
}

SpectrumSample tridiag_eigenvalues(const SymTridiag& t) {
    SpectrumSample s;
    s.values = tridiag_top_eigenvalues(t, t.size());
    s.construction = "tridiagonal";
    return s;
}

std::vector<double> tridiag_first_components(const SymTridiag& t) {
    t.validate();
    const std::size_t n = t.size();
    if (n == 1) return {1.0};
    for (std::size_t i = 0; i < t.offdiag.size(); ++i) {
        if (t.offdiag[i] == 0.0) {
            std::ostringstream os;
            os << "tridiag_first_components: off-diagonal entry " << i
               << " is zero; split the matrix into unreduced blocks first";
            throw InputError(os.str());
        }
    }
    const std::vector<double> lam = tridiag_top_eigenvalues(t, n);
    SymTridiag minor{std::vector<double>(t.diag.begin() + 1, t.diag.end()),
                     std::vector<double>(t.offdiag.begin() + 1, t.offdiag.end())};
    const std::vector<double> mu = tridiag_top_eigenvalues(minor, n - 1);

    std::vector<double> q(n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double log_q2 = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) log_q2 += std::log(std::abs(lam[j] - mu[k]));
        for (std::size_t k = 0; k < n; ++k) {
            if (k != j) log_q2 -= std::log(std::abs(lam[j] - lam[k]));
        }
        if (!std::isfinite(log_q2)) {
            throw NumericalError("tridiag_first_components: coincident eigenvalues of matrix and minor");
        }
        q[j] = std::exp(0.5 * log_q2);
        total += q[j] * q[j];
    }
    const double norm = std::sqrt(total);
    for (double& v : q) v /= norm;
    return q;
}

}  // namespace spiked
