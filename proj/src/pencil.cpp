#include "spiked/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spiked/errors.hpp"

namespace spiked {

namespace {

constexpr double kTiny = 1e-300;

// Number of zeros of B_j in (0, x), x > 0. With d_k = -r_k the ratios are the LDL^T pivots
// of a symmetric tridiagonal with diagonal a_k - x and squared couplings b_k x > 0, so the
// usual Sturm count applies.
std::size_t zeros_below(const BidiagonalPencil& p, std::size_t j, double x) {
    std::size_t count = 0;
    double r = x - p.a[0];
    if (r > 0.0) ++count;
    for (std::size_t k = 2; k <= j; ++k) {
        if (r == 0.0) r = kTiny;
        r = (x - p.a[k - 1]) - p.b[k - 2] * x / r;
        if (r > 0.0) ++count;
    }
    return count;
}

[[noreturn]] void bracket_failure(std::size_t j, double lo, double hi) {
    std::ostringstream os;
    os.precision(17);
    os << "pencil_eigenvalues: cannot bracket a zero of B_" << j << " on (" << lo << ", " << hi << ")";
    throw NumericalError(os.str());
}

// Zeros of B_j, decreasing, by bisection on the zero count.
std::vector<double> zeros_of(const BidiagonalPencil& p, std::size_t j) {
    double upper = 1.0;
    for (std::size_t k = 0; k < j; ++k) upper = std::max(upper, p.a[k]);
    for (std::size_t k = 0; k + 1 < j; ++k) upper += p.b[k];
    upper += 1.0;
    int expansions = 0;
    while (zeros_below(p, j, upper) < j) {
        upper *= 2.0;
        if (++expansions > 200) bracket_failure(j, 0.0, upper);
    }
    std::vector<double> out(j);
    // out[i] is the (j - i)-th smallest zero: the point where the count passes j - i - 1.
    double hi_prev = upper;
    for (std::size_t i = 0; i < j; ++i) {
        const std::size_t target = j - i - 1;  // zeros strictly below the one sought
        double lo = 0.0;
        double hi = hi_prev;
        for (int iter = 0; iter < 2000; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi || hi - lo <= 4e-16 * mid) break;
            if (zeros_below(p, j, mid) > target) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out[i] = 0.5 * (lo + hi);
        if (!(out[i] > 0.0)) bracket_failure(j, lo, hi);
        hi_prev = hi;
    }
    return out;
}

}  // namespace

void BidiagonalPencil::validate() const {
    if (a.empty()) throw InputError("BidiagonalPencil: empty");
    if (b.size() + 1 != a.size()) throw InputError("BidiagonalPencil: b must have size(a) - 1 entries");
    for (double v : a)
        if (!std::isfinite(v)) throw InputError("BidiagonalPencil: non-finite a_j");
    for (double v : b)
        if (!std::isfinite(v)) throw InputError("BidiagonalPencil: non-finite b_j");
}

std::pair<double, double> recurrence_eval(const BidiagonalPencil& p, double x) {
    p.validate();
    if (!std::isfinite(x)) throw InputError("recurrence_eval: non-finite x");
    double bm2 = 1.0;          // B_{j-2}
    double bm1 = x - p.a[0];   // B_{j-1}
    for (std::size_t j = 2; j <= p.size(); ++j) {
        const double cur = (x - p.a[j - 1]) * bm1 - p.b[j - 2] * x * bm2;
        bm2 = bm1;
        bm1 = cur;
    }
    return {bm1, bm2};
}

std::pair<SpectrumSample, SpectrumSample> pencil_eigenvalues(const BidiagonalPencil& p) {
    p.validate();
    for (double v : p.a)
        if (!(v > 0.0)) throw InputError("pencil_eigenvalues: requires a_j > 0");
    for (double v : p.b)
        if (!(v > 0.0)) throw InputError("pencil_eigenvalues: requires b_j > 0");

    std::vector<double> zeros = zeros_of(p, p.size());
    std::vector<double> zeros_prev = p.size() > 1 ? zeros_of(p, p.size() - 1) : std::vector<double>{};
    for (std::size_t i = 0; i < zeros_prev.size(); ++i) {
        if (!(zeros[i] > zeros_prev[i] && zeros_prev[i] > zeros[i + 1])) {
            std::ostringstream os;
            os.precision(17);
            os << "pencil_eigenvalues: zeros of B_N and B_{N-1} fail to interlace at index " << i;
            throw NumericalError(os.str());
        }
    }
    SpectrumSample top, sub;
    top.values = std::move(zeros);
    sub.values = std::move(zeros_prev);
    top.construction = "pencil";
    sub.construction = "pencil";
    return {std::move(top), std::move(sub)};
}

}  // namespace spiked
