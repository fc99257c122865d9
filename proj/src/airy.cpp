#include "spiked/airy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/airy.hpp>

#include "spiked/errors.hpp"

namespace spiked {

namespace {

constexpr double kDomain = 40.0;
constexpr double kTableLo = -25.0;
constexpr double kTableHi = 30.0;
constexpr double kTableStep = 0.01;

double ai_raw(double x) { return boost::math::airy_ai(x); }

double gauss10(double a, double b) {
    return boost::math::quadrature::gauss<double, 10>::integrate(ai_raw, a, b);
}

class TailTable {
public:
    TailTable() {
        const std::size_t m = static_cast<std::size_t>(std::lround((kTableHi - kTableLo) / kTableStep));
        values_.assign(m + 1, 0.0);
        // Ai(40) ~ 1e-74, so [30, 40] closes the tail to double precision.
        double acc = boost::math::quadrature::gauss<double, 30>::integrate(ai_raw, kTableHi, kTableHi + 10.0);
        values_[m] = acc;
        for (std::size_t i = m; i-- > 0;) {
            acc += gauss10(node(i), node(i + 1));
            values_[i] = acc;
        }
    }

    double operator()(double x) const {
        const double r = (x - kTableLo) / kTableStep;
        std::size_t i = static_cast<std::size_t>(std::floor(r));
        if (i >= values_.size() - 1) i = values_.size() - 2;
        // int_x^inf = int_{x_{i+1}}^inf + int_x^{x_{i+1}}, the last exact to rounding with 10 nodes
        return values_[i + 1] + gauss10(x, node(i + 1));
    }

private:
    static double node(std::size_t i) { return kTableLo + static_cast<double>(i) * kTableStep; }
    std::vector<double> values_;
};

const TailTable& tail_table() {
    static const TailTable table;
    return table;
}

void check_domain(double x, const char* where) {
    if (!std::isfinite(x) || std::abs(x) > kDomain) {
        std::ostringstream os;
        os << where << ": argument " << x << " outside |x| <= " << kDomain;
        throw InputError(os.str());
    }
}

}  // namespace

AiryEval airy(double x) {
    check_domain(x, "airy");
    return {x, boost::math::airy_ai(x), boost::math::airy_ai_prime(x)};
}

void airy_long(long double x, long double& ai, long double& ai_prime) {
    check_domain(static_cast<double>(x), "airy_long");
    ai = boost::math::airy_ai(x);
    ai_prime = boost::math::airy_ai_prime(x);
}

AiryEval airy_bi(double x) {
    check_domain(x, "airy_bi");
    return {x, boost::math::airy_bi(x), boost::math::airy_bi_prime(x)};
}

double airy_tail_integral(double x) {
    if (std::isnan(x)) throw InputError("airy_tail_integral: NaN argument");
    if (x < kTableLo) throw InputError("airy_tail_integral: argument below -25");
    if (x <= kTableHi) return tail_table()(x);
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    return std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 0.75)) *
           (1.0 - 41.0 / (48.0 * zeta));
}

double airy_kernel(double X, double Y) {
    if (std::isnan(X) || std::isnan(Y)) throw InputError("airy_kernel: NaN argument");
    if (X < -15.0 || Y < -15.0) throw InputError("airy_kernel: arguments below -15 are not supported");
    const double lo = std::min(X, Y);
    const double hi = std::max(X, Y);
    // Ai(9)^2 ~ 1e-17, and at least 8 units of decay keep large-argument values relatively
    // accurate; beyond u + hi = 40 the factor Ai(u + hi) is below 1e-74.
    const double upper = std::min(std::max(9.0 - lo, 8.0), kDomain - hi);
    if (upper <= 0.0) return 0.0;
    auto f = [lo, hi](double u) { return boost::math::airy_ai(u + lo) * boost::math::airy_ai(u + hi); };
    // panels of width 2 keep each adaptive call within about one oscillation
    double sum = 0.0;
    const double panel = 2.0;
    for (double a = 0.0; a < upper; a += panel) {
        const double b = std::min(upper, a + panel);
        sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-14);
    }
    return sum;
}

double airy_kernel_diagonal_closed_form(double X) {
    const AiryEval a = airy(X);
    return a.ai_prime * a.ai_prime - X * a.ai * a.ai;
}

}  // namespace spiked
