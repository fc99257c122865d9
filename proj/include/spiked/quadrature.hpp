#pragma once

#include <cmath>
#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>

namespace spiked {

/// Composite 20-point Gauss-Legendre over [a, b] split into panels no wider than `panel`.
/// Intended for smooth integrands whose oscillation scale is known to the caller.
template <class F>
double integrate_panels(F&& f, double a, double b, double panel = 0.5) {
    if (!(b > a)) return 0.0;
    const std::size_t m = static_cast<std::size_t>(std::ceil((b - a) / panel));
    const double width = (b - a) / static_cast<double>(m);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double lo = a + static_cast<double>(i) * width;
        const double hi = (i + 1 == m) ? b : lo + width;
        sum += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, hi);
    }
    return sum;
}

}  // namespace spiked
