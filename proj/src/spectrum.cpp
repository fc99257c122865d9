#include "spiked/spectrum.hpp"

#include <cmath>
#include <sstream>

#include "spiked/errors.hpp"

namespace spiked {

void require_strictly_decreasing(std::span<const double> values, double scale, std::string_view where) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            std::ostringstream os;
            os << where << ": non-finite eigenvalue at index " << i;
            throw NumericalError(os.str());
        }
    }
    const double tie = kTieTolerance * scale;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i - 1] - values[i] > tie)) {
            std::ostringstream os;
            os.precision(17);
            os << where << ": eigenvalues " << i - 1 << " and " << i << " tie or are out of order ("
               << values[i - 1] << ", " << values[i] << ")";
            throw NumericalError(os.str());
        }
    }
}

bool strictly_interlaced(std::span<const double> x, std::span<const double> y, bool floor_at_zero) {
    if (y.size() != x.size() && y.size() + 1 != x.size()) return false;
    double prev = INFINITY;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] < prev)) return false;
        prev = x[i];
        if (i < y.size()) {
            if (!(y[i] < prev)) return false;
            prev = y[i];
        }
    }
    if (floor_at_zero) {
        if (y.size() < x.size()) return prev > 0.0;
        return prev >= 0.0;
    }
    return true;
}

}  // namespace spiked
