#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spiked {

/// An eigenvalue list ordered strictly decreasing, tagged with the stream that produced it.
struct SpectrumSample {
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::string construction;

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Relative gap below which two computed eigenvalues are treated as a tie.
inline constexpr double kTieTolerance = 1e-13;

/// Throws NumericalError when `values` is not strictly decreasing, or when two neighbours
/// are closer than kTieTolerance * scale. `where` names the caller in the message.
void require_strictly_decreasing(std::span<const double> values, double scale, std::string_view where);

/// True when x[0] > y[0] > x[1] > y[1] > ... holds over the common prefix and, if
/// `floor_at_zero`, the last entry of the longer list stays above 0 (the "y_N := 0" convention).
bool strictly_interlaced(std::span<const double> x, std::span<const double> y, bool floor_at_zero);

}  // namespace spiked
