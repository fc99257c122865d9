#pragma once

#include <utility>
#include <vector>

#include "spiked/spectrum.hpp"

namespace spiked {

/// The pencil (L, M) with L upper bidiagonal (diag a_j, superdiagonal 1) and M unit lower
/// bidiagonal (subdiagonal -b_j). Its leading principal characteristic polynomials
/// B_j(x) = det(x M_j - L_j) obey
///   B_j(x) = (x - a_j) B_{j-1}(x) - b_{j-1} x B_{j-2}(x),   B_0 = 1, b_0 = 0.
struct BidiagonalPencil {
    std::vector<double> a;  // a_1 .. a_N
    std::vector<double> b;  // b_1 .. b_{N-1}

    std::size_t size() const noexcept { return a.size(); }
    void validate() const;
};

/// (B_N(x), B_{N-1}(x)).
std::pair<double, double> recurrence_eval(const BidiagonalPencil& p, double x);

/// Zeros of B_N and of B_{N-1}, each strictly decreasing. They interlace
/// z_1 > w_1 > z_2 > ... > w_{N-1} > z_N > 0 when every a_j, b_j is positive.
std::pair<SpectrumSample, SpectrumSample> pencil_eigenvalues(const BidiagonalPencil& p);

}  // namespace spiked
