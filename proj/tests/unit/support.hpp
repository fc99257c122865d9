#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace spiked::testing {

/// Entry `index` of every row (negative index counts from the end), sorted ascending.
inline std::vector<double> column(const std::vector<std::vector<double>>& rows, long index) {
    std::vector<double> c;
    c.reserve(rows.size());
    for (const auto& r : rows) c.push_back(index >= 0 ? r[static_cast<std::size_t>(index)] : r[r.size() + index]);
    std::sort(c.begin(), c.end());
    return c;
}

inline std::vector<double> pooled(const std::vector<std::vector<double>>& rows) {
    std::vector<double> c;
    for (const auto& r : rows) c.insert(c.end(), r.begin(), r.end());
    std::sort(c.begin(), c.end());
    return c;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace spiked::testing
