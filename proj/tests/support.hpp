#pragma once

#include "bspf/error.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace testing {

inline constexpr double pi = std::numbers::pi;

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

// Least-squares slope of log(e) against log(n).
inline double loglog_slope(const std::vector<double>& n, const std::vector<double>& e) {
    const std::size_t k = n.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double x = std::log(n[i]);
        const double y = std::log(e[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

template <class F>
bspf::ErrorKind error_kind_of(F&& fn) {
    try {
        fn();
    } catch (const bspf::Error& e) {
        return e.kind();
    }
    FAIL("expected a bspf::Error");
    return bspf::ErrorKind::invalid_config;
}

}  // namespace testing
