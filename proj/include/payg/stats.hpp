#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "error.hpp"

namespace payg {

/*!
 * Percentile of an ascending sample by linear interpolation between order
 * statistics at rank 1 + (n - 1) p / 100.
 */
inline double percentile(std::span<double const> sorted, double p)
{
    if (sorted.empty()) {
        throw ValidationError("percentile of an empty sample");
    }
    if (!(p >= 0.0 && p <= 100.0)) {
        throw ValidationError("percentile probe must lie in [0, 100]");
    }
    double const rank = (static_cast<double>(sorted.size()) - 1.0) * p / 100.0;
    auto const lo = static_cast<std::size_t>(std::floor(rank));
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    double const frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct Moments {
    double mean = 0.0;
    double std = 0.0;             ///< n - 1 denominator
    double skewness = 0.0;        ///< m3 / m2^1.5
    double excess_kurtosis = 0.0; ///< m4 / m2^2 - 3
    bool degenerate = false;      ///< every value identical; shape moments reported as 0
};

inline Moments moments(std::span<double const> xs)
{
    if (xs.size() < 2) {
        throw ValidationError("moments need at least two values");
    }
    auto const n = static_cast<double>(xs.size());
    Moments m;
    for (double x : xs) {
        m.mean += x;
    }
    m.mean /= n;
    auto const [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    if (*lo == *hi) {
        m.mean = *lo;
        m.degenerate = true;
        return m;
    }
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double x : xs) {
        double const d = x - m.mean;
        double const d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m.std = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return m;
}

inline double sample_variance(std::span<double const> xs)
{
    double const s = moments(xs).std;
    return s * s;
}

} // namespace payg
