#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace payg {

/// Affine normal floored at zero: mean + sigma * eps, or 0 below the floor.
struct TruncatedAffineParams {
    double mean = 0.0;
    double sigma = 0.0;

    friend bool operator==(TruncatedAffineParams const&, TruncatedAffineParams const&) = default;
};

/// Affine normal clipped to [0, 1].
struct ClippedAffineParams {
    double mean = 0.0;
    double sigma = 0.0;
};

/// X_t = phi * X_{t-1} + sigma * eps, started at x0.
struct Ar1Params {
    double phi = 0.0;
    double sigma = 0.0;
    double x0 = 0.0;

    friend bool operator==(Ar1Params const&, Ar1Params const&) = default;
};

inline void validate(TruncatedAffineParams const& p, std::string const& where)
{
    if (!(p.sigma >= 0.0)) {
        throw ValidationError(where + ": sigma must be >= 0");
    }
    if (p.sigma == 0.0 && p.mean < 0.0) {
        throw ValidationError(where + ": mean must be >= 0 when sigma is 0");
    }
}

inline void validate(ClippedAffineParams const& p, std::string const& where)
{
    if (!(p.mean >= 0.0 && p.mean <= 1.0)) {
        throw ValidationError(where + ": mean must lie in [0, 1]");
    }
    if (!(p.sigma >= 0.0)) {
        throw ValidationError(where + ": sigma must be >= 0");
    }
}

inline void validate(Ar1Params const& p, std::string const& where)
{
    if (!(std::abs(p.phi) < 1.0)) {
        throw ValidationError(where + ": |phi| must be < 1 (stationarity), got "
                              + std::to_string(p.phi));
    }
    if (!(p.sigma >= 0.0)) {
        throw ValidationError(where + ": sigma must be >= 0");
    }
}

/// Result is >= 0 and may exceed one.
inline double sample_truncated_affine(TruncatedAffineParams const& p, double eps) noexcept
{
    if (p.sigma == 0.0) {
        return p.mean;
    }
    if (eps < -p.mean / p.sigma) {
        return 0.0;
    }
    return std::max(0.0, p.mean + p.sigma * eps);
}

inline double sample_clipped_affine(ClippedAffineParams const& p, double eps) noexcept
{
    if (p.sigma == 0.0) {
        return std::clamp(p.mean, 0.0, 1.0);
    }
    if (eps < -p.mean / p.sigma) {
        return 0.0;
    }
    if (eps > (1.0 - p.mean) / p.sigma) {
        return 1.0;
    }
    return std::clamp(p.mean + p.sigma * eps, 0.0, 1.0);
}

inline double ar1_step(Ar1Params const& p, double x_prev, double eps) noexcept
{
    return p.phi * x_prev + p.sigma * eps;
}

inline double ar1_stationary_std(Ar1Params const& p)
{
    if (!(std::abs(p.phi) < 1.0)) {
        throw ValidationError("AR(1) stationarity violated: |phi| must be < 1");
    }
    return p.sigma / std::sqrt(1.0 - p.phi * p.phi);
}

} // namespace payg
