// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace currents {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSqrt2Pi = 2.506628274631000502415765284811045253;

/// Order requested above the configured precomputation ceiling.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Cholesky factorization failed even after the jitter ladder.
struct ConditioningError : std::runtime_error {
    int leading_minor;
    ConditioningError(const std::string& msg, int minor)
        : std::runtime_error(msg), leading_minor(minor) {}
};

/// Invalid experiment configuration; message names the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A threshold scan whose grid does not bracket the transition.
struct ScanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Compensated summation. Reductions over Monte Carlo paths are done
// through this in a fixed order so results do not depend on the worker
// count.
class KahanSum {
  public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int points = 0;
};

inline LinearFit fit_line(std::span<const double> xs, std::span<const double> ys) {
    LinearFit f;
    const int n = static_cast<int>(xs.size());
    f.points = n;
    if (n < 2) return f;
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = (syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

inline void require(bool cond, const char* what) {
    if (!cond) throw std::domain_error(what);
}

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw std::domain_error(what);
}

}  // namespace currents
