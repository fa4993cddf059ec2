// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "currents/common.hpp"
#include "currents/parallel.hpp"
#include "currents/quadrature.hpp"
#include "currents/rng.hpp"

namespace currents {

enum class ProcessKind { BrownianSheet, FbmSheet };

// Time points are N-vectors in [0, T]^N.
using TimePoint = std::vector<double>;

struct CovarianceSpec {
    ProcessKind kind = ProcessKind::BrownianSheet;
    int time_dim = 1;   // N
    int space_dim = 1;  // d
    std::vector<double> hurst;  // per component, FbmSheet only, each in (1/2, 1)
    double horizon = 1.0;  // T

    void validate() const {
        require(time_dim >= 1, "CovarianceSpec: time_dim must be >= 1");
        require(space_dim >= 1, "CovarianceSpec: space_dim must be >= 1");
        require(horizon > 0.0, "CovarianceSpec: horizon must be > 0");
        if (kind == ProcessKind::FbmSheet) {
            require(static_cast<int>(hurst.size()) == space_dim,
                    "CovarianceSpec: one Hurst index per component required");
            for (double h : hurst)
                require(h > 0.5 && h < 1.0, "CovarianceSpec: Hurst index must be in (1/2, 1)");
        }
    }
    static CovarianceSpec brownian(int N = 1, int d = 1, double T = 1.0) {
        return CovarianceSpec{ProcessKind::BrownianSheet, N, d, {}, T};
    }
    static CovarianceSpec fbm(double H, int N = 1, int d = 1, double T = 1.0) {
        return CovarianceSpec{ProcessKind::FbmSheet, N, d, std::vector<double>(d, H), T};
    }
};

/// One-dimensional fBm covariance (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
inline double fbm_cov_1d(double hurst, double s, double t) {
    return 0.5 * (std::pow(t, 2.0 * hurst) + std::pow(s, 2.0 * hurst) -
                  std::pow(std::abs(t - s), 2.0 * hurst));
}

inline void check_time_point(const CovarianceSpec& spec, const TimePoint& s) {
    require(static_cast<int>(s.size()) == spec.time_dim,
            "TimePoint: dimension does not match spec.time_dim");
    for (double c : s)
        require(c >= 0.0 && c <= spec.horizon, "TimePoint: coordinate outside [0, T]");
}

inline double covariance(const CovarianceSpec& spec, int component, const TimePoint& s,
                         const TimePoint& t) {
    spec.validate();
    if (component < 0 || component >= spec.space_dim)
        throw std::out_of_range("covariance: component index out of range");
    check_time_point(spec, s);
    check_time_point(spec, t);
    double prod = 1.0;
    if (spec.kind == ProcessKind::BrownianSheet) {
        for (int i = 0; i < spec.time_dim; ++i) prod *= std::min(s[i], t[i]);
    } else {
        const double h = spec.hurst[component];
        for (int i = 0; i < spec.time_dim; ++i) prod *= fbm_cov_1d(h, s[i], t[i]);
    }
    return prod;
}

/// R(s) = E B_s^2: prod s_i for the Brownian sheet, (prod s_i)^{2H_k} for fBm.
inline double variance_fn(const CovarianceSpec& spec, int component, const TimePoint& s) {
    spec.validate();
    if (component < 0 || component >= spec.space_dim)
        throw std::out_of_range("variance_fn: component index out of range");
    check_time_point(spec, s);
    double vol = 1.0;
    for (double c : s) vol *= c;
    if (spec.kind == ProcessKind::BrownianSheet) return vol;
    return std::pow(vol, 2.0 * spec.hurst[component]);
}

/// E (B_s - B_t)^2 for one component, from the product covariance.
inline double increment_variance(const CovarianceSpec& spec, int component, const TimePoint& s,
                                 const TimePoint& t) {
    return variance_fn(spec, component, s) + variance_fn(spec, component, t) -
           2.0 * covariance(spec, component, s, t);
}

// In-place lower Cholesky with a diagonal jitter ladder capped at
// 1e-12 * trace per entry. Fine Gaussian grids are numerically
// rank-deficient, hence the fallback.
inline void cholesky_with_jitter(std::vector<double>& a, int m) {
    double trace = 0.0;
    for (int i = 0; i < m; ++i) trace += a[i * m + i];
    const std::vector<double> original = a;
    const double jitters[] = {0.0, 1e-15, 1e-14, 1e-13, 1e-12};
    int failed_minor = 0;
    for (double level : jitters) {
        a = original;
        for (int i = 0; i < m; ++i) a[i * m + i] += level * trace;
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) {
            for (int j = 0; j <= i; ++j) {
                double sum = a[i * m + j];
                for (int k = 0; k < j; ++k) sum -= a[i * m + k] * a[j * m + k];
                if (i == j) {
                    if (sum <= 0.0) {
                        ok = false;
                        failed_minor = i + 1;
                        break;
                    }
                    a[i * m + i] = std::sqrt(sum);
                } else {
                    a[i * m + j] = sum / a[j * m + j];
                }
            }
        }
        if (ok) {
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j) a[i * m + j] = 0.0;
            return;
        }
    }
    throw ConditioningError(
        "cholesky: covariance not positive definite at leading minor " +
            std::to_string(failed_minor) + " even with jitter 1e-12 * trace",
        failed_minor);
}

// Seeded ensemble of sampled paths. Values are indexed (path, component,
// grid point); grid points with any zero coordinate are exactly 0.
struct PathEnsemble {
    CovarianceSpec spec;
    std::vector<TimePoint> grid;
    uint64_t seed = 0;
    int n_paths = 0;
    std::vector<double> values;  // (path * d + component) * grid.size() + g

    double value(int path, int component, int g) const {
        return values[(static_cast<size_t>(path) * spec.space_dim + component) * grid.size() + g];
    }

    void write_csv(std::ostream& os) const {
        os << "path,component,grid_index,value\n";
        char buf[64];
        for (int p = 0; p < n_paths; ++p)
            for (int c = 0; c < spec.space_dim; ++c)
                for (size_t g = 0; g < grid.size(); ++g) {
                    std::snprintf(buf, sizeof buf, "%d,%d,%zu,%.17g\n", p, c, g,
                                  value(p, c, static_cast<int>(g)));
                    os << buf;
                }
    }
};

inline PathEnsemble sample_paths(const CovarianceSpec& spec, const std::vector<TimePoint>& grid,
                                 int n_paths, uint64_t seed) {
    spec.validate();
    require(!grid.empty(), "sample_paths: grid must be non-empty");
    require(n_paths >= 1, "sample_paths: n_paths must be >= 1");
    for (const auto& g : grid) check_time_point(spec, g);

    const int m_all = static_cast<int>(grid.size());
    std::vector<int> live;  // grid indices with nonzero variance
    for (int g = 0; g < m_all; ++g) {
        bool zero = false;
        for (double c : grid[g]) zero = zero || (c == 0.0);
        if (!zero) live.push_back(g);
    }
    const int m = static_cast<int>(live.size());

    // One factor per component (shared for the Brownian sheet).
    const int d = spec.space_dim;
    const bool shared = spec.kind == ProcessKind::BrownianSheet;
    std::vector<std::vector<double>> factors(shared ? 1 : d);
    for (size_t c = 0; c < factors.size(); ++c) {
        std::vector<double> a(static_cast<size_t>(m) * m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                a[i * m + j] =
                    covariance(spec, static_cast<int>(c), grid[live[i]], grid[live[j]]);
        cholesky_with_jitter(a, m);
        factors[c] = std::move(a);
    }

    PathEnsemble e;
    e.spec = spec;
    e.grid = grid;
    e.seed = seed;
    e.n_paths = n_paths;
    e.values.assign(static_cast<size_t>(n_paths) * d * m_all, 0.0);
    parallel_for(static_cast<size_t>(n_paths), [&](size_t p) {
        std::vector<double> z(m);
        for (int c = 0; c < d; ++c) {
            NormalStream stream(seed, c, p);
            for (int i = 0; i < m; ++i) z[i] = stream.next();
            const std::vector<double>& L = factors[shared ? 0 : c];
            for (int i = 0; i < m; ++i) {
                double x = 0.0;
                for (int k = 0; k <= i; ++k) x += L[i * m + k] * z[k];
                e.values[(p * d + c) * m_all + live[i]] = x;
            }
        }
    });
    return e;
}

// Piecewise-linear function on [xs.front(), xs.back()], zero outside.
// Duplicated abscissae encode jumps, so indicators are representable.
struct GridFunction {
    std::vector<double> xs;
    std::vector<double> ys;

    static GridFunction indicator(double t) {
        return GridFunction{{0.0, t, t}, {1.0, 1.0, 0.0}};
    }

    double operator()(double x) const {
        if (xs.empty() || x < xs.front() || x > xs.back()) return 0.0;
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        size_t i = (it == xs.begin()) ? 0 : static_cast<size_t>(it - xs.begin() - 1);
        if (i + 1 >= xs.size()) return ys.back();
        const double x0 = xs[i], x1 = xs[i + 1];
        if (x1 == x0) return ys[i + 1];
        const double t = (x - x0) / (x1 - x0);
        return ys[i] * (1.0 - t) + ys[i + 1] * t;
    }
};

/// Canonical fBm inner product
///   <f,g> = H(2H-1) int int f(u) g(v) |u-v|^{2H-2} du dv
/// on [0, T], reduced to int_0^T w^{2H-2} G(w) dw with
/// G(w) = int_w^T [f(u)g(u-w) + f(u-w)g(u)] du.
inline double hh_inner(const GridFunction& f, const GridFunction& g, double hurst,
                       const QuadratureScheme& scheme) {
    require(hurst > 0.5 && hurst < 1.0, "hh_inner: Hurst index must be in (1/2, 1)");
    scheme.validate();
    const double T = std::max(f.xs.empty() ? 0.0 : f.xs.back(),
                              g.xs.empty() ? 0.0 : g.xs.back());
    if (T <= 0.0) return 0.0;

    std::vector<double> base;
    base.insert(base.end(), f.xs.begin(), f.xs.end());
    base.insert(base.end(), g.xs.begin(), g.xs.end());
    base.push_back(0.0);
    base.push_back(T);
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());

    auto inner = [&](double w) {
        std::vector<double> pts;
        for (double b : base) {
            if (b >= w && b <= T) pts.push_back(b);
            const double shifted = b + w;
            if (shifted >= w && shifted <= T) pts.push_back(shifted);
        }
        pts.push_back(w);
        pts.push_back(T);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        auto prod = [&](double u) { return f(u) * g(u - w) + f(u - w) * g(u); };
        return integrate_panels(prod, pts, 8);
    };

    const double raw = integrate_power_weighted(inner, 2.0 * hurst - 2.0, T, scheme);
    return hurst * (2.0 * hurst - 1.0) * raw;
}

}  // namespace currents
