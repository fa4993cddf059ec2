// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "currents/common.hpp"
#include "currents/gaussian_model.hpp"
#include "currents/hermite.hpp"
#include "currents/parallel.hpp"
#include "currents/rng.hpp"

namespace currents {

// Chaos coefficients of the delta-Dirac composition,
//   a_n^x(R) = R^{-n/2} p_R(x) H_n(x / sqrt(R)),
// assembled in log magnitude so small variances and high orders do not
// overflow the R^{-n/2} factor.
inline double delta_coefficient(int n, double x, double variance,
                                int ceiling = kDefaultOrderCeiling) {
    require(variance > 0.0, "delta_coefficient: variance must be > 0 (R(s)=0 excluded)");
    check_order(n, ceiling);
    const double xhat = x / std::sqrt(variance);
    const double nh = hermite_weighted_normalized(n, xhat, ceiling);  // hw / c_n
    const double log_mag = cn_bound_log(n) - 0.5 * std::log(2.0 * kPi * variance) -
                           0.5 * n * std::log(variance);
    return nh * std::exp(log_mag);
}

/// Fourier transform of x -> a_n^x(R):  e^{-xi^2 R / 2} (-i)^n xi^n / n!.
inline std::complex<double> fourier_coefficient(int n, double xi, double variance) {
    require(variance >= 0.0, "fourier_coefficient: variance must be >= 0");
    check_order(n);
    const double mag = std::exp(-0.5 * xi * xi * variance + n * std::log(std::abs(xi)) -
                                std::lgamma(n + 1.0));
    static const std::complex<double> cycle[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    std::complex<double> phase = cycle[n % 4];
    if (xi < 0 && n % 2 == 1) phase = -phase;
    if (n == 0) return {std::exp(-0.5 * xi * xi * variance), 0.0};
    if (xi == 0.0) return {0.0, 0.0};
    return phase * mag;
}

struct ChaosCoefficientSet {
    double x = 0.0;
    double variance = 1.0;
    int max_order = 0;
    std::vector<double> coeffs;
};

inline ChaosCoefficientSet delta_coefficients(double x, double variance, int n_max) {
    ChaosCoefficientSet set;
    set.x = x;
    set.variance = variance;
    set.max_order = n_max;
    set.coeffs.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) set.coeffs[n] = delta_coefficient(n, x, variance);
    return set;
}

struct FourierChaosCoefficientSet {
    double x = 0.0;
    double variance = 1.0;
    int max_order = 0;
    std::vector<std::complex<double>> coeffs;
};

inline FourierChaosCoefficientSet fourier_coefficients(double x, double variance, int n_max) {
    FourierChaosCoefficientSet set;
    set.x = x;
    set.variance = variance;
    set.max_order = n_max;
    set.coeffs.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) set.coeffs[n] = fourier_coefficient(n, x, variance);
    return set;
}

// Smallest truncation order with exponential-series tail bound
//   e^{-x^2 R / 2} sum_{n > m} |x|^n / n!  <  tol.
inline int auto_truncation_order(double x, double variance, double tol = 1e-12,
                                 int hard_max = 400) {
    const double ax = std::abs(x);
    const double damp = std::exp(-0.5 * x * x * variance);
    double term = 1.0;  // |x|^m / m! running value
    for (int m = 0; m < hard_max; ++m) {
        term *= (m == 0) ? 1.0 : ax / m;
        if (m + 2 > ax) {
            const double tail = term * (ax / (m + 1)) / (1.0 - ax / (m + 2));
            if (damp * tail < tol) return std::max(m, 2);
        }
    }
    return hard_max;
}

/// I_n of an indicator tensor evaluated on a path:
///   I_n(1_{[0,s]}^{otimes n}) = R(s)^{n/2} He_n(B_s / sqrt(R(s))).
inline double multiple_integral_value(int n, double path_value, double variance) {
    check_order(n, 512);
    if (n == 0) return 1.0;
    require(variance > 0.0, "multiple_integral_value: variance must be > 0");
    const double zhat = path_value / std::sqrt(variance);
    return std::pow(variance, 0.5 * n) * hermite_monic(n, zhat);
}

inline int grid_index_of(const PathEnsemble& e, const TimePoint& s) {
    for (size_t g = 0; g < e.grid.size(); ++g)
        if (e.grid[g] == s) return static_cast<int>(g);
    throw std::invalid_argument(
        "multiple_integral_on_path: time point is not a grid point; interpolation refused");
}

inline double multiple_integral_on_path(int n, const PathEnsemble& e, const TimePoint& s,
                                        int path, int component) {
    const int g = grid_index_of(e, s);
    return multiple_integral_value(n, e.value(path, component, g),
                                   variance_fn(e.spec, component, s));
}

/// Truncated delta-Dirac series on a sampled path:
///   sum_{n <= n_max} a_n^x(R) I_n = p_R(x) sum hcheck_n(xhat) hcheck_n(zhat).
inline double delta_series_value(double x, double variance, double path_value, int n_max) {
    require(variance > 0.0, "delta_series_value: variance must be > 0");
    const double xhat = x / std::sqrt(variance);
    const double zhat = path_value / std::sqrt(variance);
    std::vector<double> hx(n_max + 1), hz(n_max + 1);
    orthonormal_hermite_sweep(n_max, xhat, hx);
    orthonormal_hermite_sweep(n_max, zhat, hz);
    KahanSum s;
    for (int n = 0; n <= n_max; ++n) s.add(hx[n] * hz[n]);
    return gauss_kernel_1d(variance, x) * s.value();
}

inline double delta_series_eval(double x, const PathEnsemble& e, const TimePoint& s, int path,
                                int component, int n_max) {
    const int g = grid_index_of(e, s);
    return delta_series_value(x, variance_fn(e.spec, component, s),
                              e.value(path, component, g), n_max);
}

// Gaussian bump test function a (x-c)^k e^{-(x-c)^2 / (2 sigma^2)}; the
// class is closed under the pairings we need and admits independent
// Gauss-type quadrature oracles.
struct GaussianBump {
    double amplitude = 1.0 / kSqrt2Pi;
    double center = 0.0;
    double sigma = 1.0;
    int power = 0;

    double operator()(double x) const {
        const double u = x - center;
        double p = 1.0;
        for (int k = 0; k < power; ++k) p *= u;
        return amplitude * p * std::exp(-u * u / (2.0 * sigma * sigma));
    }
    static GaussianBump standard_density() { return {}; }
};

struct PairingReport {
    int n_max = 0;
    int n_paths = 0;
    uint64_t seed = 0;
    double gap_estimate = 0.0;
    double gap_stderr = 0.0;
    bool insufficient_sample = false;
    std::vector<double> per_order_contributions;  // beta_n^2, L2 mass per order
};

namespace detail {

// beta_n = int phi(x) p_{h2}(x) hcheck_n(x / sqrt(h2)) dx for n <= n_max,
// integrating over the bump's effective support (10 sigma).
inline std::vector<double> pairing_coefficients(const GaussianBump& phi, double h2, int n_max) {
    const double sh = std::sqrt(h2);
    const double lo = std::min(phi.center - 10.0 * phi.sigma, -10.0 * sh);
    const double hi = std::max(phi.center + 10.0 * phi.sigma, 10.0 * sh);
    std::vector<double> beta(n_max + 1, 0.0);
    const int panels = 64;
    const GaussRule& rule = gauss_legendre(16);
    std::vector<double> h(n_max + 1);
    for (int p = 0; p < panels; ++p) {
        const double a = lo + (hi - lo) * p / panels;
        const double b = lo + (hi - lo) * (p + 1) / panels;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (size_t q = 0; q < rule.x.size(); ++q) {
            const double x = mid + half * rule.x[q];
            const double wgt = half * rule.w[q] * phi(x) * gauss_kernel_1d(h2, x);
            orthonormal_hermite_sweep(n_max, x / sh, h);
            for (int n = 0; n <= n_max; ++n) beta[n] += wgt * h[n];
        }
    }
    return beta;
}

}  // namespace detail

/// L2 gap between phi(W(h)) and the order-n_max truncation of the
/// delta-Dirac pairing  int phi(x) f_trunc(x) dx,  |h|^2 = h2.
inline PairingReport stroock_pairing_test(const GaussianBump& phi, double h2, int n_max,
                                          int n_paths, uint64_t seed,
                                          double requested_precision = 1e-3) {
    require(h2 > 0.0, "stroock_pairing_test: |h|^2 must be > 0");
    check_order(n_max, 512);
    require(n_paths >= 2, "stroock_pairing_test: need at least 2 paths");
    const double sh = std::sqrt(h2);
    const std::vector<double> beta = detail::pairing_coefficients(phi, h2, n_max);

    std::vector<double> gap_sq(n_paths);
    parallel_for(static_cast<size_t>(n_paths), [&](size_t j) {
        NormalStream stream(seed, 0, j);
        const double z = stream.next();
        std::vector<double> h(n_max + 1);
        orthonormal_hermite_sweep(n_max, z, h);
        KahanSum pairing;
        for (int n = 0; n <= n_max; ++n) pairing.add(beta[n] * h[n]);
        const double g = pairing.value() - phi(sh * z);
        gap_sq[j] = g * g;
    });
    KahanSum sum, sumsq;
    for (double v : gap_sq) {
        sum.add(v);
        sumsq.add(v * v);
    }
    const double mean = sum.value() / n_paths;
    const double var = std::max(0.0, sumsq.value() / n_paths - mean * mean);
    const double se_mean = std::sqrt(var / n_paths);

    PairingReport rep;
    rep.n_max = n_max;
    rep.n_paths = n_paths;
    rep.seed = seed;
    rep.gap_estimate = std::sqrt(std::max(0.0, mean));
    rep.gap_stderr = rep.gap_estimate > 0 ? se_mean / (2.0 * rep.gap_estimate)
                                          : std::sqrt(se_mean);
    rep.insufficient_sample = rep.gap_stderr > requested_precision;
    rep.per_order_contributions.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n)
        rep.per_order_contributions[n] = beta[n] * beta[n];
    return rep;
}

/// Product-space pairing for d independent components; phi is a product
/// of per-component bumps and each component gets its own stream.
inline PairingReport stroock_pairing_test_product(const std::vector<GaussianBump>& phis,
                                                  const std::vector<double>& h2s, int n_max,
                                                  int n_paths, uint64_t seed,
                                                  double requested_precision = 1e-3) {
    const int d = static_cast<int>(phis.size());
    require(d >= 1 && static_cast<int>(h2s.size()) == d,
            "stroock_pairing_test_product: phi/h dimension mismatch");
    std::vector<std::vector<double>> betas(d);
    for (int i = 0; i < d; ++i) betas[i] = detail::pairing_coefficients(phis[i], h2s[i], n_max);

    std::vector<double> gap_sq(n_paths);
    parallel_for(static_cast<size_t>(n_paths), [&](size_t j) {
        double pairing = 1.0, direct = 1.0;
        std::vector<double> h(n_max + 1);
        for (int i = 0; i < d; ++i) {
            NormalStream stream(seed, i, j);
            const double z = stream.next();
            orthonormal_hermite_sweep(n_max, z, h);
            KahanSum s;
            for (int n = 0; n <= n_max; ++n) s.add(betas[i][n] * h[n]);
            pairing *= s.value();
            direct *= phis[i](std::sqrt(h2s[i]) * z);
        }
        const double g = pairing - direct;
        gap_sq[j] = g * g;
    });
    KahanSum sum, sumsq;
    for (double v : gap_sq) {
        sum.add(v);
        sumsq.add(v * v);
    }
    const double mean = sum.value() / n_paths;
    const double var = std::max(0.0, sumsq.value() / n_paths - mean * mean);
    const double se_mean = std::sqrt(var / n_paths);

    PairingReport rep;
    rep.n_max = n_max;
    rep.n_paths = n_paths;
    rep.seed = seed;
    rep.gap_estimate = std::sqrt(std::max(0.0, mean));
    rep.gap_stderr = rep.gap_estimate > 0 ? se_mean / (2.0 * rep.gap_estimate)
                                          : std::sqrt(se_mean);
    rep.insufficient_sample = rep.gap_stderr > requested_precision;
    return rep;
}

}  // namespace currents
