// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "currents/common.hpp"
#include "currents/quadrature.hpp"

namespace currents {

// Hermite polynomials under the 1/n! normalization:
//   H_n(x) = ((-1)^n / n!) e^{x^2/2} d^n/dx^n e^{-x^2/2},
// three-term recurrence (n+1) H_{n+1}(x) = x H_n(x) - H_{n-1}(x).
// Every chaos coefficient downstream assumes this convention; the monic
// polynomials He_n = n! H_n are exposed separately where multiple
// integrals need them.

inline constexpr int kDefaultOrderCeiling = 2000;

inline void check_order(int n, int ceiling = kDefaultOrderCeiling) {
    if (n < 0) throw std::domain_error("hermite: order must be >= 0");
    if (n > ceiling) throw CapacityError("hermite: order exceeds ceiling");
}

inline double hermite_eval(int n, double x, int ceiling = kDefaultOrderCeiling) {
    check_order(n, ceiling);
    require_finite(x, "hermite_eval: x must be finite");
    if (n == 0) return 1.0;
    double hm = 1.0, h = x;
    for (int k = 1; k < n; ++k) {
        const double next = (x * h - hm) / (k + 1);
        hm = h;
        h = next;
    }
    return h;
}

/// Monic (probabilists') polynomial He_n = n! H_n.
inline double hermite_monic(int n, double x, int ceiling = kDefaultOrderCeiling) {
    check_order(n, ceiling);
    require_finite(x, "hermite_monic: x must be finite");
    if (n == 0) return 1.0;
    double hm = 1.0, h = x;
    for (int k = 1; k < n; ++k) {
        const double next = x * h - k * hm;
        hm = h;
        h = next;
    }
    return h;
}

/// ln c_n for the uniform bound |H_n(y) e^{-y^2/2}| <= c_n,
/// c_n = 2^{n/2} (2 / (n! pi)) Gamma((n+1)/2). Log form: c_n itself
/// underflows doubles near n ~ 260.
inline double cn_bound_log(int n) {
    check_order(n);
    return 0.5 * n * std::numbers::ln2 + std::log(2.0 / kPi) +
           std::lgamma(0.5 * (n + 1)) - std::lgamma(n + 1.0);
}

inline double cn_bound(int n) {
    return std::exp(cn_bound_log(n));
}

/// ln(n! c_n^2); the sequence n! c_n^2 behaves like a constant times
/// n^{-1/2} and stays representable at every order.
inline double log_n_factorial_cn_sq(int n) {
    check_order(n);
    return n * std::numbers::ln2 + 2.0 * std::log(2.0 / kPi) +
           2.0 * std::lgamma(0.5 * (n + 1)) - std::lgamma(n + 1.0);
}

namespace detail {

// Recurrence coefficients for the c_n-normalized weighted polynomials
//   hhat_n(y) = H_n(y) e^{-y^2/2} / c_n,   |hhat_n| <= 1,
//   hhat_{n+1} = y * gamma_n * hhat_n - delta_n * hhat_{n-1}.
struct NormalizedHermiteTable {
    std::vector<double> gamma;  // c_n / ((n+1) c_{n+1})
    std::vector<double> delta;  // c_{n-1} / ((n+1) c_{n+1})
    std::vector<double> cn_log;
    int max_order = 0;
};

inline std::shared_ptr<const NormalizedHermiteTable> normalized_hermite_table(int n_max) {
    static std::shared_ptr<const NormalizedHermiteTable> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (cache && cache->max_order >= n_max) return cache;
    auto t = std::make_shared<NormalizedHermiteTable>();
    const int m = std::max(n_max, 64);
    t->max_order = m;
    t->cn_log.resize(m + 2);
    for (int n = 0; n <= m + 1; ++n) t->cn_log[n] = cn_bound_log(n);
    t->gamma.resize(m + 1);
    t->delta.resize(m + 1);
    for (int n = 0; n <= m; ++n) {
        t->gamma[n] = std::exp(t->cn_log[n] - t->cn_log[n + 1]) / (n + 1);
        t->delta[n] = (n == 0) ? 0.0 : std::exp(t->cn_log[n - 1] - t->cn_log[n + 1]) / (n + 1);
    }
    cache = t;
    return cache;
}

}  // namespace detail

// Sweep hhat_n(y) = H_n(y) e^{-y^2/2} / c_n for n = 0..n_max into out.
inline void hermite_weighted_normalized_sweep(int n_max, double y, std::span<double> out,
                                              int ceiling = kDefaultOrderCeiling) {
    check_order(n_max, ceiling);
    require_finite(y, "hermite_weighted_normalized_sweep: y must be finite");
    auto table = detail::normalized_hermite_table(n_max);
    const double w = std::exp(-0.5 * y * y);
    double hm = w / std::exp(table->cn_log[0]);
    out[0] = hm;
    if (n_max == 0) return;
    double h = y * w / std::exp(table->cn_log[1]);
    out[1] = h;
    for (int n = 1; n < n_max; ++n) {
        const double next = y * table->gamma[n] * h - table->delta[n] * hm;
        hm = h;
        h = next;
        out[n + 1] = h;
    }
}

inline double hermite_weighted_normalized(int n, double y, int ceiling = kDefaultOrderCeiling) {
    std::vector<double> buf(n + 1);
    hermite_weighted_normalized_sweep(n, y, buf, ceiling);
    return buf[n];
}

/// H_n(y) e^{-y^2/2}, carried in weighted form so intermediates never
/// exceed c_n. Underflows to 0 for very large n, where c_n itself is
/// below the double range; use the normalized sweep there.
inline double hermite_weighted(int n, double y, int ceiling = kDefaultOrderCeiling) {
    return hermite_weighted_normalized(n, y, ceiling) * std::exp(cn_bound_log(n));
}

// Orthonormal sweep hcheck_n(y) = He_n(y) / sqrt(n!), n = 0..n_max.
// E[hcheck_n(Z)^2] = 1 for standard normal Z.
inline void orthonormal_hermite_sweep(int n_max, double y, std::span<double> out,
                                      int ceiling = kDefaultOrderCeiling) {
    check_order(n_max, ceiling);
    require_finite(y, "orthonormal_hermite_sweep: y must be finite");
    double hm = 1.0;
    out[0] = 1.0;
    if (n_max == 0) return;
    double h = y;
    out[1] = y;
    for (int n = 1; n < n_max; ++n) {
        const double next = (y * h - std::sqrt(static_cast<double>(n)) * hm) /
                            std::sqrt(static_cast<double>(n + 1));
        hm = h;
        h = next;
        out[n + 1] = h;
    }
}

struct GaussKernelParams {
    double variance = 1.0;
    int dimension = 1;
    void validate() const {
        require(variance > 0.0, "GaussKernelParams: variance must be > 0");
        require(dimension >= 1, "GaussKernelParams: dimension must be >= 1");
    }
};

/// Product Gaussian kernel prod_i p_variance(x_i).
inline double gauss_kernel(const GaussKernelParams& params, std::span<const double> x) {
    params.validate();
    require(static_cast<int>(x.size()) == params.dimension,
            "gauss_kernel: point dimension mismatch");
    double logv = 0.0;
    for (double xi : x) {
        require_finite(xi, "gauss_kernel: coordinates must be finite");
        logv += -0.5 * std::log(2.0 * kPi * params.variance) -
                xi * xi / (2.0 * params.variance);
    }
    return std::exp(logv);
}

inline double gauss_kernel_1d(double variance, double x) {
    require(variance > 0.0, "gauss_kernel: variance must be > 0");
    return std::exp(-x * x / (2.0 * variance)) / std::sqrt(2.0 * kPi * variance);
}

/// Raw oscillatory moment  int_0^inf u^n e^{-u^2} g(u y sqrt2) du with
/// g = cos for even n, sin for odd n.
inline double hermite_oscillatory_moment(int n, double y) {
    check_order(n, 64);  // quadrature eval only meant for small orders
    const double b = y * std::numbers::sqrt2;
    const bool even = (n % 2 == 0);
    auto f = [&](double u) {
        const double osc = even ? std::cos(u * b) : std::sin(u * b);
        return std::pow(u, n) * std::exp(-u * u) * osc;
    };
    const double umax = std::sqrt(0.5 * n) + 9.0;
    std::vector<double> brk;
    const int panels = static_cast<int>(std::ceil(umax * (2.0 + std::abs(b))));
    for (int i = 0; i <= panels; ++i) brk.push_back(umax * i / panels);
    return integrate_panels(f, brk, 16);
}

/// H_n(y) e^{-y^2/2} via the oscillatory-integral identity
///   (-1)^{floor(n/2)} 2^{n/2} (2/(n! sqrt(pi))) int_0^inf u^n e^{-u^2} g(u y sqrt2) du.
/// The sqrt(pi) in the constant is forced by the n = 0 case
/// (int_0^inf e^{-u^2} cos(u b) du = (sqrt(pi)/2) e^{-b^2/4}).
inline double hermite_weighted_oscillatory(int n, double y) {
    const double moment = hermite_oscillatory_moment(n, y);
    const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
    const double logc = 0.5 * n * std::numbers::ln2 + std::log(2.0) -
                        0.5 * std::log(kPi) - std::lgamma(n + 1.0);
    return sign * std::exp(logc) * moment;
}

}  // namespace currents
