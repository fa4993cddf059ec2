// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "currents/common.hpp"

namespace currents {

namespace detail {

// Series for the regularized lower incomplete gamma P(a,x), x < a+1.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a,x) = 1 - P(a,x), x >= a+1.
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
inline double gamma_p(double a, double x) {
    require(a > 0.0 && x >= 0.0, "gamma_p: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

/// int_0^T s^n e^{-c s} ds = gamma(n+1, c T) / c^{n+1}, with the c = 0 limit.
inline double power_exp_moment(int n, double c, double T) {
    require(n >= 0 && T >= 0.0 && c >= 0.0, "power_exp_moment: bad arguments");
    if (T == 0.0) return 0.0;
    if (c == 0.0) return std::pow(T, n + 1) / (n + 1);
    const double logval = std::lgamma(n + 1.0) - (n + 1.0) * std::log(c);
    return std::exp(logval) * gamma_p(n + 1.0, c * T);
}

}  // namespace currents
