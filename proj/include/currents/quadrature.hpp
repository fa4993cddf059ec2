// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "currents/common.hpp"

namespace currents {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

namespace detail {

inline GaussRule make_gauss_legendre(int n) {
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    // Newton iteration on P_n, seeded with the Chebyshev-like estimate.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        rule.w[i] = w;
        rule.w[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace detail

// Cached rules; safe for concurrent readers once built.
inline const GaussRule& gauss_legendre(int n) {
    require(n >= 1, "gauss_legendre: order must be >= 1");
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::make_gauss_legendre(n)).first;
    return it->second;
}

template <class F>
double integrate(F&& f, double a, double b, int nodes) {
    const GaussRule& g = gauss_legendre(nodes);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    KahanSum s;
    for (size_t i = 0; i < g.x.size(); ++i) s.add(g.w[i] * f(mid + half * g.x[i]));
    return half * s.value();
}

template <class F>
double integrate_panels(F&& f, const std::vector<double>& breakpoints, int nodes) {
    KahanSum s;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] > breakpoints[i])
            s.add(integrate(f, breakpoints[i], breakpoints[i + 1], nodes));
    }
    return s.value();
}

// Geometric breakpoints {a, a*2^(1/m), ..., b} for endpoint-graded meshes;
// m = panels per octave.
inline std::vector<double> geometric_breakpoints(double a, double b, int per_octave = 1) {
    require(a > 0 && b > a, "geometric_breakpoints: need 0 < a < b");
    std::vector<double> brk;
    brk.push_back(a);
    const double ratio = std::pow(2.0, 1.0 / std::max(1, per_octave));
    double t = a;
    while (t * ratio < b) {
        t *= ratio;
        brk.push_back(t);
    }
    brk.push_back(b);
    return brk;
}

// Breakpoints for [0, b] with grading toward 0 starting at scale `first`.
inline std::vector<double> graded_from_zero(double b, double first, int per_octave = 1) {
    require(b > 0, "graded_from_zero: need b > 0");
    first = std::min(first, b / 2);
    std::vector<double> brk = geometric_breakpoints(first, b, per_octave);
    brk.insert(brk.begin(), 0.0);
    return brk;
}

enum class SingularityPolicy { SubtractAndTransform, GradedMesh };

// Nodes/weights policy for kernels with integrable endpoint or diagonal
// singularities. `refinement_level` bounds the epsilon-truncation ladder.
struct QuadratureScheme {
    int panel_count = 16;
    int nodes_per_panel = 16;
    SingularityPolicy singularity_policy = SingularityPolicy::SubtractAndTransform;
    int refinement_level = 44;

    void validate() const {
        require(panel_count >= 1, "QuadratureScheme: panel_count must be >= 1");
        require(nodes_per_panel >= 1, "QuadratureScheme: nodes_per_panel must be >= 1");
        require(refinement_level >= 1, "QuadratureScheme: refinement_level must be >= 1");
    }
    QuadratureScheme refined() const {
        QuadratureScheme s = *this;
        s.panel_count *= 2;
        return s;
    }
};

// Integral of w^alpha * f(w) over [0, b] with alpha in (-1, 0], f smooth.
// The substitution t = w^(alpha+1) removes the singularity exactly:
//   int_0^b w^alpha f(w) dw = 1/(alpha+1) int_0^{b^(alpha+1)} f(t^(1/(alpha+1))) dt.
template <class F>
double integrate_power_weighted(F&& f, double alpha, double b, const QuadratureScheme& scheme) {
    require(alpha > -1.0, "integrate_power_weighted: exponent must be > -1");
    const int nodes = scheme.nodes_per_panel;
    if (scheme.singularity_policy == SingularityPolicy::SubtractAndTransform) {
        const double p = alpha + 1.0;
        const double tb = std::pow(b, p);
        auto g = [&](double t) { return f(std::pow(t, 1.0 / p)); };
        std::vector<double> brk;
        const int m = std::max(2, scheme.panel_count);
        for (int i = 0; i <= m; ++i) brk.push_back(tb * i / m);
        return integrate_panels(g, brk, nodes) / p;
    }
    // Graded mesh: geometric panels absorb the w^alpha factor.
    auto g = [&](double w) { return std::pow(w, alpha) * f(w); };
    const int per_octave = std::max(1, scheme.panel_count / 16);
    std::vector<double> brk = graded_from_zero(b, b * std::pow(2.0, -48), per_octave);
    brk.erase(brk.begin());  // [0, first] contributes O(first^(alpha+1))
    return integrate_panels(g, brk, nodes);
}

}  // namespace currents
