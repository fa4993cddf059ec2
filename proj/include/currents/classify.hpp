// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "currents/common.hpp"

namespace currents {

enum class Verdict { Finite, Divergent, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Finite: return "Finite";
        case Verdict::Divergent: return "Divergent";
        default: return "Inconclusive";
    }
}

struct RefinementPoint {
    int level = 0;
    double eps = 0.0;
    double value = 0.0;
};

// Outcome of the epsilon-truncation protocol for a candidate-singular
// integral. Finite needs the last two refinements within 1%; Divergent
// needs monotone growth above 10% per level across at least 3 levels.
struct RegularityClassification {
    double exponent_r = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<RefinementPoint> refinement_trace;
    double threshold_formula = 0.0;
    double value = 0.0;  // last refinement value (the integral when Finite)
    std::string note;
};

inline constexpr double kFiniteRelTol = 0.01;
inline constexpr double kGrowthRelTol = 0.10;
inline constexpr int kGrowthLevels = 3;

// Evaluates I(eps_k) = base + sum of shells, eps_k = eps0 * 2^-k, where
// shell(lo, hi) integrates the singular region slice [lo, hi). Stops as
// soon as either rule fires.
inline RegularityClassification classify_by_truncation(
    double base_value, const std::function<double(double, double)>& shell, double eps0,
    int max_levels) {
    RegularityClassification out;
    double value = base_value;
    out.refinement_trace.push_back({0, eps0, value});
    int growth_run = 0;
    int settle_run = 0;
    double prev_change = std::numeric_limits<double>::infinity();
    double eps = eps0;
    for (int k = 1; k <= max_levels; ++k) {
        const double lo = eps / 2.0;
        value += shell(lo, eps);
        eps = lo;
        out.refinement_trace.push_back({k, eps, value});
        const double prev = out.refinement_trace[out.refinement_trace.size() - 2].value;
        const double denom = std::max(std::abs(value), 1e-300);
        const double change = (value - prev) / denom;

        if (change > kGrowthRelTol) {
            ++growth_run;
            settle_run = 0;
        } else if (std::abs(change) < kFiniteRelTol) {
            // Guard against slow divergence: stabilization requires the
            // changes themselves not to be growing.
            if (std::abs(change) <= prev_change * (1.0 + 1e-9) || std::abs(change) < 1e-9)
                ++settle_run;
            else
                settle_run = 1;
            growth_run = 0;
        } else {
            growth_run = 0;
            settle_run = 0;
        }
        prev_change = std::abs(change);

        if (growth_run >= kGrowthLevels) {
            out.verdict = Verdict::Divergent;
            out.value = value;
            return out;
        }
        if (settle_run >= 2) {
            out.verdict = Verdict::Finite;
            out.value = value;
            return out;
        }
    }
    out.verdict = Verdict::Inconclusive;
    out.value = value;
    return out;
}

struct PowerLawFit {
    double exponent = 0.0;
    double r2 = 0.0;
    int points = 0;
};

// Log-log least squares of term magnitudes against order over [n_lo, n_hi],
// block-averaged over geometric bins so oscillatory term sequences
// (Hermite zeros) still fit cleanly.
inline PowerLawFit fit_power_law(std::span<const double> terms, int n_lo, int n_hi,
                                 int bins = 12) {
    PowerLawFit out;
    n_hi = std::min<int>(n_hi, static_cast<int>(terms.size()) - 1);
    if (n_lo < 1 || n_hi <= n_lo) return out;
    std::vector<double> xs, ys;
    const double ratio = std::pow(static_cast<double>(n_hi) / n_lo, 1.0 / bins);
    double lo = n_lo;
    for (int b = 0; b < bins; ++b) {
        const double hi = (b + 1 == bins) ? n_hi + 0.5 : lo * ratio;
        double sum = 0.0;
        int count = 0;
        for (int n = static_cast<int>(std::ceil(lo)); n <= static_cast<int>(hi) && n <= n_hi;
             ++n) {
            sum += terms[n];
            ++count;
        }
        if (count > 0 && sum > 0.0) {
            xs.push_back(std::log(std::sqrt(lo * hi)));
            ys.push_back(std::log(sum / count));
        }
        lo = hi;
    }
    if (xs.size() < 5) return out;
    const LinearFit f = fit_line(xs, ys);
    out.exponent = f.slope;
    out.r2 = f.r2;
    out.points = f.points;
    return out;
}

}  // namespace currents
