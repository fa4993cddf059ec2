// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "currents/watanabe.hpp"

using namespace currents;

TEST_CASE("delta-Dirac norm thresholds") {
    const auto conv = watanabe_delta_norm(1.0, 1.0, 0.6);
    CHECK(conv.classification == SeriesClass::Convergent);
    const auto div = watanabe_delta_norm(1.0, 1.0, 0.4);
    CHECK(div.classification == SeriesClass::Divergent);
    CHECK_THROWS_AS(watanabe_delta_norm(1.0, 0.0, 0.6), std::domain_error);
    // odd orders vanish at x = 0
    const auto zero = watanabe_delta_norm(0.0, 1.0, 0.6, 200);
    for (int n = 1; n <= 199; n += 2) CHECK(zero.terms[n] == 0.0);
}

TEST_CASE("sign convention: paper-facing wrapper equals the canonical series") {
    const double x = 0.7, s = 1.3, alpha = 0.55;
    const auto wrapped = watanabe_delta_norm(x, s, alpha, 300);
    const double xhat = x / std::sqrt(s);
    std::vector<double> h(301), masses(301);
    orthonormal_hermite_sweep(300, xhat, h);
    const double p = gauss_kernel_1d(s, x);
    for (int n = 0; n <= 300; ++n) masses[n] = p * p * h[n] * h[n];
    const auto canonical = watanabe_norm_series(-alpha, masses);
    REQUIRE(wrapped.terms.size() == canonical.terms.size());
    for (size_t n = 0; n < wrapped.terms.size(); ++n)
        CHECK(wrapped.terms[n] == canonical.terms[n]);
}

TEST_CASE("series invariants: nonnegative terms, monotone partial sums") {
    for (const auto& s : {watanabe_delta_norm(1.0, 1.0, 0.6),
                          watanabe_current_bm(1.0, 0.1, 1.0, -0.6, 600)}) {
        for (double t : s.terms) CHECK(t >= 0.0);
        for (size_t n = 1; n < s.partial_sums.size(); ++n)
            CHECK(s.partial_sums[n] >= s.partial_sums[n - 1]);
    }
}

TEST_CASE("Brownian current series thresholds") {
    const auto conv = watanabe_current_bm(1.0, 0.1, 1.0, -0.6);
    CHECK(conv.classification == SeriesClass::Convergent);
    CHECK(conv.fit_r2 > 0.99);
    const auto div = watanabe_current_bm(1.0, 0.1, 1.0, -0.3);
    CHECK(div.classification == SeriesClass::Divergent);
    CHECK_THROWS_AS(watanabe_current_bm(1.0, 0.0, 1.0, -0.6), std::domain_error);
    CHECK_THROWS_AS(watanabe_current_bm(1.0, -0.1, 1.0, -0.6), std::domain_error);
}

TEST_CASE("Brownian current terms reflect the 1/sqrt(n) Stirling factor") {
    // t_n (n+2)^{-alpha} sqrt(n) stabilizes in decade-block means
    const double alpha = -0.6;
    const auto s = watanabe_current_bm(1.0, 0.1, 1.0, alpha, 1000);
    auto block_mean = [&](int lo, int hi) {
        double acc = 0;
        for (int n = lo; n < hi; ++n)
            acc += s.terms[n] * std::pow(n + 2.0, -alpha) * std::sqrt(double(n));
        return acc / (hi - lo);
    };
    const double early = block_mean(150, 350);
    const double late = block_mean(600, 1000);
    CHECK(late / early > 0.8);
    CHECK(late / early < 1.25);
}

TEST_CASE("classification is monotone in alpha") {
    const auto terms = watanabe_fbm_weighted_terms(1.0, 0.75, 1.0, 192, QuadratureScheme{});
    int state = 0;  // Convergent zone -> Divergent zone as alpha grows
    for (double alpha = -1.4; alpha <= -0.3; alpha += 0.1) {
        const auto s = watanabe_current_fbm_from_terms(terms, alpha);
        if (s.classification == SeriesClass::Convergent) CHECK(state == 0);
        if (s.classification == SeriesClass::Divergent) state = 1;
    }
    CHECK(state == 1);
}

TEST_CASE("fractional per-order terms") {
    QuadratureScheme scheme;
    CHECK(watanabe_current_fbm_B(0, 0.75, 1.0, 1.0, scheme) == 0.0);
    const double a0 = watanabe_current_fbm_A(0, 0.75, 1.0, 1.0, scheme);
    CHECK(a0 > 0.0);
    const auto terms = watanabe_fbm_weighted_terms(1.0, 0.75, 1.0, 64, scheme);
    for (int n = 0; n <= 64; ++n) {
        CHECK(terms.a_weighted[n] >= 0.0);
        CHECK(terms.b_weighted[n] >= 0.0);
    }
    CHECK_THROWS_AS(watanabe_fbm_weighted_terms(0.0, 0.75, 1.0, 8, scheme),
                    std::domain_error);
    // quadrature stays finite approaching the Brownian limit
    const double a_lim = watanabe_current_fbm_A(2, 0.501, 1.0, 1.0, scheme);
    CHECK(std::isfinite(a_lim));
    CHECK(a_lim >= 0.0);
}

TEST_CASE("diagonal-pair decay rate") {
    // (n+1)! A(n) decays like n^{1/(2H) - 3/2}
    const double H = 0.75;
    const auto terms = watanabe_fbm_weighted_terms(1.0, H, 1.0, 200, QuadratureScheme{});
    const PowerLawFit fit = fit_power_law(terms.a_weighted, 20, 200);
    CHECK(fit.r2 > 0.98);
    CHECK(std::abs(fit.exponent - (0.5 / H - 1.5)) < 0.15);
}

TEST_CASE("off-diagonal double integral obeys the Lemma-2 scaling") {
    QuadratureScheme scheme;
    for (double H : {0.6, 0.75, 0.9}) {
        const auto j = lemma2_double_integrals(H, 1.0, 200, scheme);
        std::vector<double> xs, ys;
        for (int n = 20; n <= 200; n += 4) {
            xs.push_back(std::log(n));
            ys.push_back(std::log(j[n]));
        }
        const LinearFit fit = fit_line(xs, ys);
        CHECK(std::abs(fit.slope + 0.5 / H) < 0.1);
        // dual route: self-similarity ties the double integral to the
        // one-dimensional kernel integral
        for (int n : {2, 5, 20, 100}) {
            const double expect = std::pow(1.0, 2 - 2 * H) / (1.0 - H) *
                                  edd_integral(H, n - 1, scheme);
            CHECK(j[n] == doctest::Approx(expect).epsilon(2e-3));
        }
    }
}

TEST_CASE("one-dimensional kernel integral") {
    QuadratureScheme scheme;
    const double v1 = edd_integral(0.75, 1, scheme);
    CHECK(v1 > 0.0);
    CHECK(std::isfinite(v1));
    // brute-force oracle on a fine graded mesh at 1e-8
    {
        auto f = [&](double z) {
            const double rho = std::min(
                1.0, 0.5 * (1.0 + std::pow(z, 1.5) - std::pow(1.0 - z, 1.5)) /
                         std::pow(z, 0.75));
            return rho * std::pow(z, -0.75);
        };
        std::vector<double> brk = graded_from_zero(0.5, 1e-12, 4);
        std::vector<double> upper;
        for (double d : graded_from_zero(0.5, 1e-12, 4)) upper.push_back(1.0 - d);
        std::sort(upper.begin(), upper.end());
        brk.insert(brk.end(), upper.begin(), upper.end());
        std::sort(brk.begin(), brk.end());
        brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
        const double oracle = integrate_panels(f, brk, 32);
        CHECK(v1 == doctest::Approx(oracle).epsilon(1e-8));
    }
    CHECK_THROWS_AS(edd_integral(0.75, 0, scheme), std::domain_error);
    // value * n^{1/(2H)} bounded; sequence non-increasing for n >= 2
    for (double H : {0.6, 0.9}) {
        double prev = edd_integral(H, 2, scheme);
        double lo = 1e300, hi = 0.0;
        for (int n : {10, 20, 50, 100, 200, 500}) {
            const double v = edd_integral(H, n, scheme);
            if (n > 2) CHECK(v <= prev * (1.0 + 1e-12));
            prev = v;
            const double scaled = v * std::pow(n, 0.5 / H);
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
        }
        CHECK(hi / lo < 2.5);
    }
    // the pointwise bound R(1,z) z^{-2H} <= 1 is false (so monotonicity
    // rests on rho <= 1, which is Cauchy-Schwarz); pin the counterexample
    const double claim = 0.5 * (1.0 + std::pow(0.5, 1.5) - std::pow(0.5, 1.5)) *
                         std::pow(0.5, -1.5);
    CHECK(claim > 1.0);
}

TEST_CASE("endpoint-weighted variant decays like n^{1/(2H)-1}") {
    QuadratureScheme scheme;
    for (double H : {0.6, 0.75}) {
        std::vector<double> xs, ys;
        for (int n = 20; n <= 400; n += 10) {
            xs.push_back(std::log(n));
            ys.push_back(std::log(edd_integral_endpoint_weighted(H, n, scheme)));
        }
        const LinearFit fit = fit_line(xs, ys);
        CHECK(std::abs(fit.slope - (0.5 / H - 1.0)) < 0.1);
    }
}

TEST_CASE("fractional current series thresholds") {
    QuadratureScheme scheme;
    const auto terms = watanabe_fbm_weighted_terms(1.0, 0.75, 1.0, 256, scheme);
    const auto conv = watanabe_current_fbm_from_terms(terms, -0.95);
    CHECK(conv.classification == SeriesClass::Convergent);
    const auto div = watanabe_current_fbm_from_terms(terms, -0.7);
    CHECK(div.classification == SeriesClass::Divergent);
    // threshold formula approaches the Brownian 1/2 as H -> 1/2
    CHECK(std::abs((1.5 - 0.5 / 0.501) - 0.5) < 0.01);
}
