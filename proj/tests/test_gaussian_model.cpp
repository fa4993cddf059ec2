// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <random>

#include "currents/gaussian_model.hpp"

using namespace currents;

TEST_CASE("covariance closed forms") {
    const auto sheet = CovarianceSpec::brownian(2, 1, 2.0);
    CHECK(covariance(sheet, 0, {1.0, 2.0}, {2.0, 1.0}) == 1.0);
    const auto fbm = CovarianceSpec::fbm(0.75);
    CHECK(covariance(fbm, 0, {1.0}, {1.0}) == doctest::Approx(1.0));
    CHECK(covariance(fbm, 0, {0.5}, {1.0}) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(covariance(fbm, 3, {0.5}, {1.0}), std::out_of_range);
}

TEST_CASE("variance function") {
    const auto sheet = CovarianceSpec::brownian(2);
    CHECK(variance_fn(sheet, 0, {0.5, 0.5}) == doctest::Approx(0.25));
    const auto fbm = CovarianceSpec::fbm(0.75);
    CHECK(variance_fn(fbm, 0, {0.25}) == doctest::Approx(std::pow(0.25, 1.5)));
    CHECK(variance_fn(sheet, 0, {0.0, 0.7}) == 0.0);
}

TEST_CASE("covariance symmetry on random points") {
    std::mt19937 gen(1234);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto fbm = CovarianceSpec::fbm(0.8, 2, 1, 1.0);
    const auto sheet = CovarianceSpec::brownian(2, 1, 1.0);
    for (int i = 0; i < 200; ++i) {
        const TimePoint s{unif(gen), unif(gen)}, t{unif(gen), unif(gen)};
        CHECK(covariance(fbm, 0, s, t) == covariance(fbm, 0, t, s));
        CHECK(covariance(sheet, 0, s, t) == covariance(sheet, 0, t, s));
        CHECK(covariance(fbm, 0, s, s) >= 0.0);
    }
}

TEST_CASE("fractional inner product against the covariance oracle") {
    QuadratureScheme scheme;
    const GridFunction one = GridFunction::indicator(1.0);
    for (double H : {0.7, 0.9})
        CHECK(hh_inner(one, one, H, scheme) == doctest::Approx(1.0).epsilon(1e-6));
    const GridFunction zero{{0.0, 1.0}, {0.0, 0.0}};
    CHECK(hh_inner(zero, one, 0.7, scheme) == 0.0);
    CHECK_THROWS_AS(hh_inner(one, one, 0.4, scheme), std::domain_error);
}

TEST_CASE("inner-product identity matches R^H(t,s) at 1e-5") {
    QuadratureScheme scheme;
    const std::pair<double, double> pts[] = {{1.0, 1.0}, {1.0, 0.5}, {0.7, 0.3}};
    for (double H : {0.6, 0.75, 0.9})
        for (auto [t, s] : pts) {
            const double lhs =
                hh_inner(GridFunction::indicator(t), GridFunction::indicator(s), H, scheme);
            CHECK(lhs == doctest::Approx(fbm_cov_1d(H, s, t)).epsilon(1e-5));
        }
}

TEST_CASE("quadrature error decreases with order >= 1 under refinement") {
    QuadratureScheme coarse;
    coarse.nodes_per_panel = 2;
    coarse.panel_count = 2;
    const GridFunction one = GridFunction::indicator(1.0);
    const double H = 0.7;
    std::vector<double> errs;
    QuadratureScheme s = coarse;
    for (int level = 0; level < 3; ++level) {
        errs.push_back(std::abs(hh_inner(one, one, H, s) - 1.0));
        s = s.refined();  // doubles panel_count
    }
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
    CHECK(errs[0] / errs[1] >= 2.0);  // empirical order >= 1
    CHECK(errs[1] / errs[2] >= 2.0);
}

TEST_CASE("cholesky jitter and failure diagnostics") {
    // exactly repeated grid point: PSD but singular, jitter must rescue
    std::vector<double> a = {1.0, 1.0, 1.0, 1.0};
    cholesky_with_jitter(a, 2);
    CHECK(a[0] > 0.0);
    // indefinite matrix: must throw and name the offending leading minor
    std::vector<double> bad = {1.0, 2.0, 2.0, 1.0};
    try {
        cholesky_with_jitter(bad, 2);
        CHECK(false);
    } catch (const ConditioningError& e) {
        CHECK(e.leading_minor == 2);
    }
}

TEST_CASE("positive semidefiniteness of random grids") {
    std::mt19937 gen(99);
    std::uniform_real_distribution<double> unif(0.01, 1.0);
    for (int rep = 0; rep < 3; ++rep) {
        std::vector<TimePoint> grid1;
        for (int i = 0; i < 120; ++i) grid1.push_back({unif(gen)});
        CHECK_NOTHROW(sample_paths(CovarianceSpec::fbm(0.9), grid1, 1, 1));
        std::vector<TimePoint> grid2;
        for (int i = 0; i < 60; ++i) grid2.push_back({unif(gen), unif(gen)});
        CHECK_NOTHROW(sample_paths(CovarianceSpec::brownian(2), grid2, 1, 1));
    }
}

TEST_CASE("sampled variance matches the covariance oracle") {
    const int n = 200000;
    const auto bm = CovarianceSpec::brownian();
    const auto e = sample_paths(bm, {{0.5}, {1.0}}, n, 77);
    double var1 = 0.0, cov = 0.0, varh = 0.0;
    for (int p = 0; p < n; ++p) {
        const double b5 = e.value(p, 0, 0), b1 = e.value(p, 0, 1);
        varh += b5 * b5;
        var1 += b1 * b1;
        cov += b5 * b1;
    }
    var1 /= n;
    varh /= n;
    cov /= n;
    const double se = std::sqrt(2.0 / n);
    CHECK(std::abs(var1 - 1.0) < 3 * se);
    CHECK(std::abs(varh - 0.5) < 3 * se * 0.5);
    CHECK(std::abs(cov - 0.5) < 4 * se);

    const auto fbm = CovarianceSpec::fbm(0.75);
    const auto ef = sample_paths(fbm, {{1.0}}, n, 78);
    double v = 0.0;
    for (int p = 0; p < n; ++p) v += ef.value(p, 0, 0) * ef.value(p, 0, 0);
    CHECK(std::abs(v / n - 1.0) < 3 * se);
}

TEST_CASE("determinism: seeds, worker counts, zero-coordinate points") {
    const auto spec = CovarianceSpec::fbm(0.6, 1, 2, 1.0);
    const std::vector<TimePoint> grid = {{0.25}, {0.5}, {1.0}};
    const auto a = sample_paths(spec, grid, 500, 4242);
    const auto b = sample_paths(spec, grid, 500, 4242);
    CHECK(a.values == b.values);
    const auto c = sample_paths(spec, grid, 500, 4243);
    CHECK(a.values != c.values);

    setenv("CURRENTS_WORKERS", "1", 1);
    const auto w1 = sample_paths(spec, grid, 500, 4242);
    setenv("CURRENTS_WORKERS", "5", 1);
    const auto w5 = sample_paths(spec, grid, 500, 4242);
    unsetenv("CURRENTS_WORKERS");
    CHECK(w1.values == w5.values);

    const auto sheet = CovarianceSpec::brownian(2);
    const auto ez = sample_paths(sheet, {{0.0, 0.5}, {0.5, 0.5}}, 10, 1);
    for (int p = 0; p < 10; ++p) CHECK(ez.value(p, 0, 0) == 0.0);
}

TEST_CASE("csv export shape") {
    const auto e = sample_paths(CovarianceSpec::brownian(), {{0.5}, {1.0}}, 2, 3);
    std::ostringstream os;
    e.write_csv(os);
    const std::string body = os.str();
    CHECK(body.substr(0, 37) == "path,component,grid_index,value\n0,0,0");
    CHECK(std::count(body.begin(), body.end(), '\n') == 5);  // header + 4 rows
}
