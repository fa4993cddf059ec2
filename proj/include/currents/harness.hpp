// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "currents/chaos.hpp"
#include "currents/current_regularity.hpp"
#include "currents/io.hpp"
#include "currents/parallel.hpp"
#include "currents/watanabe.hpp"

namespace currents {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

enum class Experiment {
    Prop1Series,
    Prop1MC,
    Prop2,
    Prop3,
    Prop4,
    Prop5,
    Prop6,
    Stroock,
    EddScaling,
    StirlingCn,
};

inline const char* to_string(Experiment e) {
    switch (e) {
        case Experiment::Prop1Series: return "Prop1Series";
        case Experiment::Prop1MC: return "Prop1MC";
        case Experiment::Prop2: return "Prop2";
        case Experiment::Prop3: return "Prop3";
        case Experiment::Prop4: return "Prop4";
        case Experiment::Prop5: return "Prop5";
        case Experiment::Prop6: return "Prop6";
        case Experiment::Stroock: return "Stroock";
        case Experiment::EddScaling: return "EddScaling";
        default: return "StirlingCn";
    }
}

inline Experiment parse_experiment(const std::string& s) {
    static const std::map<std::string, Experiment> names = {
        {"Prop1Series", Experiment::Prop1Series}, {"Prop1MC", Experiment::Prop1MC},
        {"Prop2", Experiment::Prop2},             {"Prop3", Experiment::Prop3},
        {"Prop4", Experiment::Prop4},             {"Prop5", Experiment::Prop5},
        {"Prop6", Experiment::Prop6},             {"Stroock", Experiment::Stroock},
        {"EddScaling", Experiment::EddScaling},   {"StirlingCn", Experiment::StirlingCn}};
    auto it = names.find(s);
    if (it == names.end()) throw ConfigError("experiment: unknown name '" + s + "'");
    return it->second;
}

struct ExperimentConfig {
    Experiment experiment = Experiment::Prop1Series;
    CovarianceSpec driver = CovarianceSpec::brownian();
    std::vector<double> sweep;
    std::map<std::string, double> tolerances;
    uint64_t seed = 20260810;
    std::string output_path;

    double x = 1.0;
    double a = 0.1;  // lower time limit for the Brownian Watanabe series
    double alpha = -0.6;
    int n_max = -1;  // auto
    int n_paths = 20000;
    int n_steps = 2000;
    QuadratureScheme scheme;
    bool refine = true;

    void validate() const {
        driver.validate();
        const bool threshold_exp =
            experiment == Experiment::Prop2 || experiment == Experiment::Prop3 ||
            experiment == Experiment::Prop5 || experiment == Experiment::Prop6;
        if (threshold_exp && sweep.empty())
            throw ConfigError("sweep: must be non-empty for threshold experiments");
        if ((experiment == Experiment::Prop1MC || experiment == Experiment::Stroock) &&
            n_paths < 2)
            throw ConfigError("n_paths: Monte Carlo experiments need n_paths >= 2");
        scheme.validate();
    }
};

/// Defaults that encode the pinned acceptance tolerances and grids.
inline ExperimentConfig default_config(Experiment e) {
    ExperimentConfig c;
    c.experiment = e;
    switch (e) {
        case Experiment::Prop1Series:
            c.tolerances = {{"abs_error", 1e-8}, {"runtime_s", 1.0}};
            break;
        case Experiment::Prop1MC:
            c.n_paths = 20000;
            c.n_steps = 2000;
            c.tolerances = {{"sigma_band", 3.0}, {"rel_error", 0.02}, {"runtime_s", 60.0}};
            break;
        case Experiment::Prop2:
            c.driver = CovarianceSpec::brownian(2, 2, 1.0);
            c.x = 2.0;
            for (double r = 0.6; r < 1.45; r += 0.1) c.sweep.push_back(r);
            c.tolerances = {{"abs_error", 1e-6}, {"scan_window", 0.05}};
            break;
        case Experiment::Prop3:
            c.driver = CovarianceSpec::fbm(0.75);
            for (double r = 0.02; r < 0.55; r += 0.04) c.sweep.push_back(r);
            c.tolerances = {{"scan_window", 0.05}};
            break;
        case Experiment::Prop4:
            c.driver = CovarianceSpec::fbm(0.75, 1, 2, 1.0);
            c.tolerances = {};
            break;
        case Experiment::Prop5:
            for (double al = -0.9; al < -0.05; al += 0.08) c.sweep.push_back(al);
            c.tolerances = {{"scan_window", 0.05}};
            c.n_max = 1000;
            break;
        case Experiment::Prop6:
            c.driver = CovarianceSpec::fbm(0.75);
            for (double al = -1.3; al < -0.35; al += 0.08) c.sweep.push_back(al);
            c.tolerances = {{"scan_window", 0.05}};
            c.n_max = 256;
            break;
        case Experiment::Stroock:
            c.n_paths = 100000;
            c.tolerances = {{"gap", 1e-2}, {"sigma_band", 2.0}};
            break;
        case Experiment::EddScaling:
            c.driver = CovarianceSpec::fbm(0.75);
            c.tolerances = {{"exponent_window", 0.1}};
            break;
        case Experiment::StirlingCn:
            c.tolerances = {{"drift", 0.01}, {"exponent_window", 0.02}};
            break;
    }
    return c;
}

struct CheckResult {
    std::string name;
    double value = 0.0;
    double expected = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string detail;
};

struct RunReport {
    ExperimentConfig config;
    std::vector<CheckResult> checks;
    json results = json::object();
    std::vector<std::pair<std::string, std::string>> csv_tables;  // name -> body
    std::vector<std::string> rng_stream_ids;
    double wall_time_s = 0.0;
    bool pass = true;
};

struct ScanResult {
    double estimate = 0.0;
    double formula_value = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::vector<std::pair<double, Verdict>> grid_verdicts;
};

namespace detail {

// Boundary estimate between a conclusive low-side class and a conclusive
// high-side class over an exponent grid, with per-side bisection.
// Verdicts are ternary; Inconclusive points near the threshold only
// shrink the bracket from both conclusive sides.
inline ScanResult scan_boundary(const std::function<Verdict(double)>& eval,
                                const std::vector<double>& grid, Verdict low_class,
                                Verdict high_class, bool refine, double target_width = 0.02) {
    if (grid.size() < 2) throw ScanError("sweep: need at least two grid points");
    ScanResult out;
    std::vector<Verdict> v(grid.size());
    parallel_for(grid.size(), [&](size_t i) { v[i] = eval(grid[i]); });
    bool any_low = false, any_high = false;
    double lo = grid.front(), hi = grid.back();
    for (size_t i = 0; i < grid.size(); ++i) {
        out.grid_verdicts.push_back({grid[i], v[i]});
        if (v[i] == low_class) {
            any_low = true;
            lo = std::max(lo, grid[i]);
        }
        if (v[i] == high_class && !any_high) {
            any_high = true;
            hi = grid[i];
        }
    }
    if (!any_low || !any_high)
        throw ScanError("scan: grid is entirely on one side of the threshold; widen it");
    if (lo >= hi) throw ScanError("scan: verdicts are not monotone over the grid");

    if (refine) {
        // push the conclusive low-side boundary up
        double a = lo, b = hi;
        for (int it = 0; it < 24 && b - a > target_width / 2; ++it) {
            const double m = 0.5 * (a + b);
            if (eval(m) == low_class)
                a = m;
            else
                b = m;
        }
        lo = a;
        // and the conclusive high-side boundary down
        a = lo;
        b = hi;
        for (int it = 0; it < 24 && b - a > target_width / 2; ++it) {
            const double m = 0.5 * (a + b);
            if (eval(m) == high_class)
                b = m;
            else
                a = m;
        }
        hi = b;
    }
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    out.estimate = 0.5 * (lo + hi);
    return out;
}

inline Verdict combine_verdicts(Verdict a, Verdict b) {
    if (a == Verdict::Divergent || b == Verdict::Divergent) return Verdict::Divergent;
    if (a == Verdict::Finite && b == Verdict::Finite) return Verdict::Finite;
    return Verdict::Inconclusive;
}

inline Verdict series_as_verdict(SeriesClass c) {
    switch (c) {
        case SeriesClass::Convergent: return Verdict::Finite;
        case SeriesClass::Divergent: return Verdict::Divergent;
        default: return Verdict::Inconclusive;
    }
}

inline void add_check(RunReport& rep, std::string name, double value, double expected,
                      double tol, bool pass, std::string detail = "") {
    rep.checks.push_back({std::move(name), value, expected, tol, pass, std::move(detail)});
    rep.pass = rep.pass && rep.checks.back().pass;
}

inline void add_abs_check(RunReport& rep, std::string name, double value, double expected,
                          double tol) {
    add_check(rep, std::move(name), value, expected, tol,
              std::abs(value - expected) <= tol);
}

inline void add_verdict_check(RunReport& rep, std::string name, Verdict got, Verdict want) {
    add_check(rep, std::move(name), static_cast<double>(got), static_cast<double>(want), 0,
              got == want, std::string(to_string(got)) + " (want " + to_string(want) + ")");
}

}  // namespace detail

/// Estimated critical exponent for a threshold experiment: the midpoint
/// of the tightest conclusive bracketing pair, bisected per side.
inline ScanResult threshold_scan(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.validate();
    switch (c.experiment) {
        case Experiment::Prop2: {
            const int d = c.driver.space_dim;
            ScanResult r = detail::scan_boundary(
                [&](double rr) {
                    return sobolev_norm_bm(rr, d, c.driver.time_dim, c.driver.horizon).verdict;
                },
                c.sweep, Verdict::Divergent, Verdict::Finite, c.refine);
            r.formula_value = 0.5 * d;
            return r;
        }
        case Experiment::Prop3: {
            const double H = c.driver.hurst.at(0);
            ScanResult r = detail::scan_boundary(
                [&](double rr) {
                    const auto a = fbm_A_term(H, rr, c.driver.horizon, c.scheme);
                    const auto b = fbm_B_term(H, rr, c.driver.horizon, c.scheme);
                    return detail::combine_verdicts(a.verdict, b.verdict);
                },
                c.sweep, Verdict::Divergent, Verdict::Finite, c.refine);
            r.formula_value = 0.5 / H - 0.5;
            return r;
        }
        case Experiment::Prop5: {
            const int n_max = c.n_max > 0 ? c.n_max : 1000;
            ScanResult r = detail::scan_boundary(
                [&](double al) {
                    return detail::series_as_verdict(
                        watanabe_current_bm(c.x, c.a, c.driver.horizon, al, n_max)
                            .classification);
                },
                c.sweep, Verdict::Finite, Verdict::Divergent, c.refine);
            r.formula_value = -0.5;
            return r;
        }
        case Experiment::Prop6: {
            const double H = c.driver.hurst.at(0);
            const int n_max = c.n_max > 0 ? c.n_max : 256;
            const FbmSeriesTerms terms =
                watanabe_fbm_weighted_terms(c.x, H, c.driver.horizon, n_max, c.scheme);
            ScanResult r = detail::scan_boundary(
                [&](double al) {
                    return detail::series_as_verdict(
                        watanabe_current_fbm_from_terms(terms, al).classification);
                },
                c.sweep, Verdict::Finite, Verdict::Divergent, c.refine);
            r.formula_value = 0.5 / H - 1.5;
            return r;
        }
        default:
            throw ConfigError("scan: experiment has no threshold to scan");
    }
}

namespace detail {

inline void run_prop1_series(RunReport& rep) {
    CsvTable table("x,T,value,abs_error,tail_bound,n_max");
    const double tol = rep.config.tolerances.at("abs_error");
    for (double T : {1.0, 2.0})
        for (double x : {0.5, 1.0, 2.0}) {
            const auto r = xi_hat_second_moment_series(x, T, 1, rep.config.n_max);
            add_abs_check(rep, "series(x=" + fmt_double(x) + ",T=" + fmt_double(T) + ")",
                          r.estimate, T, tol);
            table.row({fmt_double(x), fmt_double(T), fmt_double(r.estimate),
                       fmt_double(std::abs(r.estimate - T)), fmt_double(r.tail_bound),
                       std::to_string(r.truncation)});
        }
    rep.csv_tables.push_back({"prop1_series.csv", table.body()});
    rep.results["identity"] = "second moment of the Fourier-mode current equals T";
}

inline void run_prop1_mc(RunReport& rep) {
    const ExperimentConfig& c = rep.config;
    const auto r = xi_hat_mc_bm(c.x, c.driver.horizon, c.n_steps, c.n_paths, c.seed);
    const double T = c.driver.horizon;
    add_check(rep, "mc_within_3se", r.estimate, T,
              c.tolerances.at("sigma_band") * r.stderr_val,
              std::abs(r.estimate - T) <= c.tolerances.at("sigma_band") * r.stderr_val,
              "se=" + fmt_double(r.stderr_val));
    add_check(rep, "mc_rel_error", std::abs(r.estimate - T) / T, 0.0,
              c.tolerances.at("rel_error"),
              std::abs(r.estimate - T) / T <= c.tolerances.at("rel_error"));
    rep.results["moment"] = to_json(r);
    rep.rng_stream_ids.push_back("philox4x32-10/seed=" + std::to_string(c.seed) +
                                 "/component=0/paths=[0," + std::to_string(c.n_paths) + ")");
    CsvTable table("x,T,estimate,stderr,n_paths,n_steps");
    table.row({fmt_double(c.x), fmt_double(T), fmt_double(r.estimate),
               fmt_double(r.stderr_val), std::to_string(c.n_paths),
               std::to_string(c.n_steps)});
    rep.csv_tables.push_back({"prop1_mc.csv", table.body()});
}

inline void run_prop2(RunReport& rep) {
    const ExperimentConfig& c = rep.config;
    const int N = c.driver.time_dim, d = c.driver.space_dim;
    const double T = c.driver.horizon;
    const auto series = xi_hat_second_moment_series(c.x, T, N, c.n_max);
    add_abs_check(rep, "per_component_series", series.estimate, std::pow(T, N),
                  c.tolerances.at("abs_error"));
    const ScanResult scan = threshold_scan(rep.config);
    add_abs_check(rep, "scan_r_c", scan.estimate, scan.formula_value,
                  c.tolerances.at("scan_window"));
    rep.results["series"] = to_json(series);
    rep.results["scan"] = {{"estimate", scan.estimate},
                           {"formula", scan.formula_value},
                           {"bracket", {scan.bracket_lo, scan.bracket_hi}}};
    CsvTable table("r,verdict");
    for (auto& [r, v] : scan.grid_verdicts) table.row({fmt_double(r), to_string(v)});
    rep.csv_tables.push_back({"prop2_scan.csv", table.body()});
}

inline void run_prop3(RunReport& rep) {
    const ExperimentConfig& c = rep.config;
    const double T = c.driver.horizon;
    CsvTable table("H,r,term,verdict,levels,value");
    json cases = json::array();
    struct Case {
        double H, r;
        Verdict want;
    };
    // finite point, divergent point per Hurst index
    const std::vector<std::pair<double, std::vector<Case>>> plans = {
        {0.75, {{0.75, 0.3, Verdict::Finite}, {0.75, 0.05, Verdict::Divergent}}},
        {0.60, {{0.60, 0.5, Verdict::Finite}, {0.60, 0.05, Verdict::Divergent}}},
    };
    for (const auto& [H, case_list] : plans) {
        for (const auto& cs : case_list) {
            const auto a = fbm_A_term(cs.H, cs.r, T, c.scheme);
            const auto b = fbm_B_term(cs.H, cs.r, T, c.scheme);
            add_verdict_check(rep,
                              "A(H=" + fmt_double(cs.H) + ",r=" + fmt_double(cs.r) + ")",
                              a.verdict, cs.want);
            add_verdict_check(rep,
                              "B(H=" + fmt_double(cs.H) + ",r=" + fmt_double(cs.r) + ")",
                              b.verdict, cs.want);
            table.row({fmt_double(cs.H), fmt_double(cs.r), "A", to_string(a.verdict),
                       std::to_string(a.refinement_trace.size()), fmt_double(a.value)});
            table.row({fmt_double(cs.H), fmt_double(cs.r), "B", to_string(b.verdict),
                       std::to_string(b.refinement_trace.size()), fmt_double(b.value)});
            cases.push_back({{"H", cs.H}, {"r", cs.r}, {"A", to_json(a)}, {"B", to_json(b)}});
        }
        ExperimentConfig scan_cfg = rep.config;
        scan_cfg.driver = CovarianceSpec::fbm(H, 1, 1, T);
        if (H < 0.7) {  // wider grid around the larger threshold
            scan_cfg.sweep.clear();
            for (double r = 0.05; r < 0.7; r += 0.05) scan_cfg.sweep.push_back(r);
        }
        const ScanResult scan = threshold_scan(scan_cfg);
        add_abs_check(rep, "scan_r_c(H=" + fmt_double(H) + ")", scan.estimate,
                      scan.formula_value, c.tolerances.at("scan_window"));
        cases.push_back({{"H", H},
                         {"scan_estimate", scan.estimate},
                         {"scan_formula", scan.formula_value},
                         {"bracket", {scan.bracket_lo, scan.bracket_hi}}});
    }
    rep.results["cases"] = cases;
    rep.csv_tables.push_back({"prop3_verdicts.csv", table.body()});
}

inline void run_prop4(RunReport& rep) {
    const ExperimentConfig& c = rep.config;
    const double T = c.driver.horizon;
    const double H = c.driver.hurst.at(0);
    const int d = c.driver.space_dim;
    json cases = json::array();
    CsvTable table("d,H,r,term,verdict");
    struct Case {
        double r;
        Verdict want;
    };
    for (const Case& cs : {Case{0.8, Verdict::Finite}, Case{0.5, Verdict::Divergent}}) {
        const auto ck = fbm_multidim_Ck(H, cs.r, d, 1, T, c.scheme);
        const auto dk = fbm_multidim_Dk(H, cs.r, d, T, c.scheme);
        add_verdict_check(rep, "Ck(d=" + std::to_string(d) + ",r=" + fmt_double(cs.r) + ")",
                          ck.verdict, cs.want);
        add_verdict_check(rep, "Dk(d=" + std::to_string(d) + ",r=" + fmt_double(cs.r) + ")",
                          dk.verdict, cs.want);
        table.row({std::to_string(d), fmt_double(H), fmt_double(cs.r), "Ck",
                   to_string(ck.verdict)});
        table.row({std::to_string(d), fmt_double(H), fmt_double(cs.r), "Dk",
                   to_string(dk.verdict)});
        cases.push_back({{"r", cs.r}, {"Ck", to_json(ck)}, {"Dk", to_json(dk)}});
    }
    // d=1 specialization must reproduce the one-dimensional verdicts exactly
    for (double r : {0.3, 0.05}) {
        const auto ck1 = fbm_multidim_Ck(H, r, 1, 1, T, c.scheme);
        const auto a = fbm_A_term(H, r, T, c.scheme);
        add_check(rep, "Ck_d1_matches_A(r=" + fmt_double(r) + ")",
                  static_cast<double>(ck1.verdict), static_cast<double>(a.verdict), 0,
                  ck1.verdict == a.verdict,
                  std::string(to_string(ck1.verdict)) + " vs " + to_string(a.verdict));
        const auto dk1 = fbm_multidim_Dk(H, r, 1, T, c.scheme);
        const auto b = fbm_B_term(H, r, T, c.scheme);
        add_check(rep, "Dk_d1_matches_B(r=" + fmt_double(r) + ")",
                  static_cast<double>(dk1.verdict), static_cast<double>(b.verdict), 0,
                  dk1.verdict == b.verdict,
                  std::string(to_string(dk1.verdict)) + " vs " + to_string(b.verdict));
    }
    rep.results["cases"] = cases;
    rep.csv_tables.push_back({"prop4_verdicts.csv", table.body()});
}

inline void run_prop5(RunReport& rep) {
    const ExperimentConfig& c = rep.config;
    const double T = c.driver.horizon;
    const int n_max = c.n_max > 0 ? c.n_max : 1000;
    const auto conv = watanabe_current_bm(c.x, c.a, T, -0.6, n_max);
    const auto div = watanabe_current_bm(c.x, c.a, T, -0.3, n_max);
    add_check(rep, "series(alpha=-0.6)", static_cast<double>(conv.classification),
              static_cast<double>(SeriesClass::Convergent), 0,
              conv.classification == SeriesClass::Convergent, to_string(conv.classification));
    add_check(rep, "series(alpha=-0.3)", static_cast<double>(div.classification),
              static_cast<double>(SeriesClass::Divergent), 0,
              div.classification == SeriesClass::Divergent, to_string(div.classification));
    const ScanResult scan = threshold_scan(rep.config);
    add_abs_check(rep, "scan_alpha_c", scan.estimate, scan.formula_value,
                  c.tolerances.at("scan_window"));
    rep.results["convergent_case"] = to_json(conv, false);
    rep.results["divergent_case"] = to_json(div, false);
    rep.results["scan"] = {{"estimate", scan.estimate},
                           {"formula", scan.formula_value},
                           {"bracket", {scan.bracket_lo, scan.bracket_hi}}};
    rep.csv_tables.push_back({"prop5_series_convergent.csv", watanabe_series_csv(conv)});
    rep.csv_tables.push_back({"prop5_series_divergent.csv", watanabe_series_csv(div)});
}

inline void run_prop6(RunReport& rep) {
    const ExperimentConfig& c = rep.config;
    const double T = c.driver.horizon;
    const double H = c.driver.hurst.at(0);
    const int n_max = c.n_max > 0 ? c.n_max : 256;
    const FbmSeriesTerms terms = watanabe_fbm_weighted_terms(c.x, H, T, n_max, c.scheme);
    const auto conv = watanabe_current_fbm_from_terms(terms, -0.95);
    const auto div = watanabe_current_fbm_from_terms(terms, -0.7);
    add_check(rep, "series(alpha=-0.95)", static_cast<double>(conv.classification),
              static_cast<double>(SeriesClass::Convergent), 0,
              conv.classification == SeriesClass::Convergent, to_string(conv.classification));
    add_check(rep, "series(alpha=-0.7)", static_cast<double>(div.classification),
              static_cast<double>(SeriesClass::Divergent), 0,
              div.classification == SeriesClass::Divergent, to_string(div.classification));
    const ScanResult scan = threshold_scan(rep.config);
    add_abs_check(rep, "scan_alpha_c", scan.estimate, scan.formula_value,
                  c.tolerances.at("scan_window"));
    rep.results["convergent_case"] = to_json(conv, false);
    rep.results["divergent_case"] = to_json(div, false);
    rep.results["scan"] = {{"estimate", scan.estimate},
                           {"formula", scan.formula_value},
                           {"bracket", {scan.bracket_lo, scan.bracket_hi}}};
    rep.csv_tables.push_back({"prop6_series_convergent.csv", watanabe_series_csv(conv)});
    rep.csv_tables.push_back({"prop6_series_divergent.csv", watanabe_series_csv(div)});
}

inline void run_stroock(RunReport& rep) {
    const ExperimentConfig& c = rep.config;
    const GaussianBump phi = GaussianBump::standard_density();
    const std::vector<int> orders = {5, 10, 20};
    std::vector<PairingReport> reports;
    CsvTable table("n_max,gap,gap_stderr,insufficient_sample");
    for (int m : orders) {
        reports.push_back(stroock_pairing_test(phi, 1.0, m, c.n_paths, c.seed));
        const auto& r = reports.back();
        table.row({std::to_string(m), fmt_double(r.gap_estimate), fmt_double(r.gap_stderr),
                   r.insufficient_sample ? "1" : "0"});
    }
    const double band = c.tolerances.at("sigma_band");
    add_check(rep, "gap(n_max=20)", reports[2].gap_estimate, 0.0, c.tolerances.at("gap"),
              reports[2].gap_estimate < c.tolerances.at("gap"));
    for (int i = 0; i + 1 < static_cast<int>(orders.size()); ++i) {
        const double se = band * std::hypot(reports[i].gap_stderr, reports[i + 1].gap_stderr);
        add_check(rep,
                  "gap_decreasing(" + std::to_string(orders[i]) + "->" +
                      std::to_string(orders[i + 1]) + ")",
                  reports[i + 1].gap_estimate, reports[i].gap_estimate, se,
                  reports[i + 1].gap_estimate <= reports[i].gap_estimate + se);
    }
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    rep.results["pairings"] = arr;
    rep.rng_stream_ids.push_back("philox4x32-10/seed=" + std::to_string(c.seed) +
                                 "/component=0/paths=[0," + std::to_string(c.n_paths) + ")");
    rep.csv_tables.push_back({"stroock_gaps.csv", table.body()});
}

inline void run_edd_scaling(RunReport& rep) {
    const ExperimentConfig& c = rep.config;
    CsvTable table("H,n,value,scaled");
    for (double H : {0.6, 0.75, 0.9}) {
        std::vector<double> xs, ys;
        for (int n = 20; n <= 200; n += 6) {
            const double v = edd_integral(H, n, c.scheme);
            xs.push_back(std::log(n));
            ys.push_back(std::log(v));
            table.row({fmt_double(H), std::to_string(n), fmt_double(v),
                       fmt_double(v * std::pow(n, 0.5 / H))});
        }
        const LinearFit fit = fit_line(xs, ys);
        add_abs_check(rep, "edd_decay_exponent(H=" + fmt_double(H) + ")", fit.slope,
                      -0.5 / H, c.tolerances.at("exponent_window"));
        // boundedness of value * n^{1/(2H)} over a wide order range
        double lo = 1e300, hi = 0.0;
        for (int n : {10, 20, 50, 100, 200, 350, 500}) {
            const double v = edd_integral(H, n, c.scheme) * std::pow(n, 0.5 / H);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        add_check(rep, "edd_scaled_bounded(H=" + fmt_double(H) + ")", hi / lo, 1.0, 1.5,
                  hi / lo < 2.5);
    }
    rep.csv_tables.push_back({"edd_scaling.csv", table.body()});
}

inline void run_stirling(RunReport& rep) {
    const ExperimentConfig& c = rep.config;
    double lo = 1e300, hi = 0.0;
    CsvTable table("n,n_factorial_cn_sq_sqrt_n");
    for (int n = 200; n <= 400; ++n) {
        const double v = std::exp(log_n_factorial_cn_sq(n) + 0.5 * std::log(n));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (n % 10 == 0) table.row({std::to_string(n), fmt_double(v)});
    }
    add_check(rep, "stirling_drift_200_400", hi / lo - 1.0, 0.0, c.tolerances.at("drift"),
              hi / lo - 1.0 < c.tolerances.at("drift"));
    std::vector<double> xs, ys;
    for (int n = 100; n <= 1000; n += 10) {
        xs.push_back(std::log(n));
        ys.push_back(log_n_factorial_cn_sq(n));
    }
    const LinearFit fit = fit_line(xs, ys);
    add_abs_check(rep, "n_factorial_cn_sq_decay", fit.slope, -0.5,
                  c.tolerances.at("exponent_window"));
    rep.results["fit"] = {{"slope", fit.slope}, {"r2", fit.r2}};
    rep.csv_tables.push_back({"stirling_cn.csv", table.body()});
}

}  // namespace detail

/// Executes one experiment, evaluates its pinned tolerances, and fills
/// the report (JSON payload plus deterministic CSV tables).
inline RunReport run(const ExperimentConfig& config) {
    config.validate();
    RunReport rep;
    rep.config = config;
    const auto start = std::chrono::steady_clock::now();
    switch (config.experiment) {
        case Experiment::Prop1Series: detail::run_prop1_series(rep); break;
        case Experiment::Prop1MC: detail::run_prop1_mc(rep); break;
        case Experiment::Prop2: detail::run_prop2(rep); break;
        case Experiment::Prop3: detail::run_prop3(rep); break;
        case Experiment::Prop4: detail::run_prop4(rep); break;
        case Experiment::Prop5: detail::run_prop5(rep); break;
        case Experiment::Prop6: detail::run_prop6(rep); break;
        case Experiment::Stroock: detail::run_stroock(rep); break;
        case Experiment::EddScaling: detail::run_edd_scaling(rep); break;
        case Experiment::StirlingCn: detail::run_stirling(rep); break;
    }
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto it = config.tolerances.find("runtime_s");
    if (it != config.tolerances.end())
        detail::add_check(rep, "runtime_s", rep.wall_time_s, 0.0, it->second,
                          rep.wall_time_s <= it->second);
    return rep;
}

inline json report_to_json(const RunReport& rep) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["artifact_version"] = kArtifactVersion;
    json cfg;
    cfg["experiment"] = to_string(rep.config.experiment);
    cfg["driver"] = to_json(rep.config.driver);
    cfg["sweep"] = rep.config.sweep;
    cfg["tolerances"] = rep.config.tolerances;
    cfg["seed"] = rep.config.seed;
    cfg["x"] = rep.config.x;
    cfg["a"] = rep.config.a;
    cfg["alpha"] = rep.config.alpha;
    cfg["n_max"] = rep.config.n_max;
    cfg["n_paths"] = rep.config.n_paths;
    cfg["n_steps"] = rep.config.n_steps;
    cfg["scheme"] = {{"panel_count", rep.config.scheme.panel_count},
                     {"nodes_per_panel", rep.config.scheme.nodes_per_panel},
                     {"singularity_policy",
                      rep.config.scheme.singularity_policy ==
                              SingularityPolicy::SubtractAndTransform
                          ? "SubtractAndTransform"
                          : "GradedMesh"},
                     {"refinement_level", rep.config.scheme.refinement_level}};
    j["config"] = cfg;
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"expected", c.expected},
                          {"tol", c.tol},
                          {"pass", c.pass},
                          {"detail", c.detail}});
    j["checks"] = checks;
    j["results"] = rep.results;
    j["rng_stream_ids"] = rep.rng_stream_ids;
    j["wall_time_s"] = rep.wall_time_s;
    j["pass"] = rep.pass;
    return j;
}

/// Writes report.json and the CSV tables under dir.
inline void write_report(const RunReport& rep, const std::string& dir) {
    write_file(std::filesystem::path(dir) / "report.json", report_to_json(rep).dump(2) + "\n");
    for (const auto& [name, body] : rep.csv_tables)
        write_file(std::filesystem::path(dir) / name, body);
}

}  // namespace currents
