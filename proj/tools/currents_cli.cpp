// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: every verification experiment is a single
// runnable command with a JSON report and CSV tables as outputs.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "currents/harness.hpp"

namespace {

using namespace currents;

std::vector<double> parse_sweep(const std::string& text) {
    // either "lo:hi:count" or a comma list
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo, hi;
        int count;
        if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2)
            throw ConfigError("sweep: expected lo:hi:count");
        for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
        return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

struct CliOptions {
    std::string experiment;
    uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    int n_max = -1;
    int refine_levels = -1;
    double x = std::nan("");
    double T = std::nan("");
    double hurst = std::nan("");
    double a = std::nan("");
    int d = -1, N = -1;
    int n_paths = -1, n_steps = -1;
    std::string sweep;
    bool no_refine = false;
};

void apply(const CliOptions& o, ExperimentConfig& cfg) {
    if (o.seed_set) cfg.seed = o.seed;
    if (!o.out_dir.empty()) cfg.output_path = o.out_dir;
    if (o.n_max > 0) cfg.n_max = o.n_max;
    if (o.refine_levels > 0) cfg.scheme.refinement_level = o.refine_levels;
    if (!std::isnan(o.x)) cfg.x = o.x;
    if (!std::isnan(o.T)) cfg.driver.horizon = o.T;
    if (!std::isnan(o.a)) cfg.a = o.a;
    if (o.d > 0) {
        cfg.driver.space_dim = o.d;
        if (cfg.driver.kind == ProcessKind::FbmSheet)
            cfg.driver.hurst.assign(o.d, cfg.driver.hurst.empty() ? 0.75
                                                                  : cfg.driver.hurst[0]);
    }
    if (o.N > 0) cfg.driver.time_dim = o.N;
    if (!std::isnan(o.hurst)) {
        cfg.driver.kind = ProcessKind::FbmSheet;
        cfg.driver.hurst.assign(std::max(cfg.driver.space_dim, 1), o.hurst);
    }
    if (o.n_paths > 0) cfg.n_paths = o.n_paths;
    if (o.n_steps > 0) cfg.n_steps = o.n_steps;
    if (!o.sweep.empty()) cfg.sweep = parse_sweep(o.sweep);
    if (o.no_refine) cfg.refine = false;
}

void add_common(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("experiment", o.experiment, "experiment name")->required();
    cmd->add_option("--seed", o.seed, "RNG seed")->each([&](const std::string&) {
        o.seed_set = true;
    });
    cmd->add_option("--out", o.out_dir, "output directory for report.json and CSV tables");
    cmd->add_option("--n-max", o.n_max, "truncation order (default: per experiment)");
    cmd->add_option("--refine-levels", o.refine_levels, "max epsilon-halving levels");
    cmd->add_option("--x", o.x, "space point");
    cmd->add_option("--T", o.T, "time horizon");
    cmd->add_option("--hurst", o.hurst, "Hurst index (switches the driver to fBm)");
    cmd->add_option("--a", o.a, "lower time limit for the Brownian Watanabe series");
    cmd->add_option("--d", o.d, "space dimension");
    cmd->add_option("--N", o.N, "time dimension");
    cmd->add_option("--n-paths", o.n_paths, "Monte Carlo path count");
    cmd->add_option("--n-steps", o.n_steps, "Riemann-sum step count");
    cmd->add_option("--sweep", o.sweep, "exponent grid: lo:hi:count or comma list");
    cmd->add_flag("--no-refine", o.no_refine, "skip bisection in threshold scans");
}

int do_verify(const CliOptions& o) {
    ExperimentConfig cfg = default_config(parse_experiment(o.experiment));
    apply(o, cfg);
    const RunReport rep = run(cfg);
    for (const auto& c : rep.checks)
        std::printf("%-4s %s: value=%.10g expected=%.10g tol=%.3g %s\n",
                    c.pass ? "ok" : "FAIL", c.name.c_str(), c.value, c.expected, c.tol,
                    c.detail.c_str());
    std::printf("%s: %s (%.2f s)\n", to_string(cfg.experiment), rep.pass ? "PASS" : "FAIL",
                rep.wall_time_s);
    if (!cfg.output_path.empty()) write_report(rep, cfg.output_path);
    return rep.pass ? 0 : 1;
}

int do_scan(const CliOptions& o) {
    ExperimentConfig cfg = default_config(parse_experiment(o.experiment));
    apply(o, cfg);
    const ScanResult scan = threshold_scan(cfg);
    std::printf("grid verdicts:\n");
    for (const auto& [e, v] : scan.grid_verdicts)
        std::printf("  %.6g  %s\n", e, to_string(v));
    std::printf("bracket [%.6g, %.6g], estimate %.6g, formula value %.6g\n",
                scan.bracket_lo, scan.bracket_hi, scan.estimate, scan.formula_value);
    if (!cfg.output_path.empty()) {
        json j;
        j["experiment"] = to_string(cfg.experiment);
        j["estimate"] = scan.estimate;
        j["formula_value"] = scan.formula_value;
        j["bracket"] = {scan.bracket_lo, scan.bracket_hi};
        json grid = json::array();
        for (const auto& [e, v] : scan.grid_verdicts)
            grid.push_back({{"exponent", e}, {"verdict", to_string(v)}});
        j["grid"] = grid;
        write_file(std::filesystem::path(cfg.output_path) / "scan.json", j.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wiener chaos machinery for stochastic currents"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config file (section headers per subcommand)");

    CliOptions vo, so;
    CLI::App* verify = app.add_subcommand("verify", "run an experiment's pinned checks");
    add_common(verify, vo);
    CLI::App* scan = app.add_subcommand("scan", "threshold scan over an exponent grid");
    add_common(scan, so);

    // paths: sample a Gaussian ensemble to CSV + JSON metadata sidecar
    CLI::App* paths = app.add_subcommand("paths", "sample paths to CSV");
    std::string p_kind = "bm", p_grid = "0.5,1.0", p_out = "paths_out";
    double p_hurst = 0.75, p_T = 1.0;
    int p_N = 1, p_d = 1, p_npaths = 100;
    uint64_t p_seed = 20260810;
    paths->add_option("--kind", p_kind, "bm or fbm");
    paths->add_option("--hurst", p_hurst, "Hurst index for fbm");
    paths->add_option("--T", p_T, "horizon");
    paths->add_option("--N", p_N, "time dimension");
    paths->add_option("--d", p_d, "space dimension");
    paths->add_option("--grid", p_grid,
                      "comma list of per-axis grid coordinates in (0, T]");
    paths->add_option("--n-paths", p_npaths, "number of paths");
    paths->add_option("--seed", p_seed, "RNG seed");
    paths->add_option("--out", p_out, "output directory");

    // report: re-derive pass/fail from a stored report
    CLI::App* report = app.add_subcommand("report", "summarize a saved report.json");
    std::string r_in;
    report->add_option("--in", r_in, "path to report.json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return do_verify(vo);
        if (scan->parsed()) return do_scan(so);
        if (paths->parsed()) {
            currents::CovarianceSpec spec =
                p_kind == "fbm" ? currents::CovarianceSpec::fbm(p_hurst, p_N, p_d, p_T)
                                : currents::CovarianceSpec::brownian(p_N, p_d, p_T);
            std::vector<double> axis = parse_sweep(p_grid);
            // tensor grid over N axes
            std::vector<currents::TimePoint> grid;
            std::vector<size_t> idx(p_N, 0);
            for (;;) {
                currents::TimePoint tp(p_N);
                for (int i = 0; i < p_N; ++i) tp[i] = axis[idx[i]];
                grid.push_back(tp);
                int i = 0;
                for (; i < p_N; ++i) {
                    if (++idx[i] < axis.size()) break;
                    idx[i] = 0;
                }
                if (i == p_N) break;
            }
            const auto ensemble = currents::sample_paths(spec, grid, p_npaths, p_seed);
            std::ostringstream csv;
            ensemble.write_csv(csv);
            currents::write_file(std::filesystem::path(p_out) / "paths.csv", csv.str());
            currents::write_file(
                std::filesystem::path(p_out) / "paths_meta.json",
                currents::path_ensemble_metadata(ensemble).dump(2) + "\n");
            std::printf("wrote %d paths x %d components x %zu grid points to %s\n",
                        ensemble.n_paths, spec.space_dim, grid.size(), p_out.c_str());
            return 0;
        }
        if (report->parsed()) {
            std::ifstream is(r_in);
            if (!is) {
                std::fprintf(stderr, "report: cannot open %s\n", r_in.c_str());
                return 2;
            }
            const auto j = currents::json::parse(is);
            bool pass = true;
            for (const auto& c : j.at("checks")) {
                const bool p = c.at("pass").get<bool>();
                pass = pass && p;
                std::printf("%-4s %s: value=%.10g expected=%.10g tol=%.3g\n",
                            p ? "ok" : "FAIL", c.at("name").get<std::string>().c_str(),
                            c.at("value").get<double>(), c.at("expected").get<double>(),
                            c.at("tol").get<double>());
            }
            std::printf("%s: %s\n", j.at("config").at("experiment").get<std::string>().c_str(),
                        pass ? "PASS" : "FAIL");
            return pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
