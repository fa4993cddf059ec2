// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "currents/chaos.hpp"
#include "currents/classify.hpp"
#include "currents/current_regularity.hpp"
#include "currents/gaussian_model.hpp"
#include "currents/watanabe.hpp"

namespace currents {

using json = nlohmann::ordered_json;

/// Shortest round-trippable decimal form; CSV bodies must be
/// byte-identical across reruns and worker counts.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// RFC-4180-style CSV accumulator: header row, '\n' endings, no quoting
// (all fields are numerics or bare tokens).
class CsvTable {
  public:
    explicit CsvTable(std::string header) { body_ = std::move(header) + "\n"; }
    void row(const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            body_ += fields[i];
            body_ += (i + 1 == fields.size()) ? '\n' : ',';
        }
    }
    const std::string& body() const { return body_; }

  private:
    std::string body_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    os << content;
}

inline json to_json(const CovarianceSpec& spec) {
    json j;
    j["kind"] = spec.kind == ProcessKind::BrownianSheet ? "BrownianSheet" : "FbmSheet";
    j["time_dim"] = spec.time_dim;
    j["space_dim"] = spec.space_dim;
    j["hurst"] = spec.hurst;
    j["horizon"] = spec.horizon;
    return j;
}

inline CovarianceSpec covariance_spec_from_json(const json& j) {
    CovarianceSpec s;
    s.kind = j.at("kind") == "FbmSheet" ? ProcessKind::FbmSheet : ProcessKind::BrownianSheet;
    s.time_dim = j.at("time_dim");
    s.space_dim = j.at("space_dim");
    s.hurst = j.at("hurst").get<std::vector<double>>();
    s.horizon = j.at("horizon");
    return s;
}

inline json to_json(const RegularityClassification& c) {
    json j;
    j["exponent_r"] = c.exponent_r;
    j["verdict"] = to_string(c.verdict);
    j["threshold_formula"] = c.threshold_formula;
    j["value"] = c.value;
    if (!c.note.empty()) j["note"] = c.note;
    json trace = json::array();
    for (const auto& p : c.refinement_trace)
        trace.push_back({{"level", p.level}, {"eps", p.eps}, {"value", p.value}});
    j["refinement_trace"] = trace;
    return j;
}

inline json to_json(const WatanabeSeries& s, bool include_terms = true) {
    json j;
    j["alpha"] = s.alpha;
    j["classification"] = to_string(s.classification);
    j["fitted_decay_exponent"] = s.fitted_decay_exponent;
    j["fit_r2"] = s.fit_r2;
    j["n_terms"] = s.terms.size();
    j["sum"] = s.partial_sums.empty() ? 0.0 : s.partial_sums.back();
    if (include_terms) {
        j["terms"] = s.terms;
        j["partial_sums"] = s.partial_sums;
    }
    return j;
}

inline std::string watanabe_series_csv(const WatanabeSeries& s) {
    CsvTable t("n,t_n,partial_sum");
    for (size_t n = 0; n < s.terms.size(); ++n)
        t.row({std::to_string(n), fmt_double(s.terms[n]), fmt_double(s.partial_sums[n])});
    return t.body();
}

inline json to_json(const CurrentMomentReport& r) {
    json j;
    j["x"] = r.x;
    j["estimate"] = r.estimate;
    j["method"] = r.method == CurrentMomentReport::Method::SeriesExact ? "SeriesExact"
                                                                       : "MonteCarloIto";
    j["truncation"] = r.truncation;
    if (r.method == CurrentMomentReport::Method::MonteCarloIto) {
        j["stderr"] = r.stderr_val;
        j["n_paths"] = r.n_paths;
    } else {
        j["tail_bound"] = r.tail_bound;
    }
    return j;
}

inline json to_json(const PairingReport& r) {
    json j;
    j["n_max"] = r.n_max;
    j["n_paths"] = r.n_paths;
    j["seed"] = r.seed;
    j["gap_estimate"] = r.gap_estimate;
    j["gap_stderr"] = r.gap_stderr;
    j["insufficient_sample"] = r.insufficient_sample;
    j["per_order_contributions"] = r.per_order_contributions;
    return j;
}

inline json path_ensemble_metadata(const PathEnsemble& e) {
    json j;
    j["spec"] = to_json(e.spec);
    j["seed"] = e.seed;
    j["n_paths"] = e.n_paths;
    json grid = json::array();
    for (const auto& p : e.grid) grid.push_back(p);
    j["grid"] = grid;
    return j;
}

}  // namespace currents
