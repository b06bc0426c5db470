#pragma once

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "layout_io.hpp"
#include "matrix_io.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "solver.hpp"

namespace hsld {

// Scores a prediction set against ground truth.  The manifest's relative
// sample paths resolve against both roots: labels under truth_dir are the
// references, the same relative paths under pred_dir the predictions, and
// layouts are read from the truth side.  Per-sample metrics are computed in
// manifest order; aggregates are mean and sample standard deviation, plus the
// batched rank correlation of field maxima.

namespace detail {

struct Aggregate {
    double mean = 0, stddev = 0;
    int count = 0;
};

inline Aggregate aggregate(const std::vector<double>& values) {
    Aggregate a;
    a.count = (int)values.size();
    if (a.count == 0) return a;
    for (const double v : values) a.mean += v;
    a.mean /= a.count;
    if (a.count > 1) {
        double ss = 0;
        for (const double v : values) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / (a.count - 1));
    }
    return a;
}

inline nlohmann::ordered_json aggregate_json(const Aggregate& a) {
    return {{"mean", a.mean}, {"std", a.stddev}};
}

}  // namespace detail

inline nlohmann::ordered_json evaluate_dataset(const std::filesystem::path& truth_dir,
                                               const std::filesystem::path& pred_dir,
                                               const std::filesystem::path& manifest_path,
                                               int case_id, int spearman_batch = 100) {
    namespace fs = std::filesystem;
    const auto config = CaseConfig::for_case(case_id);
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(read_text_file(manifest_path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("manifest: " + std::string(e.what()));
    }
    struct Job {
        std::uint64_t id;
        std::string layout, label;
    };
    std::vector<Job> jobs;
    try {
        for (const auto& rec : manifest.at("samples"))
            jobs.push_back({rec.at("id").get<std::uint64_t>(),
                            rec.at("layout").get<std::string>(),
                            rec.at("label").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
        throw IoError("manifest: " + std::string(e.what()));
    }
    if (jobs.empty()) throw DomainError("evaluate: manifest lists no samples");

    struct Row {
        std::uint64_t id;
        MetricsReport m;
        double pred_max, true_max;
    };
    std::vector<Row> rows(jobs.size());
    std::optional<Catalog> catalog;  // built from the first layout's grid
    {
        const auto grid = load_layout(truth_dir / jobs.front().layout).grid;
        catalog.emplace(Catalog::builtin(grid));
    }
    parallel_for(0, (std::int64_t)jobs.size(), [&](std::int64_t i) {
        const auto& job = jobs[i];
        const auto layout = load_layout(truth_dir / job.layout);
        const auto truth = read_matrix_file(truth_dir / job.label);
        const auto pred = read_matrix_file(pred_dir / job.label);
        Row& row = rows[i];
        row.id = job.id;
        row.m = evaluate_pair(pred, truth, layout, config, *catalog);
        row.pred_max = *std::max_element(pred.data(), pred.data() + pred.size());
        row.true_max = *std::max_element(truth.data(), truth.data() + truth.size());
    });

    nlohmann::ordered_json report;
    report["case"] = case_id;
    report["count"] = (int)rows.size();
    report["samples"] = nlohmann::ordered_json::array();
    std::vector<double> mt_ae, mt_pae, mae, max_ae, bmae_d, bmae_n, cmae, g_mae, lap_mae;
    std::vector<double> pred_max, true_max;
    for (const auto& row : rows) {
        nlohmann::ordered_json s;
        s["id"] = row.id;
        s["mt_ae"] = row.m.pointwise.mt_ae;
        s["mt_pae"] = row.m.pointwise.mt_pae;
        s["mae"] = row.m.pointwise.mae;
        s["max_ae"] = row.m.pointwise.max_ae;
        if (row.m.masked.bmae_d) s["bmae_d"] = *row.m.masked.bmae_d;
        if (row.m.masked.bmae_n) s["bmae_n"] = *row.m.masked.bmae_n;
        if (row.m.masked.cmae) s["cmae"] = *row.m.masked.cmae;
        nlohmann::ordered_json per_component;
        for (const auto& [id, v] : row.m.masked.cmae_i) per_component[std::to_string(id)] = v;
        s["cmae_i"] = std::move(per_component);
        s["g_mae"] = row.m.derivative.g_mae;
        s["lap_mae"] = row.m.derivative.lap_mae;
        report["samples"].push_back(std::move(s));

        mt_ae.push_back(row.m.pointwise.mt_ae);
        mt_pae.push_back(row.m.pointwise.mt_pae);
        mae.push_back(row.m.pointwise.mae);
        max_ae.push_back(row.m.pointwise.max_ae);
        if (row.m.masked.bmae_d) bmae_d.push_back(*row.m.masked.bmae_d);
        if (row.m.masked.bmae_n) bmae_n.push_back(*row.m.masked.bmae_n);
        if (row.m.masked.cmae) cmae.push_back(*row.m.masked.cmae);
        g_mae.push_back(row.m.derivative.g_mae);
        lap_mae.push_back(row.m.derivative.lap_mae);
        pred_max.push_back(row.pred_max);
        true_max.push_back(row.true_max);
    }

    nlohmann::ordered_json agg;
    agg["mt_ae"] = detail::aggregate_json(detail::aggregate(mt_ae));
    agg["mt_pae"] = detail::aggregate_json(detail::aggregate(mt_pae));
    agg["mae"] = detail::aggregate_json(detail::aggregate(mae));
    agg["max_ae"] = detail::aggregate_json(detail::aggregate(max_ae));
    if (!bmae_d.empty()) agg["bmae_d"] = detail::aggregate_json(detail::aggregate(bmae_d));
    if (!bmae_n.empty()) agg["bmae_n"] = detail::aggregate_json(detail::aggregate(bmae_n));
    if (!cmae.empty()) agg["cmae"] = detail::aggregate_json(detail::aggregate(cmae));
    agg["g_mae"] = detail::aggregate_json(detail::aggregate(g_mae));
    agg["lap_mae"] = detail::aggregate_json(detail::aggregate(lap_mae));
    if ((int)true_max.size() >= spearman_batch) {
        const auto sp = spearman_batches(pred_max, true_max, spearman_batch);
        agg["spearman_mt"] = {{"mean", sp.mean_rho}, {"std", sp.std_rho}, {"batches", sp.batches}};
    }
    report["aggregate"] = std::move(agg);
    return report;
}

}
