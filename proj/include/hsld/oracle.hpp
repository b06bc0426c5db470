#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "field.hpp"
#include "layout_io.hpp"
#include "matrix_io.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace hsld {

// Stand-in predictor for validating the evaluation pipeline: truth plus
// i.i.d. Gaussian noise, deterministic per (seed, sample id).

inline Matrix noisy_prediction(const Matrix& truth, double sigma, std::uint64_t seed,
                               std::uint64_t sample_id) {
    if (sigma < 0) throw DomainError("oracle: sigma must be >= 0");
    Rng rng(derive_seed(seed, "oracle", sample_id));
    Matrix out = truth;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += sigma * rng.normal();
    return out;
}

// Writes a prediction for every truth field.  If truth_dir/manifest.json
// exists, its sample records drive ids and relative label paths (mirrored
// under out_dir); otherwise every *.hsld below truth_dir is used, sorted by
// relative path, with the sort position as the id.  Returns the number of
// predictions written.
inline int noisy_oracle_predict(const std::filesystem::path& truth_dir, double sigma,
                                std::uint64_t seed, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    std::vector<std::pair<std::uint64_t, fs::path>> jobs;  // (sample id, relative path)
    const fs::path manifest_path = truth_dir / "manifest.json";
    if (fs::exists(manifest_path)) {
        nlohmann::json manifest;
        try {
            manifest = nlohmann::json::parse(read_text_file(manifest_path));
            for (const auto& rec : manifest.at("samples"))
                jobs.emplace_back(rec.at("id").get<std::uint64_t>(),
                                  fs::path(rec.at("label").get<std::string>()));
        } catch (const nlohmann::json::exception& e) {
            throw IoError("manifest: " + std::string(e.what()));
        }
    } else {
        std::vector<fs::path> found;
        for (const auto& entry : fs::recursive_directory_iterator(truth_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".hsld")
                found.push_back(fs::relative(entry.path(), truth_dir));
        std::sort(found.begin(), found.end());
        for (std::size_t i = 0; i < found.size(); ++i) jobs.emplace_back(i, found[i]);
    }
    if (jobs.empty()) throw DomainError("oracle: no truth fields under " + truth_dir.string());

    for (const auto& [id, rel] : jobs) fs::create_directories((out_dir / rel).parent_path());
    parallel_for(0, (std::int64_t)jobs.size(), [&](std::int64_t i) {
        const auto& [id, rel] = jobs[i];
        const auto truth = read_matrix_file(truth_dir / rel);
        write_matrix_file(noisy_prediction(truth, sigma, seed, id), out_dir / rel);
    });
    return (int)jobs.size();
}

}
