#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "geometry.hpp"
#include "gibls.hpp"
#include "layout_io.hpp"
#include "matrix_io.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "seqls.hpp"
#include "solver.hpp"
#include "special.hpp"
#include "standardize.hpp"

namespace hsld {

// Dataset assembly: per split, generate layouts, solve for labels, and write
//   <out>/<split>/layouts/NNNNNN.json
//   <out>/<split>/inputs/NNNNNN.hsld    rasterized source, W/m^2
//   <out>/<split>/labels/NNNNNN.hsld    temperature field, K
//   <out>/<split>/manifest.json
// plus a top-level <out>/dataset.json summary.  Everything is a pure function
// of (case, seed, composition); an INCOMPLETE marker flags aborted runs.

inline const std::vector<std::string>& split_names() {
    static const std::vector<std::string> names = {"train", "test1", "test2", "test3", "test4",
                                                   "test5", "test6", "test7", "test8", "test9"};
    return names;
}

struct Composition {
    std::vector<std::pair<std::string, int>> counts;  // canonical split order

    // The published composition: one row per case.
    static Composition defaults() {
        return {{{"train", 2000},
                 {"test1", 10000},
                 {"test2", 10000},
                 {"test3", 1000},
                 {"test4", 4000},
                 {"test5", 6000},
                 {"test6", 6000},
                 {"test7", 1000},
                 {"test8", 1000},
                 {"test9", 1000}}};
    }

    // Override object {"split": count, ...}; splits not mentioned get 0.
    static Composition from_json_text(const std::string& text) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw IoError("composition: " + std::string(e.what()));
        }
        if (!j.is_object()) throw IoError("composition: expected an object of split counts");
        Composition comp;
        for (const auto& name : split_names()) {
            int count = 0;
            if (auto it = j.find(name); it != j.end()) {
                if (!it->is_number_integer() || it->get<long long>() < 0)
                    throw IoError("composition: " + name + " must be a non-negative integer");
                count = it->get<int>();
                j.erase(it);
            }
            comp.counts.emplace_back(name, count);
        }
        if (!j.empty()) throw IoError("composition: unknown split " + j.begin().key());
        return comp;
    }

    int count_for(const std::string& name) const {
        for (const auto& [n, c] : counts)
            if (n == name) return c;
        return 0;
    }

    long long total() const {
        long long t = 0;
        for (const auto& [n, c] : counts) t += c;
        return t;
    }
};

struct AssembleOptions {
    SolveSettings settings{1e-8, 0, SolverKind::direct};  // direct: one factorization, many solves
    int gibls_burn_in = 100;
    int gibls_interval = 5;
    int corner_jitter = 10;
    bool progress = false;  // per-split progress lines on stderr
};

namespace detail {

struct GeneratedSplit {
    std::vector<Layout> layouts;
    std::vector<nlohmann::ordered_json> generators;  // one record per sample
};

inline std::string sample_stem(int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06d", i);
    return buf;
}

inline nlohmann::ordered_json window_json(const Window& w) {
    return nlohmann::ordered_json::array({w.x_min, w.x_max, w.y_min, w.y_max});
}

inline GeneratedSplit generate_split(const std::string& split, int count, const Catalog& catalog,
                                     const GridSystem& grid, std::uint64_t base_seed,
                                     const AssembleOptions& options) {
    GeneratedSplit out;
    out.layouts.resize(count, Layout{{}, grid});
    out.generators.resize(count);
    const int n = grid.cells_per_side;

    auto per_sample = [&](auto&& fn) {  // independent samples on derived seeds
        parallel_for(0, count, [&](std::int64_t i) {
            const std::uint64_t seed = derive_seed(base_seed, split, (std::uint64_t)i);
            Rng rng(seed);
            fn((int)i, seed, rng);
        });
    };

    if (split == "train" || split == "test1") {
        per_sample([&](int i, std::uint64_t seed, Rng& rng) {
            SeqLSConfig config;
            auto r = seqls_sample(catalog, grid, config, rng);
            if (!r.layout) throw DomainError(split + ": sampling failed");
            out.layouts[i] = std::move(*r.layout);
            out.generators[i] = {{"kind", "seqls"}, {"seed", seed}};
        });
    } else if (split == "test2") {
        const std::uint64_t init_seed = derive_seed(base_seed, split + "-init", 0);
        const std::uint64_t chain_seed = derive_seed(base_seed, split + "-chain", 0);
        Rng init_rng(init_seed);
        SeqLSConfig init_config;
        auto init = seqls_sample(catalog, grid, init_config, init_rng);
        if (!init.layout) throw DomainError("test2: initial draw failed");
        GibLSConfig config;
        config.burn_in = options.gibls_burn_in;
        config.interval = options.gibls_interval;
        config.chain_length = count;
        config.initial_layout = *init.layout;
        Rng chain_rng(chain_seed);
        out.layouts = gibls_chain(catalog, grid, config, chain_rng);
        for (int i = 0; i < count; ++i)
            out.generators[i] = {{"kind", "gibls"},      {"seed", chain_seed},
                                 {"init_seed", init_seed}, {"burn_in", config.burn_in},
                                 {"interval", config.interval}, {"index", i}};
    } else if (split == "test3") {
        per_sample([&](int i, std::uint64_t seed, Rng& rng) {
            out.layouts[i] = corner_sample(catalog, grid, rng, options.corner_jitter);
            out.generators[i] = {{"kind", "corner"},
                                 {"seed", seed},
                                 {"jitter_max", options.corner_jitter}};
        });
    } else if (split == "test4") {
        per_sample([&](int i, std::uint64_t seed, Rng& rng) {
            const auto& group = builtin_groups()[i % builtin_groups().size()];
            out.layouts[i] = group_sample(group, catalog, grid, rng);
            out.generators[i] = {{"kind", "group"}, {"seed", seed}, {"group", group.name}};
        });
    } else if (split == "test5" || split == "test6") {
        const int width = n / 2, step = n / 10;
        per_sample([&](int i, std::uint64_t seed, Rng& rng) {
            const int off = (i % 6) * step;
            const Window window = split == "test5" ? Window{off, off + width, 0, n}
                                                   : Window{0, n, off, off + width};
            auto r = part_space_sample(window, catalog, grid, rng);
            if (!r.layout) throw DomainError(split + ": sampling failed");
            out.layouts[i] = std::move(*r.layout);
            out.generators[i] = {{"kind", split == "test5" ? "half-x" : "half-y"},
                                 {"seed", seed},
                                 {"offset", off},
                                 {"window", window_json(window)}};
        });
    } else if (split == "test7" || split == "test8" || split == "test9") {
        const int side = split == "test7" ? 140 : split == "test8" ? 120 : 100;
        per_sample([&](int i, std::uint64_t seed, Rng& rng) {
            auto r = square_sample(side, catalog, grid, rng);
            out.layouts[i] = std::move(r.layout);
            out.generators[i] = {{"kind", "square"},
                                 {"seed", seed},
                                 {"side", side},
                                 {"window", window_json(r.window)},
                                 {"attempts", r.attempts}};
        });
    } else {
        throw DomainError("unknown split " + split);
    }
    return out;
}

}  // namespace detail

struct DatasetSummary {
    int case_id = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, int>> split_counts;  // nonzero splits, in order
    std::filesystem::path out_dir;
};

inline DatasetSummary assemble_dataset(int case_id, const Composition& composition,
                                       std::uint64_t base_seed,
                                       const std::filesystem::path& out_dir,
                                       const AssembleOptions& options = {}) {
    namespace fs = std::filesystem;
    const auto grid = GridSystem{};
    const auto catalog = Catalog::builtin(grid);
    const auto config = CaseConfig::for_case(case_id);
    const auto params = standardization_for_case(case_id);

    fs::create_directories(out_dir);
    const fs::path marker = out_dir / "INCOMPLETE";
    write_text_file(marker, "dataset assembly in progress\n");

    DatasetSummary summary{case_id, base_seed, {}, out_dir};
    try {
        for (const auto& [split, count] : composition.counts) {
            if (count == 0) continue;
            if (options.progress)
                std::cerr << "[dataset] " << split << ": generating " << count << " layouts\n";
            auto generated = detail::generate_split(split, count, catalog, grid, base_seed,
                                                    options);
            const fs::path split_dir = out_dir / split;
            fs::create_directories(split_dir / "layouts");
            fs::create_directories(split_dir / "inputs");
            fs::create_directories(split_dir / "labels");

            if (options.progress)
                std::cerr << "[dataset] " << split << ": solving " << count << " fields\n";
            parallel_for_ctx(
                0, count,
                [&] { return PoissonSolver(config, grid, options.settings); },
                [&](PoissonSolver& solver, std::int64_t i) {
                    const auto stem = detail::sample_stem((int)i);
                    const auto& layout = generated.layouts[i];
                    const auto phi = rasterize(layout, catalog, grid);
                    const auto field = solver.solve(phi);
                    save_layout(layout, split_dir / "layouts" / (stem + ".json"));
                    write_matrix_file(phi, split_dir / "inputs" / (stem + ".hsld"));
                    write_matrix_file(field, split_dir / "labels" / (stem + ".hsld"));
                });

            nlohmann::ordered_json manifest;
            manifest["case"] = case_id;
            manifest["split"] = split;
            manifest["count"] = count;
            manifest["samples"] = nlohmann::ordered_json::array();
            for (int i = 0; i < count; ++i) {
                const auto stem = detail::sample_stem(i);
                nlohmann::ordered_json rec;
                rec["id"] = i;
                rec["layout"] = "layouts/" + stem + ".json";
                rec["input"] = "inputs/" + stem + ".hsld";
                rec["label"] = "labels/" + stem + ".hsld";
                rec["generator"] = generated.generators[i];
                manifest["samples"].push_back(std::move(rec));
            }
            write_text_file(split_dir / "manifest.json", manifest.dump(2) + "\n");
            summary.split_counts.emplace_back(split, count);
        }

        nlohmann::ordered_json top;
        top["case"] = case_id;
        top["seed"] = base_seed;
        top["grid"] = {{"L", grid.side_length_m}, {"N", grid.cells_per_side}};
        top["standardization"] = {{"x_mean", params.x_mean},
                                  {"x_std", params.x_std},
                                  {"y_mean", params.y_mean},
                                  {"y_std", params.y_std}};
        top["splits"] = nlohmann::ordered_json::array();
        for (const auto& [split, count] : summary.split_counts)
            top["splits"].push_back({{"name", split}, {"count", count}, {"dir", split}});
        write_text_file(out_dir / "dataset.json", top.dump(2) + "\n");
    } catch (const std::exception& e) {
        write_text_file(marker, std::string("aborted: ") + e.what() + "\n");
        throw;
    }
    fs::remove(marker);
    return summary;
}

}
