#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "rng.hpp"
#include "seqls.hpp"

namespace hsld {

// Hard test families: the largest component pinned near a corner, clusters of
// equal-intensity components placed touching, and layouts confined to reduced
// windows.

namespace detail {

inline SeqLSResult complete_rest(const Catalog& catalog, const GridSystem& grid,
                                 const std::vector<Placement>& preplaced, Rng& rng) {
    SeqLSConfig config;  // default sequence over the leftovers, no window
    return seqls_complete(catalog, grid, preplaced, config, rng);
}

}  // namespace detail

// Component 12 flush against a uniformly chosen corner, nudged inward by
// independent uniform integer jitters in [0, jitter_max] per axis; the rest
// follows the sequential sampler.  Corner order: bottom-left, bottom-right,
// top-left, top-right.
inline Layout corner_sample(const Catalog& catalog, const GridSystem& grid, Rng& rng,
                            int jitter_max = 10) {
    const int corner_id = 12;
    const auto he = catalog.half_extents(corner_id);
    const int n = grid.cells_per_side;
    if (jitter_max < 0 || 2 * he.a + jitter_max > n || 2 * he.b + jitter_max > n)
        throw DomainError("corner: jitter_max out of range");
    const int corner = (int)rng.below(4);
    const int jx = (int)rng.below((std::uint64_t)jitter_max + 1);
    const int jy = (int)rng.below((std::uint64_t)jitter_max + 1);
    const bool right = corner == 1 || corner == 3;
    const bool top = corner == 2 || corner == 3;
    Placement p{corner_id, right ? n - he.a - jx : he.a + jx, top ? n - he.b - jy : he.b + jy};
    auto result = detail::complete_rest(catalog, grid, {p}, rng);
    if (!result.layout) throw DomainError("corner: completion failed");
    return *result.layout;
}

// A cluster of equal-intensity components; members are placed in listed order
// so that each touches an earlier one.
struct GroupSpec {
    std::string name;
    std::vector<int> members;
};

inline const std::vector<GroupSpec>& builtin_groups() {
    static const std::vector<GroupSpec> groups = {
        {"G1", {4, 9}}, {"G2", {5, 11}}, {"G3", {8, 12}}, {"G4", {2, 7, 10}}};
    return groups;
}

inline const GroupSpec& group_by_name(const std::string& name) {
    for (const auto& g : builtin_groups())
        if (g.name == name) return g;
    throw DomainError("unknown group " + name);
}

// First member uniform over its container-feasible rectangle; each later
// member drawn uniformly from its contact locus: the integer nodes on the
// perimeters of the placed members' Minkowski expansions, kept when inside
// the container and not overlapping any placed member.  Remaining components
// follow the sequential sampler.
inline Layout group_sample(const GroupSpec& group, const Catalog& catalog,
                           const GridSystem& grid, Rng& rng) {
    if (group.members.size() < 2) throw DomainError("group: need at least two members");
    const double intensity = catalog.spec(group.members.front()).intensity;
    for (const int id : group.members)
        if (catalog.spec(id).intensity != intensity)
            throw DomainError("group: members must share one intensity");

    const int n = grid.cells_per_side;
    const int first_retries = 1000;
    for (int attempt = 0; attempt < first_retries; ++attempt) {
        std::vector<Placement> placed;
        const int first = group.members.front();
        const auto fhe = catalog.half_extents(first);
        placed.push_back({first, (int)rng.uniform_int(fhe.a, n - fhe.a),
                          (int)rng.uniform_int(fhe.b, n - fhe.b)});
        bool dead_end = false;
        for (std::size_t m = 1; m < group.members.size() && !dead_end; ++m) {
            const int id = group.members[m];
            const auto he = catalog.half_extents(id);
            std::vector<int> locus;  // in-bounds nodes encoded as cx*(n+1)+cy
            auto push = [&](int x, int y) {
                if (0 <= x && x <= n && 0 <= y && y <= n) locus.push_back(x * (n + 1) + y);
            };
            for (const auto& prev : placed) {
                const auto phe = catalog.half_extents(prev.component_id);
                const int sx = he.a + phe.a, sy = he.b + phe.b;
                const int x0 = prev.cx - sx, x1 = prev.cx + sx;
                const int y0 = prev.cy - sy, y1 = prev.cy + sy;
                for (int x = x0; x <= x1; ++x) {
                    push(x, y0);
                    push(x, y1);
                }
                for (int y = y0 + 1; y <= y1 - 1; ++y) {
                    push(x0, y);
                    push(x1, y);
                }
            }
            std::sort(locus.begin(), locus.end());
            locus.erase(std::unique(locus.begin(), locus.end()), locus.end());
            std::vector<Placement> candidates;
            for (const int code : locus) {
                const Placement cand{id, code / (n + 1), code % (n + 1)};
                if (!fits_container(cand, catalog, grid)) continue;
                bool clash = false;
                for (const auto& prev : placed)
                    if (overlaps(cand, prev, catalog)) {
                        clash = true;
                        break;
                    }
                if (!clash) candidates.push_back(cand);
            }
            if (candidates.empty()) {
                dead_end = true;  // resample the first member
                break;
            }
            placed.push_back(candidates[rng.below(candidates.size())]);
        }
        if (dead_end) continue;
        auto result = detail::complete_rest(catalog, grid, placed, rng);
        if (!result.layout) throw DomainError("group: completion failed");
        return *result.layout;
    }
    throw DomainError("group: no valid contact placement after " +
                      std::to_string(first_retries) + " tries");
}

// Sequential sampling with every center confined to the window.
inline SeqLSResult part_space_sample(const Window& window, const Catalog& catalog,
                                     const GridSystem& grid, Rng& rng,
                                     int max_restarts = 10000) {
    SeqLSConfig config;
    config.window = window;
    config.max_restarts = max_restarts;
    return seqls_sample(catalog, grid, config, rng);
}

struct SquareSampleResult {
    Layout layout;
    Window window;  // the window of the successful attempt
    int attempts = 0;
};

// Square window of the given side, placed uniformly at random once per
// sample; placement then restarts inside that same window until it succeeds.
// Every restart counts as one attempt, so summing attempts across samples
// yields the success-rate accounting used by the batch reports.
inline SquareSampleResult square_sample(int side, const Catalog& catalog,
                                        const GridSystem& grid, Rng& rng,
                                        int max_attempts = 10000) {
    const int n = grid.cells_per_side;
    if (side < 1 || side > n) throw DomainError("square: side must be in [1, N]");
    const int x0 = (int)rng.uniform_int(0, n - side);
    const int y0 = (int)rng.uniform_int(0, n - side);
    const Window window{x0, x0 + side, y0, y0 + side};
    auto r = part_space_sample(window, catalog, grid, rng, max_attempts);
    if (!r.layout)
        throw DomainError("square: no feasible layout after " + std::to_string(r.attempts) +
                          " attempts");
    return SquareSampleResult{std::move(*r.layout), window, r.attempts};
}

}
