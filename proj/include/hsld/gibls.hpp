#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "rng.hpp"

namespace hsld {

enum class Axis { x, y };

// Sorted disjoint closed integer intervals of admissible node coordinates for
// one component along one axis, everything else held fixed.
struct FeasibleSegments {
    std::vector<std::pair<int, int>> segments;

    int total_nodes() const {
        int n = 0;
        for (const auto& [lo, hi] : segments) n += hi - lo + 1;
        return n;
    }

    bool contains(int v) const {
        for (const auto& [lo, hi] : segments)
            if (lo <= v && v <= hi) return true;
        return false;
    }

    // k-th admissible node, 0-based, in ascending order.
    int kth(int k) const {
        for (const auto& [lo, hi] : segments) {
            const int len = hi - lo + 1;
            if (k < len) return lo + k;
            k -= len;
        }
        throw DomainError("segments: node index out of range");
    }
};

// One-dimensional conditional feasible set: the base container interval minus,
// for every other component whose orthogonal separation is below the overlap
// threshold, the open blocked interval around its center.
inline FeasibleSegments feasible_segments(const Layout& layout, int component_id, Axis axis,
                                          const Catalog& catalog, const GridSystem& grid) {
    const Placement* self = nullptr;
    for (const auto& p : layout.placements)
        if (p.component_id == component_id) {
            self = &p;
            break;
        }
    if (!self) throw DomainError("layout has no component " + std::to_string(component_id));

    const auto he = catalog.half_extents(component_id);
    const int n = grid.cells_per_side;
    const int base_lo = axis == Axis::x ? he.a : he.b;
    const int base_hi = axis == Axis::x ? n - he.a : n - he.b;

    std::vector<std::pair<int, int>> blocked;  // closed intervals of excluded nodes
    for (const auto& other : layout.placements) {
        if (other.component_id == component_id) continue;
        const auto ohe = catalog.half_extents(other.component_id);
        const int ortho_sep =
            axis == Axis::x ? std::abs(other.cy - self->cy) : std::abs(other.cx - self->cx);
        const int ortho_threshold = axis == Axis::x ? he.b + ohe.b : he.a + ohe.a;
        if (ortho_sep >= ortho_threshold) continue;  // cannot overlap, whatever this axis does
        const int s = axis == Axis::x ? he.a + ohe.a : he.b + ohe.b;
        const int center = axis == Axis::x ? other.cx : other.cy;
        blocked.emplace_back(center - s + 1, center + s - 1);
    }
    std::sort(blocked.begin(), blocked.end());

    FeasibleSegments out;
    int cursor = base_lo;
    for (const auto& [lo, hi] : blocked) {
        if (hi < cursor) continue;
        if (lo > base_hi) break;
        if (lo > cursor) out.segments.emplace_back(cursor, std::min(lo - 1, base_hi));
        cursor = std::max(cursor, hi + 1);
        if (cursor > base_hi) break;
    }
    if (cursor <= base_hi) out.segments.emplace_back(cursor, base_hi);
    return out;
}

struct GibLSConfig {
    int burn_in = 100;  // iterations discarded before the first save
    int interval = 5;   // iterations between saves
    int chain_length = 1;
    Layout initial_layout;

    void validate() const {
        if (burn_in < 0) throw DomainError("gibls: burn_in must be >= 0");
        if (interval < 1) throw DomainError("gibls: interval must be >= 1");
        if (chain_length < 1) throw DomainError("gibls: chain_length must be >= 1");
    }
};

struct GibLSStats {
    long long iterations = 0;  // full coordinate scans executed
};

// Systematic-scan Gibbs chain over the 2*Ns coordinates: components in
// ascending id order, x before y, each coordinate redrawn uniformly over its
// one-dimensional feasible set.  Iteration k (1-based) is saved when k is past
// burn-in B and (k - B - 1) mod I == 0, until chain_length layouts are kept;
// that executes B + 1 + (chain_length - 1) * I iterations in total.
inline std::vector<Layout> gibls_chain(const Catalog& catalog, const GridSystem& grid,
                                       const GibLSConfig& config, Rng& rng,
                                       GibLSStats* stats = nullptr) {
    config.validate();
    Layout state = config.initial_layout;
    state.grid = grid;
    validate_layout(state, catalog);
    if (state.placements.size() != catalog.size())
        throw DomainError("gibls: initial layout must place every catalog component");

    std::vector<int> scan = catalog.ids();
    std::sort(scan.begin(), scan.end());
    std::vector<int> slot_of_id;  // id -> index into state.placements
    {
        const int max_id = *std::max_element(scan.begin(), scan.end());
        slot_of_id.assign(max_id + 1, -1);
        for (std::size_t i = 0; i < state.placements.size(); ++i)
            slot_of_id[state.placements[i].component_id] = (int)i;
    }

    std::vector<Layout> saved;
    saved.reserve(config.chain_length);
    for (long long k = 1; (int)saved.size() < config.chain_length; ++k) {
        for (const int id : scan) {
            auto& p = state.placements[slot_of_id[id]];
            for (const Axis axis : {Axis::x, Axis::y}) {
                const auto segs = feasible_segments(state, id, axis, catalog, grid);
                const int nodes = segs.total_nodes();
                // The current coordinate is always feasible, so nodes >= 1.
                const int v = segs.kth((int)rng.below((std::uint64_t)nodes));
                (axis == Axis::x ? p.cx : p.cy) = v;
            }
        }
        if (stats) stats->iterations = k;
        if (k > config.burn_in && (k - config.burn_in - 1) % config.interval == 0)
            saved.push_back(state);
    }
    return saved;
}

}
