#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace hsld {

// Closed rectangle of admissible CENTER nodes.  Components may protrude from
// the window (the container constraint still applies); only centers are
// confined.
struct Window {
    int x_min = 0, x_max = 0, y_min = 0, y_max = 0;

    bool contains(int cx, int cy) const {
        return x_min <= cx && cx <= x_max && y_min <= cy && cy <= y_max;
    }
    void validate(int n_cells) const {
        if (!(0 <= x_min && x_min <= x_max && x_max <= n_cells && 0 <= y_min &&
              y_min <= y_max && y_max <= n_cells))
            throw DomainError("window: require 0 <= min <= max <= N on both axes");
    }
    bool operator==(const Window&) const = default;
};

// Node-indexed (N+1) x (N+1) matrix of small non-negative integers.  With all
// violation terms added, a node is a feasible center iff its value is zero.
// The same storage serves the single-term and integrated forms.
class OccupancyMatrix {
public:
    explicit OccupancyMatrix(int n_cells)
        : n_(n_cells), side_(n_cells + 1), values_(side_ * side_, 0) {}

    void reset() { std::fill(values_.begin(), values_.end(), 0); }

    // Marks every node where the component (half-extents he) would protrude
    // from the container or leave the window: the complement of one rectangle.
    void add_container_term(const HalfExtents& he, const std::optional<Window>& window) {
        int x_lo = he.a, x_hi = n_ - he.a, y_lo = he.b, y_hi = n_ - he.b;
        if (window) {
            x_lo = std::max(x_lo, window->x_min);
            x_hi = std::min(x_hi, window->x_max);
            y_lo = std::max(y_lo, window->y_min);
            y_hi = std::min(y_hi, window->y_max);
        }
        if (x_lo > x_hi || y_lo > y_hi) {
            add_rect(0, n_, 0, n_);
            return;
        }
        add_rect(0, n_, 0, y_lo - 1);          // below
        add_rect(0, n_, y_hi + 1, n_);         // above
        add_rect(0, x_lo - 1, y_lo, y_hi);     // left band
        add_rect(x_hi + 1, n_, y_lo, y_hi);    // right band
    }

    // Marks every node where a component with half-extents `he` would overlap
    // the already-placed component `placed`: the open Minkowski-expanded
    // rectangle |x-cx| < a_i+a_j, |y-cy| < b_i+b_j in node units.
    void add_pair_term(const Placement& placed, const HalfExtents& placed_he,
                       const HalfExtents& he) {
        const int sx = he.a + placed_he.a, sy = he.b + placed_he.b;
        add_rect(placed.cx - sx + 1, placed.cx + sx - 1, placed.cy - sy + 1, placed.cy + sy - 1);
    }

    int value(int x, int y) const { return values_[y * side_ + x]; }

    int zero_count() const {
        int count = 0;
        for (const int v : values_) count += (v == 0);
        return count;
    }

    // k-th zero node (0-based) scanning y (outer) then x: the uniform draw
    // over feasible nodes picks k uniformly in [0, zero_count).
    std::pair<int, int> kth_zero(int k) const {
        for (int i = 0; i < side_ * side_; ++i) {
            if (values_[i] == 0 && k-- == 0) return {i % side_, i / side_};
        }
        throw DomainError("occupancy: zero index out of range");
    }

    int nodes_per_side() const { return side_; }

private:
    void add_rect(int x_lo, int x_hi, int y_lo, int y_hi) {
        x_lo = std::max(x_lo, 0);
        y_lo = std::max(y_lo, 0);
        x_hi = std::min(x_hi, n_);
        y_hi = std::min(y_hi, n_);
        for (int y = y_lo; y <= y_hi; ++y) {
            int* row = values_.data() + y * side_;
            for (int x = x_lo; x <= x_hi; ++x) ++row[x];
        }
    }

    int n_;
    int side_;
    std::vector<int> values_;
};

struct SeqLSConfig {
    std::vector<int> sequence;     // empty = catalog order by descending area
    int max_restarts = 10000;      // total attempts before giving up
    std::optional<Window> window;  // optional center constraint

    void validate(const Catalog& catalog, const GridSystem& grid,
                  const std::vector<Placement>& preplaced = {}) const {
        if (max_restarts < 1) throw DomainError("seqls: max_restarts must be >= 1");
        if (window) window->validate(grid.cells_per_side);
        if (sequence.empty()) return;
        std::vector<int> expect = catalog.ids();
        for (const auto& p : preplaced)
            std::erase(expect, p.component_id);
        std::vector<int> got = sequence;
        std::sort(expect.begin(), expect.end());
        std::sort(got.begin(), got.end());
        if (got != expect)
            throw DomainError("seqls: sequence must be a permutation of the unplaced catalog ids");
    }
};

struct SeqLSResult {
    std::optional<Layout> layout;  // empty on failure
    int attempts = 0;              // failed attempts + the successful one
};

namespace detail {

// One placement pass over `sequence`, starting from `preplaced`.  Returns the
// completed placements, or nothing if some component has no feasible node.
inline std::optional<std::vector<Placement>> seqls_attempt(
    const Catalog& catalog, const GridSystem& grid, const std::vector<Placement>& preplaced,
    const std::vector<int>& sequence, const std::optional<Window>& window, Rng& rng,
    OccupancyMatrix& scratch) {
    std::vector<Placement> placed = preplaced;
    placed.reserve(preplaced.size() + sequence.size());
    for (const int id : sequence) {
        const auto he = catalog.half_extents(id);
        scratch.reset();
        scratch.add_container_term(he, window);
        for (const auto& p : placed)
            scratch.add_pair_term(p, catalog.half_extents(p.component_id), he);
        const int zeros = scratch.zero_count();
        if (zeros == 0) return std::nullopt;
        const auto [cx, cy] = scratch.kth_zero((int)rng.below((std::uint64_t)zeros));
        placed.push_back({id, cx, cy});
    }
    return placed;
}

}  // namespace detail

// Sequential sampler with some components already fixed (used by the special
// families).  Each unplaced component's center is drawn uniformly over the
// zero nodes of its integrated violation matrix; a failed pass counts as one
// attempt and restarts from `preplaced`.
inline SeqLSResult seqls_complete(const Catalog& catalog, const GridSystem& grid,
                                  const std::vector<Placement>& preplaced,
                                  const SeqLSConfig& config, Rng& rng) {
    config.validate(catalog, grid, preplaced);
    std::vector<int> sequence = config.sequence;
    if (sequence.empty()) {
        sequence = catalog.ids_by_descending_area();
        for (const auto& p : preplaced) std::erase(sequence, p.component_id);
    }
    for (const auto& p : preplaced) {
        if (!fits_container(p, catalog, grid))
            throw DomainError("seqls: preplaced component protrudes from the container");
    }
    OccupancyMatrix scratch(grid.cells_per_side);
    SeqLSResult result;
    while (result.attempts < config.max_restarts) {
        ++result.attempts;
        auto placed = detail::seqls_attempt(catalog, grid, preplaced, sequence, config.window,
                                            rng, scratch);
        if (placed) {
            result.layout = Layout{std::move(*placed), grid};
            return result;
        }
    }
    return result;  // layout empty: every attempt ran dry
}

inline SeqLSResult seqls_sample(const Catalog& catalog, const GridSystem& grid,
                                const SeqLSConfig& config, Rng& rng) {
    return seqls_complete(catalog, grid, {}, config, rng);
}

struct SeqLSBatch {
    std::vector<Layout> layouts;
    long long attempts = 0;
};

// n independent draws on per-index derived seeds; the result depends only on
// (base_seed, n, config), never on thread count or schedule.
inline SeqLSBatch seqls_batch(int n, const Catalog& catalog, const GridSystem& grid,
                              const SeqLSConfig& config, std::uint64_t base_seed) {
    if (n < 1) throw DomainError("seqls: batch size must be >= 1");
    SeqLSBatch batch;
    batch.layouts.resize(n, Layout{{}, grid});
    std::vector<int> attempts(n, 0);
    std::vector<char> failed(n, 0);
    parallel_for(0, n, [&](std::int64_t i) {
        Rng rng(derive_seed(base_seed, "seqls", (std::uint64_t)i));
        auto r = seqls_sample(catalog, grid, config, rng);
        attempts[i] = r.attempts;
        if (r.layout) batch.layouts[i] = std::move(*r.layout);
        else failed[i] = 1;
    });
    for (int i = 0; i < n; ++i) {
        if (failed[i])
            throw DomainError("seqls: sample " + std::to_string(i) + " failed after " +
                              std::to_string(attempts[i]) + " attempts");
        batch.attempts += attempts[i];
    }
    return batch;
}

}
