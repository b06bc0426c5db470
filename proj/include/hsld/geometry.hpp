#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "field.hpp"

namespace hsld {

// Square domain of side L meshed into N x N cells of size h = L/N.  Component
// centers live on the (N+1) x (N+1) grid-node lattice, node coordinates are
// integers in [0, N], physical position = (cx*h, cy*h).
struct GridSystem {
    double side_length_m = 0.1;
    int cells_per_side = 200;
    double cell_size_m = 0.1 / 200;

    static GridSystem square(double side_length_m, int cells_per_side) {
        if (cells_per_side < 2) throw DomainError("grid: cells_per_side must be >= 2");
        if (!(side_length_m > 0)) throw DomainError("grid: side length must be positive");
        return GridSystem{side_length_m, cells_per_side, side_length_m / cells_per_side};
    }
};

// One heat source: an axis-aligned rectangle.  length_m is the x-extent,
// width_m the y-extent (fixed convention; rotations are not supported).
struct ComponentSpec {
    int id = 0;
    double length_m = 0;
    double width_m = 0;
    double intensity = 0;  // W/m^2
};

// Half-extents in cells: a = length/(2h), b = width/(2h).  Integral for every
// catalog entry, so rasterization is exact with no partial cells.
struct HalfExtents {
    int a = 0;
    int b = 0;
};

class Catalog {
public:
    Catalog(std::vector<ComponentSpec> specs, const GridSystem& grid) : specs_(std::move(specs)) {
        const double h = grid.cell_size_m;
        int max_id = 0;
        for (const auto& s : specs_) max_id = std::max(max_id, s.id);
        index_of_id_.assign(max_id + 1, -1);
        half_.reserve(specs_.size());
        for (std::size_t i = 0; i < specs_.size(); ++i) {
            const auto& s = specs_[i];
            if (s.id <= 0) throw DomainError("catalog: component ids must be positive");
            if (index_of_id_[s.id] != -1) throw DomainError("catalog: duplicate component id");
            if (!(s.length_m > 0 && s.width_m > 0 && s.intensity > 0))
                throw DomainError("catalog: dimensions and intensity must be positive");
            const double af = s.length_m / (2 * h), bf = s.width_m / (2 * h);
            HalfExtents he{(int)std::lround(af), (int)std::lround(bf)};
            if (he.a < 1 || he.b < 1 || std::abs(af - he.a) > 1e-9 || std::abs(bf - he.b) > 1e-9)
                throw DomainError("catalog: component extents must be positive even multiples of the cell size");
            index_of_id_[s.id] = (int)i;
            half_.push_back(he);
        }
    }

    // The twelve built-in components (dimensions in m, intensities in W/m^2).
    static Catalog builtin(const GridSystem& grid = GridSystem{}) {
        return Catalog(
            {
                {1, 0.016, 0.012, 4000},
                {2, 0.012, 0.006, 16000},
                {3, 0.018, 0.009, 6000},
                {4, 0.018, 0.012, 8000},
                {5, 0.018, 0.018, 10000},
                {6, 0.012, 0.012, 14000},
                {7, 0.018, 0.006, 16000},
                {8, 0.009, 0.009, 20000},
                {9, 0.006, 0.024, 8000},
                {10, 0.006, 0.012, 16000},
                {11, 0.012, 0.024, 10000},
                {12, 0.024, 0.024, 20000},
            },
            grid);
    }

    const ComponentSpec& spec(int id) const { return specs_[index(id)]; }
    HalfExtents half_extents(int id) const { return half_[index(id)]; }
    const std::vector<ComponentSpec>& specs() const { return specs_; }
    std::size_t size() const { return specs_.size(); }
    bool has(int id) const {
        return id > 0 && id < (int)index_of_id_.size() && index_of_id_[id] != -1;
    }

    std::vector<int> ids() const {
        std::vector<int> out;
        out.reserve(specs_.size());
        for (const auto& s : specs_) out.push_back(s.id);
        return out;
    }

    // Placement order used by the sequential sampler: descending rectangle
    // area, ties broken by ascending id.  Computed from the catalog, never
    // hard-coded.
    std::vector<int> ids_by_descending_area() const {
        std::vector<int> order = ids();
        std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
            const auto &l = spec(lhs), &r = spec(rhs);
            const double la = l.length_m * l.width_m, ra = r.length_m * r.width_m;
            if (la != ra) return la > ra;
            return lhs < rhs;
        });
        return order;
    }

private:
    int index(int id) const {
        if (!has(id)) throw DomainError("unknown component id " + std::to_string(id));
        return index_of_id_[id];
    }

    std::vector<ComponentSpec> specs_;
    std::vector<HalfExtents> half_;
    std::vector<int> index_of_id_;  // id -> index into specs_, -1 if absent
};

struct Placement {
    int component_id = 0;
    int cx = 0;  // grid-node coordinates of the rectangle center
    int cy = 0;

    bool operator==(const Placement&) const = default;
};

struct Layout {
    std::vector<Placement> placements;
    GridSystem grid;
};

// True iff the component lies fully inside the container: a <= cx <= N-a and
// b <= cy <= N-b.
inline bool fits_container(const Placement& p, const Catalog& catalog, const GridSystem& grid) {
    const auto he = catalog.half_extents(p.component_id);
    const int n = grid.cells_per_side;
    return he.a <= p.cx && p.cx <= n - he.a && he.b <= p.cy && p.cy <= n - he.b;
}

// True iff the rectangle interiors intersect.  Strict inequalities: edge or
// corner contact is not overlap, so touching layouts are feasible.
inline bool overlaps(const Placement& p1, const Placement& p2, const Catalog& catalog) {
    const auto h1 = catalog.half_extents(p1.component_id);
    const auto h2 = catalog.half_extents(p2.component_id);
    return std::abs(p1.cx - p2.cx) < h1.a + h2.a && std::abs(p1.cy - p2.cy) < h1.b + h2.b;
}

// True iff the closed rectangles intersect but their interiors do not:
// |dx| <= a1+a2 and |dy| <= b1+b2 with equality in at least one axis.
// Overlapping input returns false.
inline bool contact(const Placement& p1, const Placement& p2, const Catalog& catalog) {
    const auto h1 = catalog.half_extents(p1.component_id);
    const auto h2 = catalog.half_extents(p2.component_id);
    const int dx = std::abs(p1.cx - p2.cx), dy = std::abs(p1.cy - p2.cy);
    const int sx = h1.a + h2.a, sy = h1.b + h2.b;
    return dx <= sx && dy <= sy && (dx == sx || dy == sy);
}

// Throws DomainError on duplicate ids, container protrusion, or pairwise
// interior overlap.
inline void validate_layout(const Layout& layout, const Catalog& catalog) {
    const auto& ps = layout.placements;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (!fits_container(ps[i], catalog, layout.grid))
            throw DomainError("layout: component " + std::to_string(ps[i].component_id) +
                              " protrudes from the container");
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            if (ps[i].component_id == ps[j].component_id)
                throw DomainError("layout: duplicate component id " +
                                  std::to_string(ps[i].component_id));
            if (overlaps(ps[i], ps[j], catalog))
                throw DomainError("layout: components " + std::to_string(ps[i].component_id) +
                                  " and " + std::to_string(ps[j].component_id) + " overlap");
        }
    }
}

// Paints each component's intensity over the cells it covers: columns
// cx-a .. cx+a-1 and rows cy-b .. cy+b-1, 0-indexed.  A cell written twice
// means the input layout violated its invariants.
inline IntensityField rasterize(const Layout& layout, const Catalog& catalog,
                                const GridSystem& grid) {
    validate_layout(layout, catalog);
    const int n = grid.cells_per_side;
    IntensityField phi(n, n, 0.0);
    for (const auto& p : layout.placements) {
        const auto he = catalog.half_extents(p.component_id);
        const double value = catalog.spec(p.component_id).intensity;
        for (int r = p.cy - he.b; r < p.cy + he.b; ++r)
            for (int c = p.cx - he.a; c < p.cx + he.a; ++c) {
                if (phi(r, c) != 0.0) throw DomainError("rasterize: cell written twice");
                phi(r, c) = value;
            }
    }
    return phi;
}

}
