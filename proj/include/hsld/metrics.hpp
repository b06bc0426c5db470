#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "solver.hpp"

namespace hsld {

// Evaluation suite over (prediction, truth) pairs: pixel- and image-level
// scores plus the batch-level rank correlation of field maxima.

struct PointwiseMetrics {
    double mt_ae = 0;   // |max pred - max truth|, K
    double mt_pae = 0;  // Euclidean distance between argmax cells
    double mae = 0;     // mean |diff|, K
    double max_ae = 0;  // max |diff|, K
};

namespace detail {

// Argmax with deterministic tie-break: smallest row-major index wins.
inline std::pair<std::size_t, std::size_t> argmax_cell(const Matrix& m) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < m.size(); ++i)
        if (m.data()[i] > m.data()[best]) best = i;
    return {best / m.cols(), best % m.cols()};
}

}  // namespace detail

inline PointwiseMetrics pointwise_metrics(const Matrix& pred, const Matrix& truth) {
    if (!pred.same_shape(truth) || pred.size() == 0)
        throw DomainError("metrics: fields must share a non-empty shape");
    PointwiseMetrics out;
    double sum = 0, pred_max = pred.data()[0], truth_max = truth.data()[0];
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = std::abs(pred.data()[i] - truth.data()[i]);
        sum += d;
        out.max_ae = std::max(out.max_ae, d);
        pred_max = std::max(pred_max, pred.data()[i]);
        truth_max = std::max(truth_max, truth.data()[i]);
    }
    out.mae = sum / (double)pred.size();
    out.mt_ae = std::abs(pred_max - truth_max);
    const auto [pr, pc] = detail::argmax_cell(pred);
    const auto [tr, tc] = detail::argmax_cell(truth);
    const double dr = (double)pr - (double)tr, dc = (double)pc - (double)tc;
    out.mt_pae = std::hypot(dr, dc);
    return out;
}

struct MaskedMetrics {
    std::optional<double> bmae_d;  // boundary cells with a Dirichlet face
    std::optional<double> bmae_n;  // boundary cells with Neumann faces only
    std::optional<double> cmae;    // worst per-component mean error
    std::vector<std::pair<int, double>> cmae_i;  // (component id, mean error)
};

// Boundary masks cover the outermost cell ring, split by boundary condition:
// case 1 makes the whole ring Dirichlet (no Neumann metric), case 2 assigns
// the Dirichlet side's edge cells (corners included) to the Dirichlet mask,
// case 3 only the sink cells.  Component masks are the rasterized rectangles.
inline MaskedMetrics masked_metrics(const Matrix& pred, const Matrix& truth,
                                    const Layout& layout, const CaseConfig& config,
                                    const Catalog& catalog) {
    if (!pred.same_shape(truth)) throw DomainError("metrics: shape mismatch");
    const int n = layout.grid.cells_per_side;
    if ((int)pred.rows() != n || (int)pred.cols() != n)
        throw DomainError("metrics: fields do not match the layout grid");

    auto mean_over = [&](auto&& in_mask) -> std::optional<double> {
        double sum = 0;
        long count = 0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (in_mask(r, c)) {
                    sum += std::abs(pred(r, c) - truth(r, c));
                    ++count;
                }
        if (count == 0) return std::nullopt;
        return sum / (double)count;
    };

    auto on_ring = [&](int r, int c) { return r == 0 || r == n - 1 || c == 0 || c == n - 1; };
    auto dirichlet_cell = [&](int r, int c) -> bool {
        if (!on_ring(r, c)) return false;
        switch (config.case_id) {
            case 1:
                return true;
            case 2:
                switch (config.dirichlet_side) {
                    case Side::left: return c == 0;
                    case Side::right: return c == n - 1;
                    case Side::bottom: return r == 0;
                    default: return r == n - 1;
                }
            default: {
                if (r != 0) return false;
                const double half_cells = config.sink_width_m / (2 * layout.grid.cell_size_m);
                const double lo = n / 2.0 - half_cells, hi = n / 2.0 + half_cells;
                return c + 0.5 >= lo - 1e-9 && c + 0.5 <= hi + 1e-9;
            }
        }
    };

    MaskedMetrics out;
    out.bmae_d = mean_over(dirichlet_cell);
    out.bmae_n = mean_over([&](int r, int c) { return on_ring(r, c) && !dirichlet_cell(r, c); });

    for (const auto& p : layout.placements) {
        const auto he = catalog.half_extents(p.component_id);
        const auto v = mean_over([&](int r, int c) {
            return p.cy - he.b <= r && r < p.cy + he.b && p.cx - he.a <= c && c < p.cx + he.a;
        });
        out.cmae_i.emplace_back(p.component_id, v.value_or(0.0));
        if (v) out.cmae = std::max(out.cmae.value_or(0.0), *v);
    }
    return out;
}

struct DerivativeMetrics {
    double g_mae = 0;    // K/m
    double lap_mae = 0;  // K/m^2
};

// Central differences on the (N-2) x (N-2) interior: both neighbors must
// exist, so the outermost ring is excluded and means are over (N-2)^2 cells.
inline DerivativeMetrics derivative_metrics(const Matrix& pred, const Matrix& truth,
                                            const GridSystem& grid) {
    if (!pred.same_shape(truth)) throw DomainError("metrics: shape mismatch");
    const int n = grid.cells_per_side;
    if ((int)pred.rows() != n || (int)pred.cols() != n)
        throw DomainError("metrics: fields do not match the grid");
    if (n < 3) throw DomainError("metrics: derivatives need at least a 3x3 grid");
    const double h = grid.cell_size_m;
    double g_sum = 0, lap_sum = 0;
    for (int r = 1; r < n - 1; ++r)
        for (int c = 1; c < n - 1; ++c) {
            const double gx_p = (pred(r, c + 1) - pred(r, c - 1)) / (2 * h);
            const double gx_t = (truth(r, c + 1) - truth(r, c - 1)) / (2 * h);
            const double gy_p = (pred(r + 1, c) - pred(r - 1, c)) / (2 * h);
            const double gy_t = (truth(r + 1, c) - truth(r - 1, c)) / (2 * h);
            g_sum += std::abs(gx_p - gx_t) + std::abs(gy_p - gy_t);
            const double lap_p = (pred(r, c + 1) + pred(r, c - 1) + pred(r + 1, c) +
                                  pred(r - 1, c) - 4 * pred(r, c)) /
                                 (h * h);
            const double lap_t = (truth(r, c + 1) + truth(r, c - 1) + truth(r + 1, c) +
                                  truth(r - 1, c) - 4 * truth(r, c)) /
                                 (h * h);
            lap_sum += std::abs(lap_p - lap_t);
        }
    const double cells = (double)(n - 2) * (n - 2);
    return {g_sum / cells, lap_sum / cells};
}

namespace detail {

// Average ranks (1-based); ties share the mean of their rank range.
inline std::vector<double> average_ranks(const double* v, int n) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double shared = (i + j) / 2.0 + 1.0;
        for (int k = i; k <= j; ++k) ranks[idx[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

// Pearson correlation of the rank vectors.  Degenerate variance: 1 when both
// rank vectors are constant (then they are identical), otherwise 0.
inline double spearman_rho(const double* a, const double* b, int n) {
    const auto ra = average_ranks(a, n), rb = average_ranks(b, n);
    double ma = 0, mb = 0;
    for (int i = 0; i < n; ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < n; ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0 && sbb == 0) return 1.0;
    if (saa == 0 || sbb == 0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

}  // namespace detail

struct SpearmanResult {
    double mean_rho = 0;
    double std_rho = 0;  // sample standard deviation over batches; 0 if < 2
    int batches = 0;
};

// Rank correlation of predicted vs true field maxima over disjoint
// consecutive batches (remainder beyond the last full batch is dropped).
inline SpearmanResult spearman_batches(const std::vector<double>& pred_max,
                                       const std::vector<double>& true_max,
                                       int batch_size = 100) {
    if (pred_max.size() != true_max.size())
        throw DomainError("spearman: sequences must have equal length");
    if (batch_size < 2) throw DomainError("spearman: batch size must be >= 2");
    const int batches = (int)(pred_max.size() / (std::size_t)batch_size);
    if (batches == 0) throw DomainError("spearman: fewer samples than one batch");
    std::vector<double> rhos(batches);
    for (int k = 0; k < batches; ++k)
        rhos[k] = detail::spearman_rho(pred_max.data() + (std::size_t)k * batch_size,
                                       true_max.data() + (std::size_t)k * batch_size, batch_size);
    SpearmanResult out;
    out.batches = batches;
    for (const double r : rhos) out.mean_rho += r;
    out.mean_rho /= batches;
    if (batches > 1) {
        double ss = 0;
        for (const double r : rhos) ss += (r - out.mean_rho) * (r - out.mean_rho);
        out.std_rho = std::sqrt(ss / (batches - 1));
    }
    return out;
}

struct MetricsReport {
    PointwiseMetrics pointwise;
    MaskedMetrics masked;
    DerivativeMetrics derivative;
};

inline MetricsReport evaluate_pair(const Matrix& pred, const Matrix& truth, const Layout& layout,
                                   const CaseConfig& config, const Catalog& catalog) {
    return {pointwise_metrics(pred, truth), masked_metrics(pred, truth, layout, config, catalog),
            derivative_metrics(pred, truth, layout.grid)};
}

}
