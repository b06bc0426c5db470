#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "hsld/gibls.hpp"
#include "hsld/seqls.hpp"
#include "oracle_helpers.hpp"

using namespace hsld;

namespace {

// Brute-force: which coordinates v along `axis` keep `id` feasible, holding
// every other placement fixed?
std::set<int> scan_axis(const Layout& layout, int id, Axis axis, const Catalog& catalog) {
    std::set<int> ok;
    const auto he = catalog.half_extents(id);
    const int n = layout.grid.cells_per_side;
    const int lo = axis == Axis::x ? he.a : he.b;
    const int hi = axis == Axis::x ? n - he.a : n - he.b;
    for (int v = lo; v <= hi; ++v) {
        Placement cand;
        for (const auto& p : layout.placements)
            if (p.component_id == id) cand = p;
        (axis == Axis::x ? cand.cx : cand.cy) = v;
        bool feasible = fits_container(cand, catalog, layout.grid);
        for (const auto& p : layout.placements)
            if (p.component_id != id && overlaps(cand, p, catalog)) feasible = false;
        if (feasible) ok.insert(v);
    }
    return ok;
}

Layout make_layout(std::vector<Placement> ps) { return Layout{std::move(ps), GridSystem{}}; }

}  // namespace

TEST_CASE("feasible segments: lone component spans the container band") {
    const auto catalog = Catalog::builtin();
    const auto layout = make_layout({{12, 100, 100}});
    const auto segs = feasible_segments(layout, 12, Axis::x, catalog, layout.grid);
    REQUIRE(segs.segments == std::vector<std::pair<int, int>>{{24, 176}});
    REQUIRE(segs.total_nodes() == 153);
}

TEST_CASE("feasible segments: a blocker splits the band") {
    const auto catalog = Catalog::builtin();
    // component 2 (12x6 cells) scanning x, component 12 (48x48) parked at (100,100):
    // |dy| = 0 < 3+24, so x in (64,136) is blocked
    const auto layout = make_layout({{12, 100, 100}, {2, 30, 100}});
    const auto segs = feasible_segments(layout, 2, Axis::x, catalog, layout.grid);
    REQUIRE(segs.segments == std::vector<std::pair<int, int>>{{12, 64}, {136, 188}});
    REQUIRE(segs.total_nodes() == 53 + 53);
    REQUIRE(segs.contains(64));
    REQUIRE_FALSE(segs.contains(65));
    REQUIRE_FALSE(segs.contains(135));
    REQUIRE(segs.contains(136));
    REQUIRE(segs.kth(0) == 12);
    REQUIRE(segs.kth(52) == 64);
    REQUIRE(segs.kth(53) == 136);
    REQUIRE(segs.kth(105) == 188);
}

TEST_CASE("feasible segments: enough orthogonal separation blocks nothing") {
    const auto catalog = Catalog::builtin();
    // |dy| = 60 >= 3+24: component 12 is invisible to the x-scan of component 2
    const auto layout = make_layout({{12, 100, 100}, {2, 30, 160}});
    const auto segs = feasible_segments(layout, 2, Axis::x, catalog, layout.grid);
    REQUIRE(segs.segments == std::vector<std::pair<int, int>>{{12, 188}});
    REQUIRE(segs.total_nodes() == 177);
}

TEST_CASE("feasible segments agree with a per-node scan on random states") {
    const auto catalog = Catalog::builtin();
    const GridSystem grid;
    Rng rng(404);
    for (int trial = 0; trial < 30; ++trial) {
        auto init = seqls_sample(catalog, grid, SeqLSConfig{}, rng);
        REQUIRE(init.layout.has_value());
        GibLSConfig config;
        config.burn_in = (int)rng.below(20);
        config.interval = 1 + (int)rng.below(4);
        config.chain_length = 1 + (int)rng.below(3);
        config.initial_layout = *init.layout;
        Rng chain_rng(derive_seed(9, "chain", (std::uint64_t)trial));
        const auto states = gibls_chain(catalog, grid, config, chain_rng);
        for (const auto& layout : states) {
            const int id = 1 + (int)rng.below(12);
            const Axis axis = rng.below(2) ? Axis::y : Axis::x;
            const auto segs = feasible_segments(layout, id, axis, catalog, grid);
            const auto brute = scan_axis(layout, id, axis, catalog);
            REQUIRE(segs.total_nodes() == (int)brute.size());
            int k = 0;
            for (const int v : brute) REQUIRE(segs.kth(k++) == v);
            for (int v = 0; v <= grid.cells_per_side; ++v)
                REQUIRE(segs.contains(v) == brute.contains(v));
        }
    }
}

TEST_CASE("chain iteration accounting and save cadence") {
    const auto catalog = Catalog::builtin();
    const GridSystem grid;
    Rng init_rng(7);
    auto init = seqls_sample(catalog, grid, SeqLSConfig{}, init_rng);
    GibLSConfig config;
    config.burn_in = 3;
    config.interval = 2;
    config.chain_length = 4;
    config.initial_layout = *init.layout;
    Rng rng(11);
    GibLSStats stats;
    const auto states = gibls_chain(catalog, grid, config, rng, &stats);
    REQUIRE(states.size() == 4);
    REQUIRE(stats.iterations == 3 + 1 + 3 * 2);  // B + 1 + (n-1)*I
    for (const auto& layout : states) {
        REQUIRE(layout.placements.size() == 12);
        REQUIRE(oracle::check_layout(layout, catalog).empty());
    }
}

TEST_CASE("every saved state is feasible over a long chain") {
    const auto catalog = Catalog::builtin();
    const GridSystem grid;
    Rng init_rng(55);
    auto init = seqls_sample(catalog, grid, SeqLSConfig{}, init_rng);
    GibLSConfig config;
    config.chain_length = 800;
    config.initial_layout = *init.layout;
    Rng rng(56);
    const auto states = gibls_chain(catalog, grid, config, rng);
    REQUIRE(states.size() == 800);
    int violations = 0;
    for (const auto& layout : states)
        violations += (int)oracle::check_layout(layout, catalog).size();
    REQUIRE(violations == 0);
    // the chain moves: consecutive saved states should not all be identical
    int moved = 0;
    for (size_t i = 1; i < states.size(); ++i)
        moved += states[i].placements != states[i - 1].placements;
    REQUIRE(moved > 700);
}

TEST_CASE("chains are deterministic in the seed") {
    const auto catalog = Catalog::builtin();
    const GridSystem grid;
    Rng init_rng(13);
    auto init = seqls_sample(catalog, grid, SeqLSConfig{}, init_rng);
    GibLSConfig config;
    config.chain_length = 20;
    config.initial_layout = *init.layout;
    Rng a(99), b(99), c(100);
    const auto run_a = gibls_chain(catalog, grid, config, a);
    const auto run_b = gibls_chain(catalog, grid, config, b);
    const auto run_c = gibls_chain(catalog, grid, config, c);
    for (int i = 0; i < 20; ++i) REQUIRE(run_a[i].placements == run_b[i].placements);
    bool any_diff = false;
    for (int i = 0; i < 20; ++i) any_diff = any_diff || run_a[i].placements != run_c[i].placements;
    REQUIRE(any_diff);
}

TEST_CASE("invalid configuration and initial states are rejected") {
    const auto catalog = Catalog::builtin();
    const GridSystem grid;
    Rng rng(1);
    GibLSConfig config;  // no initial layout
    REQUIRE_THROWS_AS(gibls_chain(catalog, grid, config, rng), DomainError);

    config.initial_layout = make_layout({{12, 100, 100}});  // missing 11 components
    REQUIRE_THROWS_AS(gibls_chain(catalog, grid, config, rng), DomainError);

    config.initial_layout = make_layout({{12, 100, 100}, {5, 100, 100}});  // overlapping
    REQUIRE_THROWS_AS(gibls_chain(catalog, grid, config, rng), DomainError);

    Rng init_rng(2);
    config.initial_layout = *seqls_sample(catalog, grid, SeqLSConfig{}, init_rng).layout;
    config.burn_in = -1;
    REQUIRE_THROWS_AS(gibls_chain(catalog, grid, config, rng), DomainError);
    config.burn_in = 0;
    config.interval = 0;
    REQUIRE_THROWS_AS(gibls_chain(catalog, grid, config, rng), DomainError);
    config.interval = 1;
    config.chain_length = 0;
    REQUIRE_THROWS_AS(gibls_chain(catalog, grid, config, rng), DomainError);
}

TEST_CASE("long-run marginals stay close to direct sampling") {
    // Binned positions of the largest component: chain counts within 3x the
    // direct-sampler counts, bin by bin (10x10 over the admissible square).
    const auto catalog = Catalog::builtin();
    const GridSystem grid;
    const int samples = 10000;

    const auto direct = seqls_batch(samples, catalog, grid, SeqLSConfig{}, 606);

    Rng init_rng(derive_seed(606, "chain-init", 0));
    auto init = seqls_sample(catalog, grid, SeqLSConfig{}, init_rng);
    GibLSConfig config;
    config.chain_length = samples;
    config.initial_layout = *init.layout;
    Rng chain_rng(derive_seed(606, "chain", 0));
    const auto chain = gibls_chain(catalog, grid, config, chain_rng);

    const auto bin_counts = [&](const std::vector<Layout>& layouts) {
        std::vector<int> counts(100, 0);
        for (const auto& layout : layouts)
            for (const auto& p : layout.placements)
                if (p.component_id == 12) {
                    const int bx = std::min(9, (p.cx - 24) * 10 / 153);
                    const int by = std::min(9, (p.cy - 24) * 10 / 153);
                    ++counts[by * 10 + bx];
                }
        return counts;
    };
    const auto s = bin_counts(direct.layouts);
    const auto g = bin_counts(chain);
    for (int i = 0; i < 100; ++i) {
        INFO("bin " << i << ": chain " << g[i] << " direct " << s[i]);
        REQUIRE(std::abs(g[i] - s[i]) <= 3 * s[i]);
    }
}
