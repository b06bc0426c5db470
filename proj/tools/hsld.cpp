// hsld: layout sampling, temperature ground truth, dataset assembly, and
// prediction scoring for the heat-source layout benchmark.
//
// Exit codes: 0 success, 1 domain error (infeasible sampling, solver failure,
// bad files), 2 usage error.  All stochastic subcommands require --seed and
// are pure functions of their flags; HSLD_THREADS caps parallelism.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hsld/hsld.hpp"

namespace fs = std::filesystem;
using namespace hsld;

namespace {

struct SampleArgs {
    int n = 1;
    std::uint64_t seed = 0;
    std::string out;
    std::string window;
    int max_restarts = 10000;
    int burn_in = 100;
    int interval = 5;
    std::string init;
    std::string kind;
    int jitter = 10;
};

Window parse_window(const std::string& text, int n_cells) {
    Window w;
    if (std::sscanf(text.c_str(), "%d,%d,%d,%d", &w.x_min, &w.x_max, &w.y_min, &w.y_max) != 4)
        throw CLI::ValidationError("--window", "expected x0,x1,y0,y1");
    w.validate(n_cells);
    return w;
}

void write_layouts(const std::vector<Layout>& layouts, const fs::path& dir) {
    fs::create_directories(dir);
    for (std::size_t i = 0; i < layouts.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "%06zu.json", i);
        save_layout(layouts[i], dir / name);
    }
}

void run_sample_seqls(const SampleArgs& args) {
    const GridSystem grid;
    const auto catalog = Catalog::builtin(grid);
    SeqLSConfig config;
    config.max_restarts = args.max_restarts;
    if (!args.window.empty()) config.window = parse_window(args.window, grid.cells_per_side);
    auto batch = seqls_batch(args.n, catalog, grid, config, args.seed);
    write_layouts(batch.layouts, args.out);
    nlohmann::ordered_json summary;
    summary["n"] = args.n;
    summary["attempts"] = batch.attempts;
    summary["success_rate"] = (double)args.n / (double)batch.attempts;
    write_text_file(fs::path(args.out) / "summary.json", summary.dump(2) + "\n");
    std::cerr << "wrote " << args.n << " layouts (" << batch.attempts << " attempts) to "
              << args.out << "\n";
}

void run_sample_gibls(const SampleArgs& args) {
    const GridSystem grid;
    const auto catalog = Catalog::builtin(grid);
    GibLSConfig config;
    config.burn_in = args.burn_in;
    config.interval = args.interval;
    config.chain_length = args.n;
    if (!args.init.empty()) {
        config.initial_layout = load_layout(args.init);
    } else {
        Rng init_rng(derive_seed(args.seed, "gibls-init", 0));
        auto init = seqls_sample(catalog, grid, SeqLSConfig{}, init_rng);
        if (!init.layout) throw DomainError("gibls: initial draw failed");
        config.initial_layout = *init.layout;
    }
    Rng rng(derive_seed(args.seed, "gibls-chain", 0));
    auto layouts = gibls_chain(catalog, grid, config, rng);
    write_layouts(layouts, args.out);
    std::cerr << "wrote " << layouts.size() << " layouts to " << args.out << "\n";
}

void run_sample_special(const SampleArgs& args) {
    const GridSystem grid;
    const auto catalog = Catalog::builtin(grid);
    const int n_cells = grid.cells_per_side;
    std::vector<Layout> layouts((std::size_t)args.n, Layout{{}, grid});

    const auto kind = args.kind;
    auto for_each = [&](auto&& fn) {
        parallel_for(0, args.n, [&](std::int64_t i) {
            Rng rng(derive_seed(args.seed, "special-" + kind, (std::uint64_t)i));
            layouts[i] = fn((int)i, rng);
        });
    };

    if (kind == "corner") {
        for_each([&](int, Rng& rng) { return corner_sample(catalog, grid, rng, args.jitter); });
    } else if (kind.rfind("group:", 0) == 0) {
        const auto& group = group_by_name(kind.substr(6));
        for_each([&](int, Rng& rng) { return group_sample(group, catalog, grid, rng); });
    } else if (kind.rfind("half-x:", 0) == 0 || kind.rfind("half-y:", 0) == 0) {
        const int off = std::stoi(kind.substr(7));
        const int width = n_cells / 2;
        const bool horizontal = kind[5] == 'x';
        if (off < 0 || off + width > n_cells)
            throw DomainError("half window offset out of range");
        const Window window = horizontal ? Window{off, off + width, 0, n_cells}
                                         : Window{0, n_cells, off, off + width};
        for_each([&](int, Rng& rng) {
            auto r = part_space_sample(window, catalog, grid, rng);
            if (!r.layout) throw DomainError("part-space sampling failed");
            return *r.layout;
        });
    } else if (kind.rfind("square:", 0) == 0) {
        const int side = std::stoi(kind.substr(7));
        for_each([&](int, Rng& rng) { return square_sample(side, catalog, grid, rng).layout; });
    } else {
        throw CLI::ValidationError(
            "--kind", "expected corner|group:NAME|half-x:OFF|half-y:OFF|square:SIDE");
    }
    write_layouts(layouts, args.out);
    std::cerr << "wrote " << layouts.size() << " layouts to " << args.out << "\n";
}

struct SolveArgs {
    int case_id = 1;
    std::string layout;
    std::string layout_dir;
    std::string out;
    double tol = 1e-8;
    std::string solver = "iterative";
    double conductivity = 1.0;
    double t0 = 298.0;
    std::string dirichlet_side = "left";
    double sink_width = 0.001;
};

CaseConfig case_from_args(const SolveArgs& args) {
    auto config = CaseConfig::for_case(args.case_id);
    config.conductivity = args.conductivity;
    config.t0 = args.t0;
    config.sink_width_m = args.sink_width;
    if (args.dirichlet_side == "left") config.dirichlet_side = Side::left;
    else if (args.dirichlet_side == "right") config.dirichlet_side = Side::right;
    else if (args.dirichlet_side == "top") config.dirichlet_side = Side::top;
    else if (args.dirichlet_side == "bottom") config.dirichlet_side = Side::bottom;
    else throw CLI::ValidationError("--dirichlet-side", "expected left|right|top|bottom");
    return config;
}

void run_solve(const SolveArgs& args) {
    SolveSettings settings;
    settings.relative_residual_tolerance = args.tol;
    if (args.solver == "direct") settings.solver_kind = SolverKind::direct;
    else if (args.solver != "iterative")
        throw CLI::ValidationError("--solver", "expected iterative|direct");
    const auto config = case_from_args(args);

    if (!args.layout.empty()) {
        const auto layout = load_layout(args.layout);
        const auto catalog = Catalog::builtin(layout.grid);
        const auto field = solve(rasterize(layout, catalog, layout.grid), config, layout.grid,
                                 settings);
        write_matrix_file(field, args.out);
        return;
    }
    // Batch mode: every layout file in the directory, field written next to
    // the same stem under --out.
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(args.layout_dir)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".json" || ext == ".csv") &&
            entry.path().filename() != "summary.json")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DomainError("no layout files in " + args.layout_dir);
    fs::create_directories(args.out);
    const GridSystem grid = load_layout(files.front()).grid;
    const auto catalog = Catalog::builtin(grid);
    parallel_for_ctx(
        0, (std::int64_t)files.size(), [&] { return PoissonSolver(config, grid, settings); },
        [&](PoissonSolver& solver, std::int64_t i) {
            const auto layout = load_layout(files[i]);
            const auto field = solver.solve(rasterize(layout, catalog, grid));
            write_matrix_file(field, fs::path(args.out) / (files[i].stem().string() + ".hsld"));
        });
    std::cerr << "solved " << files.size() << " layouts into " << args.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heat-source layout benchmark toolkit"};
    app.set_version_flag("--version", std::string("hsld ") + version_string);
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "draw feasible layouts");
    sample->require_subcommand(1);
    SampleArgs sa;

    auto* seqls_cmd = sample->add_subcommand("seqls", "sequential placement sampler");
    seqls_cmd->add_option("--n", sa.n, "number of layouts")->check(CLI::PositiveNumber);
    seqls_cmd->add_option("--seed", sa.seed, "base seed")->required();
    seqls_cmd->add_option("--window", sa.window, "center window x0,x1,y0,y1");
    seqls_cmd->add_option("--max-restarts", sa.max_restarts, "attempts before failure")
        ->check(CLI::PositiveNumber);
    seqls_cmd->add_option("--out", sa.out, "output directory")->required();

    auto* gibls_cmd = sample->add_subcommand("gibls", "Gibbs chain sampler");
    gibls_cmd->add_option("--n", sa.n, "number of saved layouts")->check(CLI::PositiveNumber);
    gibls_cmd->add_option("--seed", sa.seed, "base seed")->required();
    gibls_cmd->add_option("--burn-in", sa.burn_in, "discarded iterations")
        ->check(CLI::NonNegativeNumber);
    gibls_cmd->add_option("--interval", sa.interval, "iterations between saves")
        ->check(CLI::PositiveNumber);
    gibls_cmd->add_option("--init", sa.init, "initial layout file (default: one seqls draw)");
    gibls_cmd->add_option("--out", sa.out, "output directory")->required();

    auto* special_cmd = sample->add_subcommand("special", "corner/group/part-space families");
    special_cmd
        ->add_option("--kind", sa.kind, "corner | group:G1..G4 | half-x:OFF | half-y:OFF | square:SIDE")
        ->required();
    special_cmd->add_option("--n", sa.n, "number of layouts")->check(CLI::PositiveNumber);
    special_cmd->add_option("--seed", sa.seed, "base seed")->required();
    special_cmd->add_option("--jitter", sa.jitter, "corner jitter in cells")
        ->check(CLI::NonNegativeNumber);
    special_cmd->add_option("--out", sa.out, "output directory")->required();

    // solve
    SolveArgs so;
    auto* solve_cmd = app.add_subcommand("solve", "compute temperature fields");
    solve_cmd->add_option("--case", so.case_id, "boundary case 1|2|3")
        ->required()
        ->check(CLI::Range(1, 3));
    auto* lay_opt = solve_cmd->add_option("--layout", so.layout, "one layout file");
    auto* dir_opt = solve_cmd->add_option("--layout-dir", so.layout_dir, "directory of layouts");
    lay_opt->excludes(dir_opt);
    dir_opt->excludes(lay_opt);
    solve_cmd->add_option("--out", so.out, "output field file or directory")->required();
    solve_cmd->add_option("--tol", so.tol, "relative residual tolerance")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--solver", so.solver, "iterative|direct");
    solve_cmd->add_option("--k", so.conductivity, "thermal conductivity W/(m K)")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--t0", so.t0, "boundary temperature K");
    solve_cmd->add_option("--dirichlet-side", so.dirichlet_side, "case 2 side");
    solve_cmd->add_option("--sink-width", so.sink_width, "case 3 sink width m")
        ->check(CLI::PositiveNumber);

    // dataset
    struct {
        int case_id = 1;
        std::uint64_t seed = 0;
        std::string out;
        std::string composition;
        std::string solver = "direct";
        double tol = 1e-8;
    } da;
    auto* dataset_cmd = app.add_subcommand("dataset", "assemble a benchmark dataset");
    dataset_cmd->add_option("--case", da.case_id, "boundary case 1|2|3")
        ->required()
        ->check(CLI::Range(1, 3));
    dataset_cmd->add_option("--seed", da.seed, "base seed")->required();
    dataset_cmd->add_option("--out", da.out, "output directory")->required();
    dataset_cmd->add_option("--composition", da.composition,
                            "JSON file {\"split\": count}; omitted splits get 0");
    dataset_cmd->add_option("--solver", da.solver, "iterative|direct");
    dataset_cmd->add_option("--tol", da.tol, "relative residual tolerance")
        ->check(CLI::PositiveNumber);

    // evaluate
    struct {
        std::string truth, pred, manifest, out;
        int case_id = 1;
        int batch = 100;
    } ev;
    auto* eval_cmd = app.add_subcommand("evaluate", "score predictions against truth");
    eval_cmd->add_option("--truth", ev.truth, "truth root directory")->required();
    eval_cmd->add_option("--pred", ev.pred, "prediction root directory")->required();
    eval_cmd->add_option("--manifest", ev.manifest, "split manifest.json")->required();
    eval_cmd->add_option("--case", ev.case_id, "boundary case 1|2|3")
        ->required()
        ->check(CLI::Range(1, 3));
    eval_cmd->add_option("--out", ev.out, "report JSON path")->required();
    eval_cmd->add_option("--batch-size", ev.batch, "rank-correlation batch size")
        ->check(CLI::Range(2, 1000000));

    // render
    struct {
        std::string in, out;
    } re;
    auto* render_cmd = app.add_subcommand("render", "render a field to a PPM heatmap");
    render_cmd->add_option("--in", re.in, "field .hsld file")->required();
    render_cmd->add_option("--out", re.out, "output .ppm path")->required();

    // oracle
    struct {
        std::string truth, out;
        double sigma = 0.5;
        std::uint64_t seed = 0;
    } orc;
    auto* oracle_cmd = app.add_subcommand("oracle", "noisy stand-in predictor");
    oracle_cmd->add_option("--truth", orc.truth, "truth root directory")->required();
    oracle_cmd->add_option("--sigma", orc.sigma, "noise standard deviation K")
        ->check(CLI::NonNegativeNumber);
    oracle_cmd->add_option("--seed", orc.seed, "base seed")->required();
    oracle_cmd->add_option("--out", orc.out, "prediction root directory")->required();

    try {
        app.parse(argc, argv);

        if (seqls_cmd->parsed()) run_sample_seqls(sa);
        else if (gibls_cmd->parsed()) run_sample_gibls(sa);
        else if (special_cmd->parsed()) run_sample_special(sa);
        else if (solve_cmd->parsed()) {
            if (so.layout.empty() == so.layout_dir.empty())
                throw CLI::RequiredError("exactly one of --layout / --layout-dir");
            run_solve(so);
        } else if (dataset_cmd->parsed()) {
            auto composition = da.composition.empty()
                                   ? Composition::defaults()
                                   : Composition::from_json_text(read_text_file(da.composition));
            AssembleOptions options;
            options.progress = true;
            options.settings.relative_residual_tolerance = da.tol;
            if (da.solver == "iterative") options.settings.solver_kind = SolverKind::iterative;
            else if (da.solver != "direct")
                throw CLI::ValidationError("--solver", "expected iterative|direct");
            auto summary = assemble_dataset(da.case_id, composition, da.seed, da.out, options);
            std::cerr << "dataset complete: " << summary.out_dir.string() << "\n";
        } else if (eval_cmd->parsed()) {
            const auto report = evaluate_dataset(ev.truth, ev.pred, ev.manifest, ev.case_id,
                                                 ev.batch);
            write_text_file(ev.out, report.dump(2) + "\n");
        } else if (render_cmd->parsed()) {
            render_heatmap_file(read_matrix_file(re.in), re.out);
        } else if (oracle_cmd->parsed()) {
            const int n = noisy_oracle_predict(orc.truth, orc.sigma, orc.seed, orc.out);
            std::cerr << "wrote " << n << " predictions to " << orc.out << "\n";
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help/version or the usage error
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
