#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "errors.hpp"
#include "field.hpp"
#include "geometry.hpp"

namespace hsld {

// Steady heat conduction k*lap(T) + phi = 0 on the square domain, discretized
// with the cell-centered 5-point scheme and ghost-cell boundary conditions:
//   Dirichlet face: ghost = 2*T0 - T_P   (face value pinned to T0)
//   Neumann face:   ghost = T_P          (zero flux through the face)
// Three cases: (1) T0 on all four sides, (2) T0 on one side and zero flux on
// the rest, (3) T0 only on a delta-wide sink at the middle of the bottom
// side, zero flux elsewhere.

enum class Side { left, right, top, bottom };

struct CaseConfig {
    int case_id = 1;
    double conductivity = 1.0;  // k, W/(m K)
    double t0 = 298.0;          // boundary temperature, K
    Side dirichlet_side = Side::left;  // case 2 only
    double sink_width_m = 0.001;       // case 3 only

    static CaseConfig for_case(int id) {
        if (id < 1 || id > 3) throw DomainError("case_id must be 1, 2 or 3");
        CaseConfig c;
        c.case_id = id;
        return c;
    }
};

enum class SolverKind { iterative, direct };

struct SolveSettings {
    double relative_residual_tolerance = 1e-8;
    long max_iterations = 0;  // 0: picked from the grid size
    SolverKind solver_kind = SolverKind::iterative;
};

class PoissonSolver {
public:
    PoissonSolver(const CaseConfig& config, const GridSystem& grid, SolveSettings settings = {})
        : case_(config), grid_(grid), settings_(settings) {
        if (case_.case_id < 1 || case_.case_id > 3)
            throw DomainError("case_id must be 1, 2 or 3");
        if (!(case_.conductivity > 0)) throw DomainError("conductivity must be positive");
        if (!(settings_.relative_residual_tolerance > 0))
            throw DomainError("residual tolerance must be positive");
        build_structure();
    }

    const CaseConfig& case_config() const { return case_; }
    const GridSystem& grid() const { return grid_; }

    // Solves for the temperature field of one source matrix.  The linear
    // system is scaled by h^2/k, so the right-hand side is h^2*phi/k and the
    // residual contract ||b - A u|| <= tol * ||b|| is checked on that scale.
    TemperatureField solve(const IntensityField& phi) {
        const int n = grid_.cells_per_side;
        if ((int)phi.rows() != n || (int)phi.cols() != n)
            throw DomainError("solve: field shape does not match the grid");
        const double scale = grid_.cell_size_m * grid_.cell_size_m / case_.conductivity;
        std::vector<double> b(cells_);
        double b_norm2 = 0;
        for (int i = 0; i < cells_; ++i) {
            const double v = phi.data()[i];
            if (!std::isfinite(v)) throw DomainError("solve: source has non-finite values");
            b[i] = v * scale;
            b_norm2 += b[i] * b[i];
        }
        TemperatureField out(n, n, case_.t0);
        if (b_norm2 == 0) return out;  // T == T0 solves the zero-source problem exactly

        std::vector<double> u(cells_, 0.0);
        if (settings_.solver_kind == SolverKind::direct)
            solve_direct(b, u);
        else
            solve_cg(b, std::sqrt(b_norm2), u);

        // Residual contract, independent of the backend.
        std::vector<double> r(cells_);
        apply(u, r);
        double r_norm2 = 0;
        for (int i = 0; i < cells_; ++i) {
            r[i] = b[i] - r[i];
            r_norm2 += r[i] * r[i];
        }
        if (std::sqrt(r_norm2) >
            settings_.relative_residual_tolerance * std::sqrt(b_norm2) * (1 + 1e-12))
            throw DomainError("solve: residual contract violated");

        for (int i = 0; i < cells_; ++i) out.data()[i] += u[i];
        return out;
    }

    // y = A x with the scaled operator: diag(P) = #structural neighbors +
    // 2 * #Dirichlet faces, off-diagonals -1 toward each structural neighbor.
    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        const int n = grid_.cells_per_side;
        for (int r = 0; r < n; ++r) {
            const int row = r * n;
            for (int c = 0; c < n; ++c) {
                const int i = row + c;
                double acc = diag_[i] * x[i];
                if (c > 0) acc -= x[i - 1];
                if (c < n - 1) acc -= x[i + 1];
                if (r > 0) acc -= x[i - n];
                if (r < n - 1) acc -= x[i + n];
                y[i] = acc;
            }
        }
    }

private:
    void build_structure() {
        const int n = grid_.cells_per_side;
        cells_ = n * n;
        diag_.assign(cells_, 0.0);

        std::vector<char> sink;
        if (case_.case_id == 3) sink = sink_columns();

        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                int structural = (c > 0) + (c < n - 1) + (r > 0) + (r < n - 1);
                int dirichlet = 0;
                if (c == 0) dirichlet += face_is_dirichlet(Side::left, c, sink);
                if (c == n - 1) dirichlet += face_is_dirichlet(Side::right, c, sink);
                if (r == 0) dirichlet += face_is_dirichlet(Side::bottom, c, sink);
                if (r == n - 1) dirichlet += face_is_dirichlet(Side::top, c, sink);
                diag_[r * n + c] = structural + 2 * dirichlet;
            }
    }

    bool face_is_dirichlet(Side face, int column, const std::vector<char>& sink) const {
        switch (case_.case_id) {
            case 1: return true;
            case 2: return face == case_.dirichlet_side;
            default: return face == Side::bottom && sink[column];
        }
    }

    // Case 3: bottom-row cells whose centers fall in the closed interval
    // [L/2 - delta/2, L/2 + delta/2].  The sink must align with whole cells:
    // delta an even multiple of h, giving delta/h cells symmetric about L/2.
    std::vector<char> sink_columns() const {
        const int n = grid_.cells_per_side;
        const double h = grid_.cell_size_m;
        const double half_cells = case_.sink_width_m / (2 * h);
        const double even_check = std::abs(half_cells - std::lround(half_cells));
        if (!(case_.sink_width_m > 0) || std::lround(half_cells) < 1 || even_check > 1e-9)
            throw DomainError("sink width must be a positive even multiple of the cell size");
        const double lo = n / 2.0 - half_cells, hi = n / 2.0 + half_cells;
        std::vector<char> mask(n, 0);
        int count = 0;
        for (int c = 0; c < n; ++c) {
            const double center = c + 0.5;
            if (center >= lo - 1e-9 && center <= hi + 1e-9) mask[c] = 1, ++count;
        }
        if (count == 0) throw DomainError("sink covers no cell");
        return mask;
    }

    void solve_cg(const std::vector<double>& b, double b_norm, std::vector<double>& x) const {
        const long max_iter = settings_.max_iterations > 0
                                  ? settings_.max_iterations
                                  : std::max(20000L, 200L * grid_.cells_per_side);
        const double target = settings_.relative_residual_tolerance * b_norm;

        std::vector<double> r = b, z(cells_), p(cells_), ap(cells_);
        auto precond = [&] {  // Jacobi
            for (int i = 0; i < cells_; ++i) z[i] = r[i] / diag_[i];
        };
        auto dot = [&](const std::vector<double>& a, const std::vector<double>& c) {
            double s = 0;
            for (int i = 0; i < cells_; ++i) s += a[i] * c[i];
            return s;
        };

        precond();
        p = z;
        double rz = dot(r, z);
        long iter = 0;
        while (iter < max_iter) {
            // Recurrence residual check, then a true-residual confirmation.
            double r_norm2 = dot(r, r);
            if (std::sqrt(r_norm2) <= target) {
                apply(x, ap);
                double true_norm2 = 0;
                for (int i = 0; i < cells_; ++i) {
                    r[i] = b[i] - ap[i];
                    true_norm2 += r[i] * r[i];
                }
                if (std::sqrt(true_norm2) <= target) return;
                precond();  // restart from the true residual
                p = z;
                rz = dot(r, z);
            }
            apply(p, ap);
            const double alpha = rz / dot(p, ap);
            for (int i = 0; i < cells_; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            precond();
            const double rz_new = dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (int i = 0; i < cells_; ++i) p[i] = z[i] + beta * p[i];
            ++iter;
        }
        throw DomainError("solve: conjugate gradients did not converge in " +
                          std::to_string(max_iter) + " iterations");
    }

    void solve_direct(const std::vector<double>& b, std::vector<double>& x) {
        if (!factored_) {
            const int n = grid_.cells_per_side;
            std::vector<Eigen::Triplet<double>> trip;
            trip.reserve((std::size_t)cells_ * 5);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    const int i = r * n + c;
                    trip.emplace_back(i, i, diag_[i]);
                    if (c > 0) trip.emplace_back(i, i - 1, -1.0);
                    if (c < n - 1) trip.emplace_back(i, i + 1, -1.0);
                    if (r > 0) trip.emplace_back(i, i - n, -1.0);
                    if (r < n - 1) trip.emplace_back(i, i + n, -1.0);
                }
            Eigen::SparseMatrix<double> a(cells_, cells_);
            a.setFromTriplets(trip.begin(), trip.end());
            ldlt_.compute(a);
            if (ldlt_.info() != Eigen::Success)
                throw DomainError("solve: sparse factorization failed");
            factored_ = true;
        }
        Eigen::Map<const Eigen::VectorXd> bv(b.data(), cells_);
        Eigen::VectorXd xv = ldlt_.solve(bv);
        if (ldlt_.info() != Eigen::Success) throw DomainError("solve: back-substitution failed");
        for (int i = 0; i < cells_; ++i) x[i] = xv[i];
    }

    CaseConfig case_;
    GridSystem grid_;
    SolveSettings settings_;
    int cells_ = 0;
    std::vector<double> diag_;
    bool factored_ = false;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

inline TemperatureField solve(const IntensityField& phi, const CaseConfig& config,
                              const GridSystem& grid, SolveSettings settings = {}) {
    PoissonSolver solver(config, grid, settings);
    return solver.solve(phi);
}

// --- Method of manufactured solutions ------------------------------------

// temperature(x, y, L) is the exact field; source(x, y, L, k) = -k * lap(T).
// Each solution satisfies the boundary pattern of its case exactly, so the
// only error left is discretization error.
struct ManufacturedSolution {
    std::string id;
    int case_id = 1;
    std::function<double(double, double, double)> temperature;
    std::function<double(double, double, double, double)> source;
};

inline ManufacturedSolution manufactured_solution(const std::string& id) {
    constexpr double pi = 3.14159265358979323846;
    if (id == "constant")
        return {id, 1, [](double, double, double) { return 298.0; },
                [](double, double, double, double) { return 0.0; }};
    if (id == "case1_sine")
        // T0 on all four sides.
        return {id, 1,
                [=](double x, double y, double L) {
                    return 298.0 + std::sin(pi * x / L) * std::sin(pi * y / L);
                },
                [=](double x, double y, double L, double k) {
                    return 2 * k * (pi / L) * (pi / L) * std::sin(pi * x / L) *
                           std::sin(pi * y / L);
                }};
    if (id == "case2_mixed")
        // T0 at x = 0; zero normal derivative at x = L, y = 0 and y = L.
        return {id, 2,
                [=](double x, double y, double L) {
                    return 298.0 + std::sin(pi * x / (2 * L)) * std::cos(pi * y / L);
                },
                [=](double x, double y, double L, double k) {
                    const double c = (pi / (2 * L)) * (pi / (2 * L)) + (pi / L) * (pi / L);
                    return k * c * std::sin(pi * x / (2 * L)) * std::cos(pi * y / L);
                }};
    throw DomainError("unknown manufactured solution " + id);
}

struct ConvergenceStudy {
    std::vector<int> grid_sizes;
    std::vector<double> linf_errors;
    std::vector<double> observed_orders;  // between consecutive grids
};

// L-infinity error against the exact field at cell centers, per grid, plus
// observed orders log(e_i/e_j)/log(N_j/N_i) between consecutive grids.
inline ConvergenceStudy convergence_study(const std::string& manufactured_id,
                                          const std::vector<int>& grid_sizes,
                                          double side_length_m = 0.1,
                                          SolveSettings settings = {}) {
    const auto ms = manufactured_solution(manufactured_id);
    ConvergenceStudy study;
    study.grid_sizes = grid_sizes;
    for (const int n : grid_sizes) {
        const auto grid = GridSystem::square(side_length_m, n);
        const auto config = CaseConfig::for_case(ms.case_id);
        IntensityField phi(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                phi(r, c) = ms.source((c + 0.5) * grid.cell_size_m, (r + 0.5) * grid.cell_size_m,
                                      side_length_m, config.conductivity);
        const auto field = solve(phi, config, grid, settings);
        double err = 0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                err = std::max(err, std::abs(field(r, c) -
                                             ms.temperature((c + 0.5) * grid.cell_size_m,
                                                            (r + 0.5) * grid.cell_size_m,
                                                            side_length_m)));
        study.linf_errors.push_back(err);
    }
    for (std::size_t i = 0; i + 1 < grid_sizes.size(); ++i) {
        const double ratio = (double)grid_sizes[i + 1] / grid_sizes[i];
        study.observed_orders.push_back(
            std::log(study.linf_errors[i] / study.linf_errors[i + 1]) / std::log(ratio));
    }
    return study;
}

}
