#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradrubin/boundary.hpp"
#include "gradrubin/current_equation.hpp"
#include "gradrubin/divcurl.hpp"
#include "gradrubin/flow_map.hpp"
#include "gradrubin/grid.hpp"
#include "gradrubin/linear_solver.hpp"
#include "gradrubin/verify.hpp"

namespace gradrubin {

struct SolverConfig {
    int nx = 64;
    int ny = 129;
    double length = 1.0;
    double tol_fixed_point = 1e-10;
    int max_iter = 100;
    double omega = 1.0;              // relaxation, b <- (1-w) b + w Gamma(b)
    double smallness_budget = 0.5;   // monitored amplitude budget for ||f|| + ||g||
    int ode_substeps = 4;
    double alpha = 0.5;              // Hoelder exponent for the monitor
    double delta0 = 0.5;             // budgets for the Lambda / theta norms
    double delta1 = 0.5;
    unsigned seed = 12345;
    int neumann_sweeps = 20;
    ResidualTolerances residual_tol;

    void validate() const {
        if (!(omega > 0.0 && omega <= 1.0)) throw std::invalid_argument("config: omega must be in (0,1]");
        if (!(tol_fixed_point > 0.0)) throw std::invalid_argument("config: tol_fixed_point must be positive");
        if (max_iter < 1) throw std::invalid_argument("config: max_iter must be >= 1");
        if (ode_substeps < 1) throw std::invalid_argument("config: ode_substeps must be >= 1");
        if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("config: alpha must be in (0,1)");
        if (!(smallness_budget > 0.0)) throw std::invalid_argument("config: smallness budget must be positive");
    }

    PeriodicGrid grid() const { return PeriodicGrid(nx, ny, length); }
};

enum class SolveStatus { converged, max_iter_reached, diverged };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iter_reached: return "max_iter";
        default: return "diverged";
    }
}

struct IterationRecord {
    int iteration = 0;
    double diff_sup = 0.0;
    double diff_c1 = 0.0;
    double contraction = 0.0; // diff_c1 ratio to the previous iteration
    double upsilon_norm = 0.0;
    double norm_lambda = 0.0;
    double norm_theta = 0.0;
};

struct IterationReport {
    SolveStatus status = SolveStatus::max_iter_reached;
    int iterations = 0;
    std::vector<IterationRecord> history;
    HolderReport holder;
    bool data_within_budget = true;
    double upsilon_norm = 0.0;
    bool upsilon_within_regime = true; // ||Upsilon|| < 1 throughout the run
    double decomposed_J = 0.0;
    double flux_cross_check = 0.0; // |J_augmented - J_decomposed|
    double loop_defect = 0.0;
    CurrentSolution::Diagnostics current_diag;
    ResidualReport residuals;
};

struct Equilibrium {
    PeriodicGrid grid{4, 8, 1.0};
    VectorField b;   // perturbation
    VectorField B;   // (0,1) + b
    ScalarField j;
    std::vector<double> j0;
    double J = 0.0;
    ScalarField psi;
    ScalarField p;
    IterationReport report;
};

// One application of the composed operator: characteristics of b, current
// equation for (j0, J), transport of j0, div-curl recovery of the new field.
struct GammaStep {
    VectorField W;
    ScalarField psi;
    ScalarField j;
    std::vector<double> j0;
    double J = 0.0;
    double decomposed_J = 0.0;
    double upsilon_norm = 0.0;
    CurrentSolution::Diagnostics diag;
    HolderReport holder;
};

namespace detail {

template <typename F>
auto staged(const char* stage, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(stage) + ": " + e.what());
    }
}

} // namespace detail

inline GammaStep gamma_step(const PeriodicGrid& grid, const VectorField& b, const BoundaryData& data,
                            const DerivedBoundary& derived, const SolverConfig& config) {
    GammaStep out;
    auto chars = detail::staged("characteristics", [&] {
        return integrate_characteristics(grid, b, config.ode_substeps);
    });
    out.holder = holder_monitor(chars, config.alpha, config.delta0, config.delta1, config.seed);

    auto ker = detail::staged("kernel", [&] { return assemble_kernel(chars, grid.nx() / 2 - 1); });

    auto cur = detail::staged("current_equation", [&] {
        auto sys = assemble_system(ker, grid, derived.g_tilde, data.f_minus);
        return solve_current(sys);
    });
    out.upsilon_norm = upsilon_matrix(ker, grid, data.f_minus).norm_inf();
    out.j0 = cur.j0;
    out.J = cur.J;
    out.diag = cur.diagnostics;
    out.diag.kernel_tail = ker.tail_magnitude;
    out.diag.upsilon_norm = out.upsilon_norm;
    out.decomposed_J = detail::staged("flux_cross_check", [&] {
        return decomposed_flux(ker, grid, derived.G, data.f_minus, out.j0);
    });

    out.j = detail::staged("transport", [&] {
        return transport_current(grid, out.j0, b, config.ode_substeps);
    });

    detail::staged("biot_savart", [&] {
        auto [W, psi] = biot_savart(grid, out.j, derived, out.J);
        out.W = std::move(W);
        out.psi = std::move(psi);
        return 0;
    });
    return out;
}

// Line integral of j x B from (0,0): along the inflow wall spectrally, then
// vertically with the 4th-order cumulative rule. The loop defect is the
// circulation of (j x B)_1 over the inflow wall, which the constraint row of
// the current solve drives to zero.
inline std::pair<ScalarField, double> reconstruct_pressure(const PeriodicGrid& grid, const VectorField& B,
                                                           const ScalarField& j) {
    const int nx = grid.nx();
    const int ny = grid.ny();

    std::vector<double> wall(nx);
    for (int k = 0; k < nx; ++k) wall[k] = -j(k, 0) * B.c2(k, 0);
    auto wall_hat = dft_forward(wall);
    const double wall_mean = wall_hat.mode(0).real();
    auto prim = antiderivative_x(wall_hat);
    auto prim_vals = dft_inverse(prim);
    const double prim0 = prim_vals[0];

    ScalarField p(grid);
    std::vector<double> col(ny);
    for (int k = 0; k < nx; ++k) {
        const double base = wall_mean * grid.x(k) + prim_vals[k] - prim0;
        for (int m = 0; m < ny; ++m) col[m] = j(k, m) * B.c1(k, m);
        auto cum = cumulative_integral(std::span<const double>(col), grid.dy());
        for (int m = 0; m < ny; ++m) p(k, m) = base + cum[m];
    }
    const double loop_defect = std::abs(two_pi * wall_mean);
    return {std::move(p), loop_defect};
}

// Same potential along the other elementary path (up the x = 0 wall first,
// then horizontally); used for the path-independence check.
inline ScalarField pressure_alternate_path(const PeriodicGrid& grid, const VectorField& B, const ScalarField& j) {
    const int nx = grid.nx();
    const int ny = grid.ny();
    std::vector<double> col(ny);
    for (int m = 0; m < ny; ++m) col[m] = j(0, m) * B.c1(0, m);
    auto vert = cumulative_integral(std::span<const double>(col), grid.dy());

    ScalarField p(grid);
    std::vector<double> row(nx);
    for (int m = 0; m < ny; ++m) {
        for (int k = 0; k < nx; ++k) row[k] = -j(k, m) * B.c2(k, m);
        auto row_hat = dft_forward(row);
        const double rmean = row_hat.mode(0).real();
        auto prim = antiderivative_x(row_hat);
        auto vals = dft_inverse(prim);
        for (int k = 0; k < nx; ++k) p(k, m) = vert[m] + rmean * grid.x(k) + vals[k] - vals[0];
    }
    return p;
}

inline Equilibrium solve(const BoundaryData& data, const SolverConfig& config) {
    config.validate();
    PeriodicGrid grid = config.grid();
    const auto derived = derive_boundary(grid, data, config.smallness_budget);

    Equilibrium eq;
    eq.grid = grid;
    eq.report.data_within_budget = derived.within_budget;

    auto lin = solve_linearized(grid, data);
    VectorField b = lin.W;

    GammaStep step;
    double prev_diff = 0.0;
    int grow_streak = 0;
    bool have_step = false;

    for (int it = 1; it <= config.max_iter; ++it) {
        step = gamma_step(grid, b, data, derived, config);
        have_step = true;

        double diff_sup = 0.0, diff_quot = 0.0;
        auto scan = [&](const ScalarField& w, const ScalarField& bc) {
            for (int m = 0; m < grid.ny(); ++m)
                for (int k = 0; k < grid.nx(); ++k) {
                    const double d = w(k, m) - bc(k, m);
                    diff_sup = std::max(diff_sup, std::abs(d));
                    const double dn = w((k + 1) % grid.nx(), m) - bc((k + 1) % grid.nx(), m);
                    diff_quot = std::max(diff_quot, std::abs(dn - d) / grid.dx());
                    if (m + 1 < grid.ny()) {
                        const double du = w(k, m + 1) - bc(k, m + 1);
                        diff_quot = std::max(diff_quot, std::abs(du - d) / grid.dy());
                    }
                }
        };
        scan(step.W.c1, b.c1);
        scan(step.W.c2, b.c2);
        const double diff_c1 = diff_sup + diff_quot;

        IterationRecord rec;
        rec.iteration = it;
        rec.diff_sup = diff_sup;
        rec.diff_c1 = diff_c1;
        rec.contraction = (it > 1 && prev_diff > 0.0) ? diff_c1 / prev_diff : 0.0;
        rec.upsilon_norm = step.upsilon_norm;
        rec.norm_lambda = step.holder.norm_lambda;
        rec.norm_theta = step.holder.norm_theta;
        eq.report.history.push_back(rec);
        eq.report.iterations = it;
        if (step.upsilon_norm >= 1.0) eq.report.upsilon_within_regime = false;

        if (diff_c1 <= config.tol_fixed_point) {
            b = step.W; // adopt the Gamma image so all fields form one exact pass
            eq.report.status = SolveStatus::converged;
            break;
        }
        if (it > 1 && diff_c1 > prev_diff) {
            if (++grow_streak >= 3) {
                eq.report.status = SolveStatus::diverged;
                break;
            }
        } else {
            grow_streak = 0;
        }
        prev_diff = diff_c1;

        for (size_t i = 0; i < b.c1.values.size(); ++i) {
            b.c1.values[i] = (1.0 - config.omega) * b.c1.values[i] + config.omega * step.W.c1.values[i];
            b.c2.values[i] = (1.0 - config.omega) * b.c2.values[i] + config.omega * step.W.c2.values[i];
        }
        if (it == config.max_iter) eq.report.status = SolveStatus::max_iter_reached;
    }
    if (!have_step) throw std::runtime_error("solve: no iteration performed");

    eq.b = b;
    eq.B = b;
    for (double& v : eq.B.c2.values) v += 1.0;
    eq.j = step.j;
    eq.j0 = step.j0;
    eq.J = step.J;
    eq.psi = step.psi;

    auto [p, loop] = reconstruct_pressure(grid, eq.B, eq.j);
    eq.p = std::move(p);

    eq.report.holder = step.holder;
    eq.report.upsilon_norm = step.upsilon_norm;
    eq.report.decomposed_J = step.decomposed_J;
    eq.report.flux_cross_check = std::abs(step.J - step.decomposed_J);
    eq.report.loop_defect = loop;
    eq.report.current_diag = step.diag;
    eq.report.residuals = residual_suite(grid, eq.B, eq.j, eq.p, eq.J, data, config.residual_tol);
    return eq;
}

// Steady-flow relabeling: v = B and q = -(p + |B|^2/2) solve the stationary
// momentum equation; the relabeled report carries the measured residual.
inline Equilibrium euler_relabel(const Equilibrium& eq, double tol = 1e-6) {
    Equilibrium out = eq;
    for (size_t i = 0; i < out.p.values.size(); ++i) {
        const double b1 = eq.B.c1.values[i], b2 = eq.B.c2.values[i];
        out.p.values[i] = -(eq.p.values[i] + 0.5 * (b1 * b1 + b2 * b2));
    }
    const double res = euler_momentum_residual(eq.grid, eq.B, eq.p);
    out.report.residuals.entries.push_back({"euler_momentum", res, tol, res <= tol});
    return out;
}

} // namespace gradrubin
