// Batch front end for the channel equilibrium solver.
//
// Modes:
//   solve-linear  closed-form linearized solve
//   solve         full fixed-point solve
//   verify        recompute the residual suite from saved output files
//   sweep         amplitude sweep comparing the nonlinear and linear solves
//
// Exit codes: 0 success, 2 configuration/data error, 3 solver divergence or
// failure, 4 residual gate failure, 5 I/O error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gradrubin/fixed_point.hpp"
#include "gradrubin/io.hpp"

namespace fs = std::filesystem;
using namespace gradrubin;

namespace {

void emit_equilibrium(const RunConfig& cfg, const fs::path& dir, const Equilibrium& eq) {
    fs::create_directories(dir);
    if (cfg.write_csv) {
        write_fields_csv(dir / "fields.csv", eq);
        write_j0_csv(dir / "j0.csv", eq.grid, eq.j0);
        write_convergence_csv(dir / "convergence.csv", eq.report);
    }
    if (cfg.write_json) write_report_json(dir / "report.json", report_json(eq));
}

int gate(const Equilibrium& eq) {
    if (eq.report.status != SolveStatus::converged) {
        std::cerr << "solver did not converge: " << to_string(eq.report.status) << "\n";
        return 3;
    }
    if (!eq.report.residuals.all_pass()) {
        std::cerr << "residual gate failed:\n";
        for (const auto& e : eq.report.residuals.entries)
            if (!e.pass)
                std::cerr << "  " << e.name << " = " << e.value << " > " << e.tolerance << "\n";
        return 4;
    }
    return 0;
}

int run_solve(const RunConfig& cfg, const fs::path& dir) {
    PeriodicGrid grid = cfg.solver.grid();
    auto eq = solve(cfg.boundary(grid), cfg.solver);
    emit_equilibrium(cfg, dir, eq);
    if (!eq.report.data_within_budget)
        std::cerr << "warning: boundary data exceed the smallness budget\n";
    if (!eq.report.upsilon_within_regime)
        std::cerr << "warning: contraction block norm >= 1, outside the solvable regime\n";
    std::cout << "status=" << to_string(eq.report.status) << " iterations=" << eq.report.iterations
              << " J=" << eq.J << " residuals=" << (eq.report.residuals.all_pass() ? "pass" : "FAIL")
              << "\n";
    return gate(eq);
}

// The linearized solve checks the linear contract only: the advective and
// momentum residuals are quadratic in the data and not gated here.
int run_solve_linear(const RunConfig& cfg, const fs::path& dir) {
    PeriodicGrid grid = cfg.solver.grid();
    auto data = cfg.boundary(grid);
    auto lin = solve_linearized(grid, data);

    Equilibrium eq;
    eq.grid = grid;
    eq.b = lin.W;
    eq.B = lin.W;
    for (double& v : eq.B.c2.values) v += 1.0;
    eq.j = ScalarField(grid);
    for (int m = 0; m < grid.ny(); ++m)
        for (int k = 0; k < grid.nx(); ++k) eq.j(k, m) = lin.j0[k];
    eq.j0 = lin.j0;
    eq.J = lin.J;
    eq.psi = lin.psi;
    auto [p, loop] = reconstruct_pressure(grid, eq.B, eq.j);
    eq.p = std::move(p);
    eq.report.status = SolveStatus::converged;
    eq.report.iterations = 1;
    eq.report.loop_defect = loop;

    auto full = residual_suite(grid, eq.B, eq.j, eq.p, eq.J, data, cfg.solver.residual_tol);
    for (const auto& e : full.entries)
        if (e.name != "transport" && e.name != "momentum" && e.name != "pressure_loop")
            eq.report.residuals.entries.push_back(e);

    emit_equilibrium(cfg, dir, eq);
    std::cout << "status=linear J=" << eq.J
              << " residuals=" << (eq.report.residuals.all_pass() ? "pass" : "FAIL") << "\n";
    return eq.report.residuals.all_pass() ? 0 : 4;
}

int run_verify(const RunConfig& cfg, const fs::path& dir) {
    PeriodicGrid grid = cfg.solver.grid();
    auto data = cfg.boundary(grid);
    auto lf = load_fields_csv(dir / "fields.csv", grid);
    const double J = load_report_J(dir / "report.json");
    auto rep = residual_suite(grid, lf.B, lf.j, lf.p, J, data, cfg.solver.residual_tol);

    nlohmann::ordered_json out;
    out["J"] = J;
    out["residuals"] = residuals_json(rep);
    write_report_json(dir / "verify_report.json", out);
    for (const auto& e : rep.entries)
        std::cout << (e.pass ? "pass" : "FAIL") << "  " << e.name << " = " << e.value << "\n";
    return rep.all_pass() ? 0 : 4;
}

// Scales the configured traces by each epsilon and reports the sup distance
// between the nonlinear and linearized fields; the log-log slope against
// epsilon exposes the quadratic remainder.
int run_sweep(const RunConfig& cfg, const fs::path& dir) {
    PeriodicGrid grid = cfg.solver.grid();
    auto base = cfg.boundary(grid);
    std::vector<double> gaps;
    for (double eps : cfg.sweep_epsilons) {
        if (!(eps > 0.0)) throw ConfigError("sweep: epsilons must be positive");
        BoundaryData d = base;
        for (auto& v : d.f_plus) v *= eps;
        for (auto& v : d.f_minus) v *= eps;
        for (auto& v : d.g) v *= eps;
        auto lin = solve_linearized(grid, d);
        auto eq = solve(d, cfg.solver);
        if (eq.report.status != SolveStatus::converged) {
            std::cerr << "sweep: solve at eps=" << eps << " did not converge\n";
            return 3;
        }
        double gap = 0.0;
        for (size_t i = 0; i < eq.b.c1.values.size(); ++i) {
            gap = std::max(gap, std::abs(eq.b.c1.values[i] - lin.W.c1.values[i]));
            gap = std::max(gap, std::abs(eq.b.c2.values[i] - lin.W.c2.values[i]));
        }
        gaps.push_back(gap);
        std::cout << "eps=" << eps << "  |nonlinear - linear| = " << gap << "\n";
    }

    // Least-squares slope of log(gap) against log(eps).
    const int n = static_cast<int>(gaps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double x = std::log(cfg.sweep_epsilons[i]);
        const double y = std::log(gaps[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    std::cout << "log-log slope = " << slope << "\n";

    fs::create_directories(dir);
    {
        auto out = std::ofstream(dir / "sweep.csv");
        if (!out) throw IoError("cannot write sweep.csv");
        out << "eps,gap\n";
        for (int i = 0; i < n; ++i)
            out << cfg.sweep_epsilons[i] << ',' << gaps[i] << '\n';
    }
    nlohmann::ordered_json rep;
    rep["epsilons"] = cfg.sweep_epsilons;
    rep["gaps"] = gaps;
    rep["slope"] = slope;
    write_report_json(dir / "sweep_report.json", rep);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral solver for channel magneto-hydrostatic equilibria"};
    std::string mode, config_path, out_dir;
    long long seed = -1;
    app.add_option("--mode", mode, "solve-linear | solve | verify | sweep")
        ->required()
        ->check(CLI::IsMember({"solve-linear", "solve", "verify", "sweep"}));
    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--seed", seed, "seed for the far-pair sample of the Hoelder monitor");
    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        if (seed >= 0) cfg.solver.seed = static_cast<unsigned>(seed);
        const fs::path dir = out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(out_dir);
        if (mode == "solve") return run_solve(cfg, dir);
        if (mode == "solve-linear") return run_solve_linear(cfg, dir);
        if (mode == "verify") return run_verify(cfg, dir);
        return run_sweep(cfg, dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CompatibilityError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
}
