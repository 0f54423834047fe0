#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gradrubin/boundary.hpp"
#include "gradrubin/fixed_point.hpp"
#include "gradrubin/grid.hpp"

namespace gradrubin {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Run configuration: grid, boundary traces (node arrays or sparse mode
// lists), solver knobs, output settings. Parsed from flat key-value text,
// one `key = value` per line, `#` comments; unknown keys are rejected.
struct RunConfig {
    SolverConfig solver;
    std::vector<TraceMode> f_plus_modes, f_minus_modes, g_modes;
    std::vector<double> f_plus_nodes, f_minus_nodes, g_nodes;
    std::vector<double> sweep_epsilons{0.04, 0.02, 0.01, 0.005};
    std::string output_dir = "out";
    bool write_csv = true;
    bool write_json = true;

    BoundaryData boundary(const PeriodicGrid& grid) const {
        auto trace = [&](const std::vector<double>& nodes, const std::vector<TraceMode>& modes,
                         const char* name) {
            if (!nodes.empty()) {
                if (static_cast<int>(nodes.size()) != grid.nx())
                    throw ConfigError(std::string("boundary.") + name + ".nodes: expected " +
                                      std::to_string(grid.nx()) + " values, got " +
                                      std::to_string(nodes.size()));
                return nodes;
            }
            return render_modes(grid, modes);
        };
        BoundaryData d;
        d.f_plus = trace(f_plus_nodes, f_plus_modes, "f_plus");
        d.f_minus = trace(f_minus_nodes, f_minus_modes, "f_minus");
        d.g = trace(g_nodes, g_modes, "g");
        return d;
    }
};

namespace detail {

inline std::vector<double> parse_numbers(const std::string& text, const std::string& key) {
    std::istringstream iss(text);
    std::vector<double> out;
    double v;
    while (iss >> v) out.push_back(v);
    std::string rest;
    if (iss.clear(), iss >> rest)
        throw ConfigError("config: non-numeric value for " + key + ": '" + text + "'");
    if (out.empty()) throw ConfigError("config: empty value for " + key);
    return out;
}

inline double parse_one(const std::string& text, const std::string& key) {
    auto v = parse_numbers(text, key);
    if (v.size() != 1) throw ConfigError("config: expected a single value for " + key);
    return v[0];
}

inline TraceMode parse_mode(const std::string& text, const std::string& key) {
    auto v = parse_numbers(text, key);
    if (v.size() != 3) throw ConfigError("config: mode entries take 'n re im' for " + key);
    if (v[0] != std::floor(v[0])) throw ConfigError("config: mode index must be integer for " + key);
    return TraceMode{static_cast<int>(v[0]), v[1], v[2]};
}

} // namespace detail

inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        auto& s = cfg.solver;
        if (key == "grid.nx") s.nx = static_cast<int>(detail::parse_one(val, key));
        else if (key == "grid.ny") s.ny = static_cast<int>(detail::parse_one(val, key));
        else if (key == "grid.length" || key == "grid.L") s.length = detail::parse_one(val, key);
        else if (key == "boundary.f_plus.mode") cfg.f_plus_modes.push_back(detail::parse_mode(val, key));
        else if (key == "boundary.f_minus.mode") cfg.f_minus_modes.push_back(detail::parse_mode(val, key));
        else if (key == "boundary.g.mode") cfg.g_modes.push_back(detail::parse_mode(val, key));
        else if (key == "boundary.f_plus.nodes") cfg.f_plus_nodes = detail::parse_numbers(val, key);
        else if (key == "boundary.f_minus.nodes") cfg.f_minus_nodes = detail::parse_numbers(val, key);
        else if (key == "boundary.g.nodes") cfg.g_nodes = detail::parse_numbers(val, key);
        else if (key == "solver.tol_fixed_point") s.tol_fixed_point = detail::parse_one(val, key);
        else if (key == "solver.max_iter") s.max_iter = static_cast<int>(detail::parse_one(val, key));
        else if (key == "solver.omega") s.omega = detail::parse_one(val, key);
        else if (key == "solver.smallness_budget") s.smallness_budget = detail::parse_one(val, key);
        else if (key == "solver.ode_substeps") s.ode_substeps = static_cast<int>(detail::parse_one(val, key));
        else if (key == "solver.alpha") s.alpha = detail::parse_one(val, key);
        else if (key == "solver.delta0") s.delta0 = detail::parse_one(val, key);
        else if (key == "solver.delta1") s.delta1 = detail::parse_one(val, key);
        else if (key == "solver.seed") s.seed = static_cast<unsigned>(detail::parse_one(val, key));
        else if (key == "solver.neumann_sweeps") s.neumann_sweeps = static_cast<int>(detail::parse_one(val, key));
        else if (key == "solver.sweep_epsilons") cfg.sweep_epsilons = detail::parse_numbers(val, key);
        else if (key == "solver.tol.div_B") s.residual_tol.div_B = detail::parse_one(val, key);
        else if (key == "solver.tol.curl_minus_j") s.residual_tol.curl_minus_j = detail::parse_one(val, key);
        else if (key == "solver.tol.transport") s.residual_tol.transport = detail::parse_one(val, key);
        else if (key == "solver.tol.bc_normal_bottom") s.residual_tol.bc_normal_bottom = detail::parse_one(val, key);
        else if (key == "solver.tol.bc_normal_top") s.residual_tol.bc_normal_top = detail::parse_one(val, key);
        else if (key == "solver.tol.bc_tangential") s.residual_tol.bc_tangential = detail::parse_one(val, key);
        else if (key == "solver.tol.flux_defect") s.residual_tol.flux_defect = detail::parse_one(val, key);
        else if (key == "solver.tol.momentum") s.residual_tol.momentum = detail::parse_one(val, key);
        else if (key == "solver.tol.pressure_loop") s.residual_tol.pressure_loop = detail::parse_one(val, key);
        else if (key == "output.dir") cfg.output_dir = val;
        else if (key == "output.formats") {
            cfg.write_csv = false;
            cfg.write_json = false;
            std::istringstream fs(val);
            std::string fmt;
            while (fs >> fmt) {
                if (fmt == "csv") cfg.write_csv = true;
                else if (fmt == "json") cfg.write_json = true;
                else throw ConfigError("config: unknown output format '" + fmt + "'");
            }
        } else {
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    cfg.solver.validate();
    // Grid validity (throws std::invalid_argument wrapped as config error).
    try {
        cfg.solver.grid();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    return parse_config(in);
}

// ---------------------------------------------------------------------------
// Output files. All numbers are written with 17 significant digits so that a
// reload reproduces the doubles bit for bit.

namespace detail {

inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw IoError("cannot write " + p.string());
    return out;
}

} // namespace detail

inline void write_fields_csv(const std::filesystem::path& path, const Equilibrium& eq) {
    auto out = detail::open_out(path);
    out << "x,y,B1,B2,j,psi,p\n";
    const auto& g = eq.grid;
    for (int m = 0; m < g.ny(); ++m)
        for (int k = 0; k < g.nx(); ++k)
            out << detail::fmt17(g.x(k)) << ',' << detail::fmt17(g.y(m)) << ','
                << detail::fmt17(eq.B.c1(k, m)) << ',' << detail::fmt17(eq.B.c2(k, m)) << ','
                << detail::fmt17(eq.j(k, m)) << ',' << detail::fmt17(eq.psi(k, m)) << ','
                << detail::fmt17(eq.p(k, m)) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

inline void write_j0_csv(const std::filesystem::path& path, const PeriodicGrid& g,
                         const std::vector<double>& j0) {
    auto out = detail::open_out(path);
    out << "x,j0\n";
    for (int k = 0; k < g.nx(); ++k)
        out << detail::fmt17(g.x(k)) << ',' << detail::fmt17(j0[k]) << '\n';
}

inline void write_convergence_csv(const std::filesystem::path& path, const IterationReport& rep) {
    auto out = detail::open_out(path);
    out << "iter,diff_sup,diff_c1,contraction\n";
    for (const auto& r : rep.history)
        out << r.iteration << ',' << detail::fmt17(r.diff_sup) << ',' << detail::fmt17(r.diff_c1)
            << ',' << detail::fmt17(r.contraction) << '\n';
}

inline nlohmann::ordered_json residuals_json(const ResidualReport& rep) {
    nlohmann::ordered_json j;
    for (const auto& e : rep.entries)
        j[e.name] = {{"value", e.value}, {"tolerance", e.tolerance}, {"pass", e.pass}};
    return j;
}

inline nlohmann::ordered_json report_json(const Equilibrium& eq) {
    const auto& rep = eq.report;
    nlohmann::ordered_json j;
    j["status"] = to_string(rep.status);
    j["iterations"] = rep.iterations;
    j["J"] = eq.J;
    j["decomposed_J"] = rep.decomposed_J;
    j["flux_cross_check"] = rep.flux_cross_check;
    j["loop_defect"] = rep.loop_defect;
    j["upsilon_norm"] = rep.upsilon_norm;
    j["upsilon_within_regime"] = rep.upsilon_within_regime;
    j["data_within_budget"] = rep.data_within_budget;
    j["holder"] = {{"norm_lambda", rep.holder.norm_lambda},
                   {"norm_theta", rep.holder.norm_theta},
                   {"lambda_sup", rep.holder.lambda_sup},
                   {"lambda_quotient", rep.holder.lambda_quotient},
                   {"theta_sup", rep.holder.theta_sup},
                   {"theta_quotient", rep.holder.theta_quotient},
                   {"within_budget", rep.holder.within_budget}};
    j["current_solve"] = {{"residual_sup", rep.current_diag.residual_sup},
                          {"constraint_residual", rep.current_diag.constraint_residual},
                          {"condition_estimate", rep.current_diag.condition_estimate},
                          {"ill_conditioned", rep.current_diag.ill_conditioned},
                          {"kernel_tail", rep.current_diag.kernel_tail}};
    j["residuals"] = residuals_json(rep.residuals);
    nlohmann::ordered_json hist = nlohmann::ordered_json::array();
    for (const auto& r : rep.history)
        hist.push_back({{"iter", r.iteration},
                        {"diff_sup", r.diff_sup},
                        {"diff_c1", r.diff_c1},
                        {"contraction", r.contraction},
                        {"upsilon_norm", r.upsilon_norm}});
    j["convergence"] = hist;
    return j;
}

inline void write_report_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    auto out = detail::open_out(path);
    out << j.dump(2) << '\n';
}

// Loaded counterpart of write_fields_csv, validated against the grid.
struct LoadedFields {
    VectorField B;
    ScalarField j;
    ScalarField psi;
    ScalarField p;
};

inline LoadedFields load_fields_csv(const std::filesystem::path& path, const PeriodicGrid& g) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::string header;
    std::getline(in, header);
    if (header != "x,y,B1,B2,j,psi,p") throw IoError("unexpected fields header in " + path.string());
    LoadedFields lf{VectorField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
    std::string line;
    size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        for (auto& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream iss(line);
        double x, y, b1, b2, jv, psiv, pv;
        if (!(iss >> x >> y >> b1 >> b2 >> jv >> psiv >> pv))
            throw IoError("malformed row in " + path.string());
        const int m = static_cast<int>(rows) / g.nx();
        const int k = static_cast<int>(rows) % g.nx();
        if (m >= g.ny()) throw IoError("too many rows in " + path.string());
        lf.B.c1(k, m) = b1;
        lf.B.c2(k, m) = b2;
        lf.j(k, m) = jv;
        lf.psi(k, m) = psiv;
        lf.p(k, m) = pv;
        ++rows;
    }
    if (rows != static_cast<size_t>(g.nx()) * g.ny())
        throw IoError("row count mismatch in " + path.string());
    return lf;
}

inline double load_report_J(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    nlohmann::json j;
    in >> j;
    if (!j.contains("J")) throw IoError("report has no flux entry: " + path.string());
    return j["J"].get<double>();
}

} // namespace gradrubin
