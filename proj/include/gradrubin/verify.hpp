#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gradrubin/boundary.hpp"
#include "gradrubin/flow_map.hpp"
#include "gradrubin/grid.hpp"
#include "gradrubin/quadrature.hpp"

namespace gradrubin {

// Residual suite over a computed equilibrium. Deliberately does not reuse the
// solver operators: x-derivatives are 4th-order centered differences (the
// solver is spectral in x), y-derivatives 2nd-order with one-sided wall rows
// (the solver uses 6th order or analytic mode derivatives). Discrepancies
// therefore measure real discretization error instead of echoing the solver.
namespace vfd {

inline ScalarField ddx(const PeriodicGrid& g, const ScalarField& f) {
    ScalarField out(g);
    const int nx = g.nx();
    const double c = 1.0 / (12.0 * g.dx());
    for (int m = 0; m < g.ny(); ++m)
        for (int k = 0; k < nx; ++k) {
            const double fm2 = f((k - 2 + nx) % nx, m), fm1 = f((k - 1 + nx) % nx, m);
            const double fp1 = f((k + 1) % nx, m), fp2 = f((k + 2) % nx, m);
            out(k, m) = c * (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2);
        }
    return out;
}

inline ScalarField ddy(const PeriodicGrid& g, const ScalarField& f) {
    ScalarField out(g);
    const int ny = g.ny();
    const double c = 1.0 / (2.0 * g.dy());
    for (int k = 0; k < g.nx(); ++k) {
        out(k, 0) = c * (-3.0 * f(k, 0) + 4.0 * f(k, 1) - f(k, 2));
        for (int m = 1; m + 1 < ny; ++m) out(k, m) = c * (f(k, m + 1) - f(k, m - 1));
        out(k, ny - 1) = c * (3.0 * f(k, ny - 1) - 4.0 * f(k, ny - 2) + f(k, ny - 3));
    }
    return out;
}

} // namespace vfd

struct ResidualEntry {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ResidualReport {
    std::vector<ResidualEntry> entries;

    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
    const ResidualEntry& at(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return e;
        throw std::invalid_argument("ResidualReport: no entry named " + name);
    }
};

struct ResidualTolerances {
    double div_B = 1e-6;
    double curl_minus_j = 1e-6;
    double transport = 1e-6;
    double bc_normal_bottom = 1e-6;
    double bc_normal_top = 1e-6;
    double bc_tangential = 1e-6; // scaled by (1 + ||g||_inf)
    double flux_defect = 1e-6;
    double momentum = 1e-6;
    double pressure_loop = 1e-6;
};

inline ResidualReport residual_suite(const PeriodicGrid& grid, const VectorField& B, const ScalarField& j,
                                     const ScalarField& p, double J, const BoundaryData& data,
                                     const ResidualTolerances& tol = {}) {
    const int nx = grid.nx();
    const int ny = grid.ny();

    auto b1x = vfd::ddx(grid, B.c1);
    auto b1y = vfd::ddy(grid, B.c1);
    auto b2x = vfd::ddx(grid, B.c2);
    auto b2y = vfd::ddy(grid, B.c2);
    auto jx = vfd::ddx(grid, j);
    auto jy = vfd::ddy(grid, j);
    auto px = vfd::ddx(grid, p);
    auto py = vfd::ddy(grid, p);

    double div_sup = 0.0, curl_sup = 0.0, transport_sup = 0.0, momentum_sup = 0.0;
    for (int m = 0; m < ny; ++m)
        for (int k = 0; k < nx; ++k) {
            div_sup = std::max(div_sup, std::abs(b1x(k, m) + b2y(k, m)));
            curl_sup = std::max(curl_sup, std::abs(b2x(k, m) - b1y(k, m) - j(k, m)));
            transport_sup = std::max(transport_sup,
                                     std::abs(B.c1(k, m) * jx(k, m) + B.c2(k, m) * jy(k, m)));
            const double mx = -j(k, m) * B.c2(k, m) - px(k, m);
            const double my = j(k, m) * B.c1(k, m) - py(k, m);
            momentum_sup = std::max(momentum_sup, std::max(std::abs(mx), std::abs(my)));
        }

    double nb = 0.0, nt = 0.0, bt = 0.0, gnorm = 0.0;
    for (int k = 0; k < nx; ++k) {
        nb = std::max(nb, std::abs(B.c2(k, 0) - (1.0 + data.f_minus[k])));
        nt = std::max(nt, std::abs(B.c2(k, ny - 1) - (1.0 + data.f_plus[k])));
        bt = std::max(bt, std::abs(B.c1(k, 0) - data.g[k]));
        gnorm = std::max(gnorm, std::abs(data.g[k]));
    }

    std::vector<double> col(ny);
    for (int m = 0; m < ny; ++m) col[m] = B.c1(0, m);
    const double flux = integrate_uniform(std::span<const double>(col), grid.dy());

    double loop_mean = 0.0;
    for (int k = 0; k < nx; ++k) loop_mean += -j(k, 0) * B.c2(k, 0);
    loop_mean /= nx;
    const double loop = std::abs(two_pi * loop_mean);

    ResidualReport rep;
    auto add = [&](const char* name, double value, double tolerance) {
        rep.entries.push_back({name, value, tolerance, value <= tolerance});
    };
    add("div_B", div_sup, tol.div_B);
    add("curl_minus_j", curl_sup, tol.curl_minus_j);
    add("transport", transport_sup, tol.transport);
    add("bc_normal_bottom", nb, tol.bc_normal_bottom);
    add("bc_normal_top", nt, tol.bc_normal_top);
    add("bc_tangential", bt, tol.bc_tangential * (1.0 + gnorm));
    add("flux_defect", std::abs(flux - J), tol.flux_defect);
    add("momentum", momentum_sup, tol.momentum);
    add("pressure_loop", loop, tol.pressure_loop);
    return rep;
}

// Discrete Hoelder monitor: sup norm plus the maximal finite-difference
// quotient |u(P) - u(Q)| / d(P,Q)^alpha over grid-neighbor pairs, full-height
// column pairs, and a seeded sample of far pairs.
struct HolderReport {
    double lambda_sup = 0.0;
    double lambda_quotient = 0.0;
    double theta_sup = 0.0;
    double theta_quotient = 0.0;
    double norm_lambda = 0.0; // sup + quotient
    double norm_theta = 0.0;
    bool within_budget = true;
};

inline HolderReport holder_monitor(const CharacteristicSolution& chars, double alpha,
                                   double delta0 = 0.5, double delta1 = 0.5,
                                   unsigned seed = 12345, int far_pairs = 2000) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("holder_monitor: alpha must be in (0,1)");
    const PeriodicGrid& g = chars.grid;
    const int nx = g.nx();
    const int ny = g.ny();

    auto dist = [&](int k1, int m1, int k2, int m2) {
        double dx = std::abs(g.x(k1) - g.x(k2));
        dx = std::min(dx, two_pi - dx);
        const double dy = g.y(m1) - g.y(m2);
        return std::sqrt(dx * dx + dy * dy);
    };

    auto quotient = [&](const ScalarField& u) {
        double q = 0.0;
        auto consider = [&](int k1, int m1, int k2, int m2) {
            const double d = dist(k1, m1, k2, m2);
            if (d <= 0.0) return;
            q = std::max(q, std::abs(u(k1, m1) - u(k2, m2)) / std::pow(d, alpha));
        };
        for (int m = 0; m < ny; ++m)
            for (int k = 0; k < nx; ++k) {
                consider(k, m, (k + 1) % nx, m);
                if (m + 1 < ny) consider(k, m, k, m + 1);
            }
        for (int k = 0; k < nx; ++k) consider(k, 0, k, ny - 1);
        std::mt19937 rng(seed);
        std::uniform_int_distribution<int> dk(0, nx - 1), dm(0, ny - 1);
        for (int s = 0; s < far_pairs; ++s)
            consider(dk(rng), dm(rng), dk(rng), dm(rng));
        return q;
    };

    HolderReport rep;
    rep.lambda_sup = chars.Lambda.sup_norm();
    rep.lambda_quotient = quotient(chars.Lambda);
    rep.theta_sup = chars.theta.sup_norm();
    rep.theta_quotient = quotient(chars.theta);
    rep.norm_lambda = rep.lambda_sup + rep.lambda_quotient;
    rep.norm_theta = rep.theta_sup + rep.theta_quotient;
    rep.within_budget = rep.norm_lambda <= delta0 && rep.norm_theta <= delta1;
    return rep;
}

// Momentum residual of the relabeled steady-flow form v.grad(v) + grad(q) = 0
// with v = B and q = -(p + |B|^2/2), measured with the same verify stencils.
inline double euler_momentum_residual(const PeriodicGrid& grid, const VectorField& B, const ScalarField& p) {
    ScalarField q(grid);
    for (size_t i = 0; i < q.values.size(); ++i) {
        const double b1 = B.c1.values[i], b2 = B.c2.values[i];
        q.values[i] = -(p.values[i] + 0.5 * (b1 * b1 + b2 * b2));
    }
    auto v1x = vfd::ddx(grid, B.c1);
    auto v1y = vfd::ddy(grid, B.c1);
    auto v2x = vfd::ddx(grid, B.c2);
    auto v2y = vfd::ddy(grid, B.c2);
    auto qx = vfd::ddx(grid, q);
    auto qy = vfd::ddy(grid, q);
    double sup = 0.0;
    for (int m = 0; m < grid.ny(); ++m)
        for (int k = 0; k < grid.nx(); ++k) {
            const double r1 = B.c1(k, m) * v1x(k, m) + B.c2(k, m) * v1y(k, m) + qx(k, m);
            const double r2 = B.c1(k, m) * v2x(k, m) + B.c2(k, m) * v2y(k, m) + qy(k, m);
            sup = std::max(sup, std::max(std::abs(r1), std::abs(r2)));
        }
    return sup;
}

} // namespace gradrubin
