#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gradrubin/grid.hpp"
#include "gradrubin/spectral.hpp"

namespace gradrubin {

// Flow map of the perturbation field: X(eta, .) solves
//   dX/dy = b1(X, y) / (1 + b2(X, y)),  X(eta, 0) = eta,
// and DX = dX/deta solves the variational equation along the same curve.
// Lambda = X - eta is the displacement, theta = 1/DX - 1 the Jacobian defect
// of the inverse map (so 1 + theta = 1/DX pointwise).
struct CharacteristicSolution {
    PeriodicGrid grid{4, 8, 1.0};
    int substeps = 1;

    // Values on the regular grid, level-major like ScalarField.
    ScalarField X;
    ScalarField DX;
    ScalarField Lambda;
    ScalarField theta;

    // Values on the refined y-levels used by the y-quadratures,
    // level-major: X_fine[l*Nx + j] at height l * dy/substeps.
    int n_fine = 0;
    std::vector<double> X_fine;
    std::vector<double> DX_fine;

    struct Norms {
        double sup_lambda = 0.0;
        double sup_theta = 0.0;
        double quot_lambda = 0.0; // neighbor Hoelder quotient, alpha = 1/2
        double quot_theta = 0.0;
    } norms;

    double fine_dy() const { return grid.length() / (n_fine - 1); }
};

namespace detail {

// Right-hand side b1/(1+b2) and its x-derivative as interpolants; all stage
// evaluations share one coefficient line per height.
struct FlowField {
    FlowField(const PeriodicGrid& g, const VectorField& b) : grid(g) {
        require_matching(g, b.c1, "flow field b1");
        require_matching(g, b.c2, "flow field b2");
        ScalarField F(g), G(g);
        for (size_t i = 0; i < b.c2.values.size(); ++i) {
            const double denom = 1.0 + b.c2.values[i];
            if (denom <= 0.0)
                throw std::domain_error("singular field: 1 + b2 <= 0 at a grid node");
            F.values[i] = b.c1.values[i] / denom;
        }
        G = differentiate(g, F, Axis::X);
        f_interp = FieldInterpolant(g, F);
        g_interp = FieldInterpolant(g, G);
    }

    const PeriodicGrid& grid;
    FieldInterpolant f_interp;
    FieldInterpolant g_interp;
};

struct StageLines {
    SpectralCoeffs f0, f1, f2; // F at y, y+h/2, y+h
    SpectralCoeffs g0, g1, g2; // dF/dx at the same heights
};

inline void load_stage_lines(const FlowField& ff, double y, double h, bool with_g, StageLines& s) {
    s.f0 = ff.f_interp.coeff_line(y);
    s.f1 = ff.f_interp.coeff_line(y + 0.5 * h);
    s.f2 = ff.f_interp.coeff_line(y + h);
    if (with_g) {
        s.g0 = ff.g_interp.coeff_line(y);
        s.g1 = ff.g_interp.coeff_line(y + 0.5 * h);
        s.g2 = ff.g_interp.coeff_line(y + h);
    }
}

// One classical 4th-order step of (X, DX) using preloaded stage lines.
inline void rk4_step(const StageLines& s, double h, double& x, double& dxdeta) {
    const double k1 = eval_modes(s.f0, x);
    const double k1d = eval_modes(s.g0, x) * dxdeta;
    const double x2 = x + 0.5 * h * k1;
    const double k2 = eval_modes(s.f1, x2);
    const double k2d = eval_modes(s.g1, x2) * (dxdeta + 0.5 * h * k1d);
    const double x3 = x + 0.5 * h * k2;
    const double k3 = eval_modes(s.f1, x3);
    const double k3d = eval_modes(s.g1, x3) * (dxdeta + 0.5 * h * k2d);
    const double x4 = x + h * k3;
    const double k4 = eval_modes(s.f2, x4);
    const double k4d = eval_modes(s.g2, x4) * (dxdeta + h * k3d);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    dxdeta += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
}

// Position-only step (transport does not need the variational part).
inline double rk4_step_x(const StageLines& s, double h, double x) {
    const double k1 = eval_modes(s.f0, x);
    const double k2 = eval_modes(s.f1, x + 0.5 * h * k1);
    const double k3 = eval_modes(s.f1, x + 0.5 * h * k2);
    const double k4 = eval_modes(s.f2, x + h * k3);
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace detail

inline CharacteristicSolution integrate_characteristics(const PeriodicGrid& grid, const VectorField& b,
                                                        int substeps = 4) {
    if (substeps < 1) throw std::invalid_argument("integrate_characteristics: substeps must be >= 1");
    detail::FlowField ff(grid, b);

    CharacteristicSolution cs;
    cs.grid = grid;
    cs.substeps = substeps;
    cs.n_fine = (grid.ny() - 1) * substeps + 1;
    const int nx = grid.nx();
    cs.X_fine.resize(static_cast<size_t>(cs.n_fine) * nx);
    cs.DX_fine.resize(static_cast<size_t>(cs.n_fine) * nx);

    std::vector<double> x(nx), dx(nx, 1.0);
    for (int k = 0; k < nx; ++k) x[k] = grid.x(k);
    std::copy(x.begin(), x.end(), cs.X_fine.begin());
    std::fill(cs.DX_fine.begin(), cs.DX_fine.begin() + nx, 1.0);

    const double h = grid.length() / (cs.n_fine - 1);
    detail::StageLines stage;
    for (int l = 0; l + 1 < cs.n_fine; ++l) {
        detail::load_stage_lines(ff, l * h, h, true, stage);
        for (int k = 0; k < nx; ++k) {
            detail::rk4_step(stage, h, x[k], dx[k]);
            if (!(dx[k] > 0.0) || !std::isfinite(dx[k]) || !std::isfinite(x[k]))
                throw std::runtime_error("fold: dX/deta <= 0 along a characteristic (field too large)");
        }
        for (int k = 0; k < nx; ++k) {
            const double gap = (k + 1 < nx) ? x[k + 1] - x[k] : x[0] + two_pi - x[nx - 1];
            if (!(gap > 0.0))
                throw std::runtime_error("fold: characteristics crossed (field too large)");
        }
        std::copy(x.begin(), x.end(), cs.X_fine.begin() + static_cast<size_t>(l + 1) * nx);
        std::copy(dx.begin(), dx.end(), cs.DX_fine.begin() + static_cast<size_t>(l + 1) * nx);
    }

    cs.X = ScalarField(grid);
    cs.DX = ScalarField(grid);
    cs.Lambda = ScalarField(grid);
    cs.theta = ScalarField(grid);
    for (int m = 0; m < grid.ny(); ++m) {
        const size_t off = static_cast<size_t>(m) * substeps * nx;
        for (int k = 0; k < nx; ++k) {
            const double xv = cs.X_fine[off + k];
            const double dv = cs.DX_fine[off + k];
            cs.X(k, m) = xv;
            cs.DX(k, m) = dv;
            cs.Lambda(k, m) = xv - grid.x(k);
            cs.theta(k, m) = 1.0 / dv - 1.0;
        }
    }

    // Record sup and neighbor Hoelder quotients (alpha = 1/2) of Lambda, theta.
    auto record = [&](const ScalarField& u, double& sup, double& quot) {
        sup = u.sup_norm();
        double q = 0.0;
        const double hx = grid.dx();
        const double hy = grid.dy();
        for (int m = 0; m < grid.ny(); ++m)
            for (int k = 0; k < nx; ++k) {
                const double v = u(k, m);
                q = std::max(q, std::abs(u((k + 1) % nx, m) - v) / std::sqrt(hx));
                if (m + 1 < grid.ny()) q = std::max(q, std::abs(u(k, m + 1) - v) / std::sqrt(hy));
            }
        quot = q;
    };
    record(cs.Lambda, cs.norms.sup_lambda, cs.norms.quot_lambda);
    record(cs.theta, cs.norms.sup_theta, cs.norms.quot_theta);
    return cs;
}

// Foot point of the characteristic through (x, y): backward integration of
// the same ODE down to the inflow wall.
inline double invert_flow(const PeriodicGrid& grid, const VectorField& b, double x, double y,
                          int substeps = 4) {
    if (y < 0.0 || y > grid.length() + 1e-12 * grid.length())
        throw std::domain_error("invert_flow: y outside [0, L]");
    if (y <= 0.0) return x;
    detail::FlowField ff(grid, b);
    const double h_target = grid.dy() / substeps;
    const int nsteps = std::max(1, static_cast<int>(std::ceil(y / h_target - 1e-12)));
    const double h = -y / nsteps;
    double cur = x;
    detail::StageLines stage;
    for (int s = 0; s < nsteps; ++s) {
        const double yl = y + s * h;
        detail::load_stage_lines(ff, yl, h, false, stage);
        cur = detail::rk4_step_x(stage, h, cur);
    }
    return cur;
}

// Transported current j(x, y) = j0(foot(x, y)) on the whole grid. All foot
// points are obtained by one joint downward march over the refined levels;
// trajectories for the nodes of level m join the march at height y_m. The
// bottom row is the given trace verbatim.
inline ScalarField transport_current(const PeriodicGrid& grid, const std::vector<double>& j0,
                                     const VectorField& b, int substeps = 4) {
    if (static_cast<int>(j0.size()) != grid.nx())
        throw std::invalid_argument("transport_current: j0 must be sampled on the x-grid");
    detail::FlowField ff(grid, b);

    const int nx = grid.nx();
    const int ny = grid.ny();
    const int n_fine = (ny - 1) * substeps + 1;
    const double h = grid.length() / (n_fine - 1);

    std::vector<double> feet(static_cast<size_t>(nx) * ny);
    for (int m = 0; m < ny; ++m)
        for (int k = 0; k < nx; ++k) feet[static_cast<size_t>(m) * nx + k] = grid.x(k);

    detail::StageLines stage;
    for (int l = n_fine - 1; l >= 1; --l) {
        detail::load_stage_lines(ff, l * h, -h, false, stage);
        const int m_min = (l + substeps - 1) / substeps; // regular levels still in flight
        for (int m = m_min; m < ny; ++m) {
            double* row = feet.data() + static_cast<size_t>(m) * nx;
            for (int k = 0; k < nx; ++k) row[k] = detail::rk4_step_x(stage, -h, row[k]);
        }
    }

    auto j0_hat = dft_forward(j0);
    ScalarField j(grid);
    for (int m = 0; m < ny; ++m)
        for (int k = 0; k < nx; ++k)
            j(k, m) = (m == 0) ? j0[k] : eval_modes(j0_hat, feet[static_cast<size_t>(m) * nx + k]);
    return j;
}

} // namespace gradrubin
