#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "gradrubin/boundary.hpp"
#include "gradrubin/grid.hpp"
#include "gradrubin/hyperbolic.hpp"
#include "gradrubin/quadrature.hpp"
#include "gradrubin/spectral.hpp"

namespace gradrubin {

// One vertical two-point problem  psi'' - n^2 psi = rhs,  psi(0) = bc0,
// psi(L) = bcL, solved through the sinh-kernel Green's function. The
// particular part is accumulated as the pair of scaled prefix integrals
//   P~(y) = e^{-ny} int_0^y sinh(n t) rhs(t) dt,
//   S~(y) = e^{-n(L-y)} int_y^L sinh(n(L-t)) rhs(t) dt,
// marched with exact exponential factors and a spline-sampled rhs, so the
// result and its y-derivative are uniformly accurate and smooth in y.
struct ModeBVP {
    int n = 0;
    std::vector<cd> rhs;
    cd bc0{0.0, 0.0};
    cd bcL{0.0, 0.0};
};

struct ModeSolution {
    std::vector<cd> psi;
    std::vector<cd> dpsi; // analytic y-derivative at the nodes
};

namespace detail {

// 3-point Gauss-Legendre on [0, 1].
inline constexpr std::array<double, 3> kGaussT{0.1127016653792583, 0.5, 0.8872983346207417};
inline constexpr std::array<double, 3> kGaussW{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

} // namespace detail

inline ModeSolution solve_mode_bvp(const ModeBVP& mode, double L, int ny) {
    const int n_abs = std::abs(mode.n);
    const double h = L / (ny - 1);
    ModeSolution sol;
    sol.psi.assign(ny, cd(0.0, 0.0));
    sol.dpsi.assign(ny, cd(0.0, 0.0));

    if (n_abs == 0) {
        // psi'' = rhs: double-integral primitive plus the linear interpolant.
        std::vector<cd> trh(ny);
        for (int m = 0; m < ny; ++m) trh[m] = mode.rhs[m] * (m * h);
        auto P0 = cumulative_integral(std::span<const cd>(mode.rhs), h);
        auto Q0 = cumulative_integral(std::span<const cd>(trh), h);
        const cd corr = P0[ny - 1] - Q0[ny - 1] / L;
        for (int m = 0; m < ny; ++m) {
            const double y = m * h;
            sol.psi[m] = y * P0[m] - Q0[m] - y * corr + mode.bc0 * (1.0 - y / L) + mode.bcL * (y / L);
            sol.dpsi[m] = P0[m] - corr + (mode.bcL - mode.bc0) / L;
        }
        return sol;
    }

    const double k = n_abs;
    detail::UniformSpline<cd> rhs_spline(std::span<const cd>(mode.rhs), h);
    const double ekh = std::exp(-k * h);

    std::vector<cd> Pt(ny, cd(0.0, 0.0)), St(ny, cd(0.0, 0.0));
    for (int m = 0; m + 1 < ny; ++m) {
        const double ym = m * h;
        cd inc(0.0, 0.0);
        for (int q = 0; q < 3; ++q) {
            const double t = detail::kGaussT[q];
            const cd jv = rhs_spline.eval(ym + t * h);
            const double kern = std::exp(-k * h * (1.0 - t)) - std::exp(-2.0 * k * ym) * std::exp(-k * h * (1.0 + t));
            inc += detail::kGaussW[q] * kern * jv;
        }
        Pt[m + 1] = ekh * Pt[m] + (h / 2.0) * inc;
    }
    for (int m = ny - 2; m >= 0; --m) {
        const double ym = m * h;
        cd inc(0.0, 0.0);
        for (int q = 0; q < 3; ++q) {
            const double t = detail::kGaussT[q];
            const cd jv = rhs_spline.eval(ym + t * h);
            const double kern = std::exp(-k * h * t) - std::exp(-2.0 * k * (L - ym) + k * h * t);
            inc += detail::kGaussW[q] * kern * jv;
        }
        St[m] = ekh * St[m + 1] + (h / 2.0) * inc;
    }

    const double denom = 1.0 - std::exp(-2.0 * k * L);
    for (int m = 0; m < ny; ++m) {
        const double y = m * h;
        const double eu = std::exp(-2.0 * k * (L - y));
        const double el = std::exp(-2.0 * k * y);
        const cd part = -((1.0 - eu) * Pt[m] + (1.0 - el) * St[m]) / (k * denom);
        const cd dpart = ((1.0 + eu) * Pt[m] - (1.0 + el) * St[m]) / denom;
        const auto prof = mode_profile(n_abs, y, L);
        sol.psi[m] = part + mode.bc0 * prof.r2 + mode.bcL * prof.r1;
        sol.dpsi[m] = dpart + mode.bc0 * prof.d2 + mode.bcL * prof.d1;
    }
    // The wall rows of psi are the Dirichlet data by construction; pin them.
    sol.psi[0] = mode.bc0;
    sol.psi[ny - 1] = mode.bcL;
    return sol;
}

// Unique solution of curl W = j, div W = 0, W.n = f on both walls,
// int_0^L W1(0, y) dy = J. W = (0, A) + perp-grad of the stream function;
// the first component comes from the analytic mode derivative, the second
// from the spectral x-derivative, so the discrete div vanishes identically.
inline std::pair<VectorField, ScalarField> biot_savart(const PeriodicGrid& grid, const ScalarField& j,
                                                       const DerivedBoundary& derived, double J) {
    require_matching(grid, j, "biot_savart: j");
    const int nx = grid.nx();
    const int ny = grid.ny();
    const double L = grid.length();

    // Mode lines of the current per level.
    std::vector<SpectralCoeffs> j_hat(ny);
    for (int m = 0; m < ny; ++m)
        j_hat[m] = dft_forward(std::span<const double>(j.values.data() + static_cast<size_t>(m) * nx, nx));

    std::vector<SpectralCoeffs> psi_hat(ny, SpectralCoeffs(nx)), dpsi_hat(ny, SpectralCoeffs(nx));
    ModeBVP bvp;
    bvp.rhs.resize(ny);
    for (int n = 0; n <= nx / 2; ++n) {
        const int slot = (n == nx / 2) ? nx / 2 : n;
        bvp.n = n;
        for (int m = 0; m < ny; ++m) bvp.rhs[m] = j_hat[m].c[slot];
        bvp.bc0 = derived.h_minus_hat.c[slot];
        bvp.bcL = derived.h_plus_hat.c[slot];
        if (n == 0) bvp.bcL += -J;
        auto ms = solve_mode_bvp(bvp, L, ny);
        for (int m = 0; m < ny; ++m) {
            psi_hat[m].c[slot] = ms.psi[m];
            dpsi_hat[m].c[slot] = ms.dpsi[m];
            if (n > 0 && n < nx / 2) {
                psi_hat[m].mode(-n) = std::conj(ms.psi[m]);
                dpsi_hat[m].mode(-n) = std::conj(ms.dpsi[m]);
            }
        }
    }

    ScalarField psi(grid);
    VectorField W(grid);
    for (int m = 0; m < ny; ++m) {
        auto pv = dft_inverse(psi_hat[m]);
        auto dv = dft_inverse(dpsi_hat[m]);
        auto wx = dft_inverse(derivative_x(psi_hat[m]));
        for (int k = 0; k < nx; ++k) {
            psi(k, m) = pv[k];
            W.c1(k, m) = -dv[k];
            W.c2(k, m) = derived.A + wx[k];
        }
    }
    return {std::move(W), std::move(psi)};
}

inline std::pair<VectorField, ScalarField> biot_savart(const PeriodicGrid& grid, const ScalarField& j,
                                                       const BoundaryData& data, double J) {
    return biot_savart(grid, j, derive_boundary(grid, data), J);
}

// Contract residuals of a div-curl solution, measured with the solver's own
// operator pair (spectral d/dx, 6th-order d/dy).
struct DivCurlResiduals {
    double div_sup = 0.0;
    double curl_sup = 0.0;
    double normal_bottom = 0.0;
    double normal_top = 0.0;
    double flux_defect = 0.0;
};

inline DivCurlResiduals divcurl_residuals(const PeriodicGrid& grid, const VectorField& W, const ScalarField& j,
                                          const std::vector<double>& f_plus, const std::vector<double>& f_minus,
                                          double J) {
    DivCurlResiduals r;
    auto w1x = differentiate(grid, W.c1, Axis::X);
    auto w2y = differentiate(grid, W.c2, Axis::Y);
    auto w2x = differentiate(grid, W.c2, Axis::X);
    auto w1y = differentiate(grid, W.c1, Axis::Y);
    for (int m = 0; m < grid.ny(); ++m)
        for (int k = 0; k < grid.nx(); ++k) {
            r.div_sup = std::max(r.div_sup, std::abs(w1x(k, m) + w2y(k, m)));
            r.curl_sup = std::max(r.curl_sup, std::abs(w2x(k, m) - w1y(k, m) - j(k, m)));
        }
    for (int k = 0; k < grid.nx(); ++k) {
        r.normal_bottom = std::max(r.normal_bottom, std::abs(W.c2(k, 0) - f_minus[k]));
        r.normal_top = std::max(r.normal_top, std::abs(W.c2(k, grid.ny() - 1) - f_plus[k]));
    }
    std::vector<double> col(grid.ny());
    for (int m = 0; m < grid.ny(); ++m) col[m] = W.c1(0, m);
    r.flux_defect = std::abs(integrate_uniform(std::span<const double>(col), grid.dy()) - J);
    return r;
}

} // namespace gradrubin
