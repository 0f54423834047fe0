#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "gradrubin/boundary.hpp"
#include "gradrubin/grid.hpp"
#include "gradrubin/hyperbolic.hpp"
#include "gradrubin/spectral.hpp"

namespace gradrubin {

// Closed-form solution of the linearized problem (current constant along
// vertical lines). Serves as initial iterate and small-amplitude oracle.
struct LinearSolution {
    std::vector<double> j0;
    double J = 0.0;
    ScalarField psi;
    VectorField W;
};

// Invert the convolution equation T j0 = g~ + J/L:
//   j0(n) = -R(n) g~(n) for n != 0, mean(j0) = 0, and J = -L g~(0) so that
// the n = 0 row holds with a mean-free current (uni-valued pressure).
// The sign convention is pinned by the forward-kernel round trip; see tests.
inline std::pair<std::vector<double>, double> solve_linear_j0(const SpectralCoeffs& g_tilde_hat, double L) {
    SpectralCoeffs j0_hat(g_tilde_hat.nx);
    for (int s = 0; s < g_tilde_hat.nx; ++s) {
        const int n = j0_hat.mode_of_slot(s);
        if (n == 0) continue;
        j0_hat.c[s] = -mult_R(n, L) * g_tilde_hat.c[s];
    }
    const double J = -L * g_tilde_hat.mode(0).real();
    return {dft_inverse(j0_hat), J};
}

// Assemble psi mode by mode; the wall rows reproduce the Dirichlet data
// psi(x, L) = -J + h+ and psi(x, 0) = h- exactly.
inline ScalarField solve_linear_psi(const PeriodicGrid& grid, const std::vector<double>& j0, double J,
                                    const SpectralCoeffs& h_plus_hat, const SpectralCoeffs& h_minus_hat) {
    const double L = grid.length();
    auto j0_hat = dft_forward(j0);
    ScalarField psi(grid);
    SpectralCoeffs line(grid.nx());
    for (int m = 0; m < grid.ny(); ++m) {
        const double y = grid.y(m);
        for (int s = 0; s < grid.nx(); ++s) {
            const int n = line.mode_of_slot(s);
            const auto p = mode_profile(n, y, L);
            cd v = h_plus_hat.c[s] * p.r1 + h_minus_hat.c[s] * p.r2 + j0_hat.c[s] * p.r3;
            if (n == 0) v += -J * y / L;
            line.c[s] = v;
        }
        auto vals = dft_inverse(line);
        for (int k = 0; k < grid.nx(); ++k) psi(k, m) = vals[k];
    }
    return psi;
}

// Full linearized solve: current inversion, stream function, and the field
// W = (0, A) + perp-grad psi with the y-derivative taken mode-analytically.
inline LinearSolution solve_linearized(const PeriodicGrid& grid, const BoundaryData& data) {
    const auto derived = derive_boundary(grid, data);
    const double L = grid.length();

    LinearSolution sol;
    auto [j0, J] = solve_linear_j0(derived.g_tilde_hat, L);
    sol.j0 = std::move(j0);
    sol.J = J;
    sol.psi = solve_linear_psi(grid, sol.j0, sol.J, derived.h_plus_hat, derived.h_minus_hat);

    auto j0_hat = dft_forward(sol.j0);
    sol.W = VectorField(grid);
    SpectralCoeffs dpsi(grid.nx());
    for (int m = 0; m < grid.ny(); ++m) {
        const double y = grid.y(m);
        for (int s = 0; s < grid.nx(); ++s) {
            const int n = dpsi.mode_of_slot(s);
            const auto p = mode_profile(n, y, L);
            cd v = derived.h_plus_hat.c[s] * p.d1 + derived.h_minus_hat.c[s] * p.d2 + j0_hat.c[s] * p.d3;
            if (n == 0) v += -sol.J / L;
            dpsi.c[s] = v;
        }
        auto w1 = dft_inverse(dpsi);
        for (int k = 0; k < grid.nx(); ++k) sol.W.c1(k, m) = -w1[k];
    }
    // W2 = A + d/dx psi, spectral per level.
    for (int m = 0; m < grid.ny(); ++m) {
        auto line = dft_forward(std::span<const double>(sol.psi.values.data() + static_cast<size_t>(m) * grid.nx(),
                                                        grid.nx()));
        auto w2 = dft_inverse(derivative_x(line));
        for (int k = 0; k < grid.nx(); ++k) sol.W.c2(k, m) = derived.A + w2[k];
    }
    return sol;
}

} // namespace gradrubin
