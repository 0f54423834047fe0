#include <doctest.h>

#include <cmath>
#include <vector>

#include "gradrubin/boundary.hpp"
#include "gradrubin/grid.hpp"
#include "gradrubin/linear_solver.hpp"
#include "gradrubin/spectral.hpp"

using namespace gradrubin;

namespace {

// Forward convolution T j0 (multiplier -Q(n)), the operator the inversion
// must round-trip. Kept independent of the solver path.
std::vector<double> apply_forward_kernel(const std::vector<double>& j0, double L) {
    auto j0_hat = dft_forward(j0);
    SpectralCoeffs out(j0_hat.nx);
    for (int s = 0; s < j0_hat.nx; ++s)
        out.c[s] = -mult_Q(out.mode_of_slot(s), L) * j0_hat.c[s];
    return dft_inverse(out);
}

BoundaryData zero_data(const PeriodicGrid& g) {
    return {std::vector<double>(g.nx(), 0.0), std::vector<double>(g.nx(), 0.0),
            std::vector<double>(g.nx(), 0.0)};
}

} // namespace

TEST_CASE("linear j0 inversion: trivial and forward round trip") {
    PeriodicGrid g(32, 9, 1.0);
    SpectralCoeffs zero(g.nx());
    auto [j0, J] = solve_linear_j0(zero, g.length());
    for (double v : j0) CHECK(std::abs(v) < 1e-14);
    CHECK(J == 0.0);

    // g~ = cos x at L = 1: j0 = -[sinh 1/(cosh 1 - 1)] cos x, and the forward
    // kernel applied to it returns cos x (round trip pins the sign).
    std::vector<double> gt(g.nx());
    for (int k = 0; k < g.nx(); ++k) gt[k] = std::cos(g.x(k));
    auto [j0c, Jc] = solve_linear_j0(dft_forward(gt), 1.0);
    const double amp = std::sinh(1.0) / (std::cosh(1.0) - 1.0);
    for (int k = 0; k < g.nx(); ++k)
        CHECK(j0c[k] == doctest::Approx(-amp * std::cos(g.x(k))).epsilon(1e-12));
    auto round = apply_forward_kernel(j0c, 1.0);
    for (int k = 0; k < g.nx(); ++k)
        CHECK(round[k] == doctest::Approx(gt[k] + Jc / 1.0).epsilon(1e-12));

    double mean = 0.0;
    for (double v : j0c) mean += v;
    CHECK(std::abs(mean / g.nx()) < 1e-13);
}

TEST_CASE("linear flux J for constant tangential datum") {
    // f = 0, g = -1: the solution is x-independent with psi = y, so the flux
    // is J = -L. (Equivalently J = L g(0) + (h+(0) - h-(0)); the sign is
    // pinned by the forward round trip T j0 = g~ + J/L, not taken on faith.)
    PeriodicGrid g(32, 17, 1.7);
    BoundaryData d = zero_data(g);
    for (auto& v : d.g) v = -1.0;
    auto derived = derive_boundary(g, d);
    auto [j0, J] = solve_linear_j0(derived.g_tilde_hat, g.length());
    CHECK(J == doctest::Approx(-g.length()).epsilon(1e-13));
    for (double v : j0) CHECK(std::abs(v) < 1e-13);

    auto sol = solve_linearized(g, d);
    // W = (-1, 0): tangential condition met on the inflow wall.
    for (int m = 0; m < g.ny(); ++m)
        for (int k = 0; k < g.nx(); ++k) {
            CHECK(sol.W.c1(k, m) == doctest::Approx(-1.0).epsilon(1e-12));
            CHECK(std::abs(sol.W.c2(k, m)) < 1e-12);
        }
}

TEST_CASE("mode stream profiles: n = 0 limits") {
    PeriodicGrid g(16, 33, 1.4);
    const double L = g.length();

    // Constant current c, zero boundary data: psi(0, y) = c y(y - L)/2.
    std::vector<double> j0(g.nx(), 0.7);
    SpectralCoeffs zero(g.nx());
    auto psi = solve_linear_psi(g, j0, 0.0, zero, zero);
    for (int m = 0; m < g.ny(); ++m) {
        const double y = g.y(m);
        CHECK(psi(3, m) == doctest::Approx(0.7 * y * (y - L) / 2.0).epsilon(1e-12));
    }

    // Mean mode in h- only: psi(0, y) = b (L - y)/L.
    SpectralCoeffs hm(g.nx());
    hm.mode(0) = 0.4;
    auto psi2 = solve_linear_psi(g, std::vector<double>(g.nx(), 0.0), 0.0, zero, hm);
    for (int m = 0; m < g.ny(); ++m)
        CHECK(psi2(0, m) == doctest::Approx(0.4 * (L - g.y(m)) / L).epsilon(1e-12));

    // Homogeneous single mode: n = 2 Dirichlet datum decays as sinh(2(L-y))/sinh(2L).
    SpectralCoeffs hm3(g.nx());
    hm3.mode(2) = 0.5;
    hm3.mode(-2) = 0.5;
    auto psi3 = solve_linear_psi(g, std::vector<double>(g.nx(), 0.0), 0.0, zero, hm3);
    for (int m = 0; m < g.ny(); ++m) {
        const double expect = std::cos(2.0 * g.x(1)) * std::sinh(2.0 * (L - g.y(m))) / std::sinh(2.0 * L);
        CHECK(psi3(1, m) == doctest::Approx(expect).epsilon(1e-11));
    }
}

TEST_CASE("full linearized solve: trivial data") {
    PeriodicGrid g(32, 17, 1.0);
    auto sol = solve_linearized(g, zero_data(g));
    CHECK(sol.W.sup_norm() < 1e-14);
    CHECK(sol.psi.sup_norm() < 1e-14);
    CHECK(std::abs(sol.J) < 1e-14);
}

TEST_CASE("full linearized solve: boundary rows and closure") {
    PeriodicGrid g(64, 129, 1.0);
    const double eps = 1e-2;

    // Normal datum only: Dirichlet rows exact, checked through W.n = A + dpsi/dx.
    BoundaryData d = zero_data(g);
    for (int k = 0; k < g.nx(); ++k) {
        d.f_plus[k] = eps * std::cos(g.x(k));
        d.f_minus[k] = eps * std::cos(g.x(k));
    }
    auto sol = solve_linearized(g, d);
    for (int k = 0; k < g.nx(); ++k) {
        CHECK(std::abs(sol.W.c2(k, 0) - d.f_minus[k]) < 1e-10 * eps);
        CHECK(std::abs(sol.W.c2(k, g.ny() - 1) - d.f_plus[k]) < 1e-10 * eps);
    }
    // psi wall rows against the data themselves.
    auto derived = derive_boundary(g, d);
    for (int k = 0; k < g.nx(); ++k) {
        CHECK(sol.psi(k, 0) == doctest::Approx(derived.h_minus[k]).epsilon(1e-12));
        CHECK(sol.psi(k, g.ny() - 1) == doctest::Approx(-sol.J + derived.h_plus[k]).epsilon(1e-12));
    }

    // Tangential datum only: the over-determined fourth row is the defining
    // property of the inversion; the assembled field returns it spectrally.
    BoundaryData t = zero_data(g);
    for (int k = 0; k < g.nx(); ++k) t.g[k] = eps * std::cos(g.x(k));
    auto sol2 = solve_linearized(g, t);
    for (int k = 0; k < g.nx(); ++k)
        CHECK(std::abs(sol2.W.c1(k, 0) - t.g[k]) <= 1e-8 * eps);
}

TEST_CASE("linearized solution: div, curl, linearity") {
    PeriodicGrid g(32, 129, 1.0);
    BoundaryData d = zero_data(g);
    for (int k = 0; k < g.nx(); ++k) {
        d.f_plus[k] = 0.3 * std::cos(g.x(k));
        d.f_minus[k] = 0.3 * std::cos(g.x(k)) + 0.2 * std::sin(2.0 * g.x(k));
        d.g[k] = 0.25 * std::sin(g.x(k));
    }
    auto sol = solve_linearized(g, d);

    auto w1x = differentiate(g, sol.W.c1, Axis::X);
    auto w2y = differentiate(g, sol.W.c2, Axis::Y);
    double div_sup = 0.0;
    for (size_t i = 0; i < w1x.values.size(); ++i)
        div_sup = std::max(div_sup, std::abs(w1x.values[i] + w2y.values[i]));
    CHECK(div_sup <= 1e-10 * sol.W.sup_norm());

    auto w2x = differentiate(g, sol.W.c2, Axis::X);
    auto w1y = differentiate(g, sol.W.c1, Axis::Y);
    double curl_err = 0.0;
    for (int m = 0; m < g.ny(); ++m)
        for (int k = 0; k < g.nx(); ++k)
            curl_err = std::max(curl_err, std::abs(w2x(k, m) - w1y(k, m) - sol.j0[k]));
    CHECK(curl_err < 1e-8);

    // Additivity in the data pair.
    BoundaryData d1 = zero_data(g), d2 = zero_data(g);
    for (int k = 0; k < g.nx(); ++k) {
        d1.f_plus[k] = d1.f_minus[k] = 0.1 * std::cos(g.x(k));
        d2.g[k] = 0.2 * std::sin(g.x(k));
    }
    BoundaryData both = zero_data(g);
    for (int k = 0; k < g.nx(); ++k) {
        both.f_plus[k] = d1.f_plus[k];
        both.f_minus[k] = d1.f_minus[k];
        both.g[k] = d2.g[k];
    }
    auto s1 = solve_linearized(g, d1);
    auto s2 = solve_linearized(g, d2);
    auto sb = solve_linearized(g, both);
    double lin_err = std::abs(sb.J - s1.J - s2.J);
    for (size_t i = 0; i < sb.W.c1.values.size(); ++i) {
        lin_err = std::max(lin_err, std::abs(sb.W.c1.values[i] - s1.W.c1.values[i] - s2.W.c1.values[i]));
        lin_err = std::max(lin_err, std::abs(sb.W.c2.values[i] - s1.W.c2.values[i] - s2.W.c2.values[i]));
    }
    CHECK(lin_err < 1e-12);
}
