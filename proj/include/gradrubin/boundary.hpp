#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradrubin/grid.hpp"
#include "gradrubin/hyperbolic.hpp"
#include "gradrubin/spectral.hpp"

namespace gradrubin {

// Prescribed traces: f on both walls (normal datum), g on the inflow wall
// (tangential datum). All sampled on the x-node set.
struct BoundaryData {
    std::vector<double> f_plus;  // f on y = L
    std::vector<double> f_minus; // f on y = 0
    std::vector<double> g;       // tangential datum on y = 0

    // Monitored amplitude ||f|| + ||g|| compared against the smallness budget.
    double amplitude() const {
        double fn = 0.0, gn = 0.0;
        for (double v : f_plus) fn = std::max(fn, std::abs(v));
        for (double v : f_minus) fn = std::max(fn, std::abs(v));
        for (double v : g) gn = std::max(gn, std::abs(v));
        return fn + gn;
    }
};

// Everything derived from the traces: the common mean flux A, the wall
// antiderivatives h+-, the wall correction Z, the reduced datum g~ = -g - Z,
// and G = (inverse of the degenerate convolution) applied to g~.
struct DerivedBoundary {
    double A = 0.0;
    double mean_plus = 0.0;
    double mean_minus = 0.0;
    std::vector<double> h_plus;
    std::vector<double> h_minus;
    std::vector<double> Z;
    std::vector<double> g_tilde;
    std::vector<double> G;
    SpectralCoeffs h_plus_hat;
    SpectralCoeffs h_minus_hat;
    SpectralCoeffs g_tilde_hat;
    double amplitude = 0.0;     // ||f||_inf + ||g||_inf style monitor
    bool within_budget = true;  // amplitude <= configured smallness budget
};

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// The two wall means of f must agree (no net creation of vertical flux).
struct CompatibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Validates the shared-mean compatibility condition and returns the flux A.
inline double check_compatibility(const BoundaryData& data) {
    const double mp = mean_of(data.f_plus);
    const double mm = mean_of(data.f_minus);
    double norm = 0.0;
    for (double v : data.f_plus) norm = std::max(norm, std::abs(v));
    for (double v : data.f_minus) norm = std::max(norm, std::abs(v));
    if (std::abs(mp - mm) > 1e-12 * (1.0 + norm))
        throw CompatibilityError("boundary data incompatible: wall means of f differ by " +
                                 std::to_string(std::abs(mp - mm)));
    return 0.5 * (mp + mm);
}

// h(x) = int_0^x (f - A): spectral antiderivative of the mean-zero part,
// shifted so h(0) = 0. Periodic because the integrand is mean-zero.
inline std::vector<double> cumulative_trace(const std::vector<double>& f, double A) {
    auto fhat = dft_forward(f);
    fhat.mode(0) -= A;
    auto prim = antiderivative_x(fhat);
    auto vals = dft_inverse(prim);
    const double at0 = eval_modes(prim, 0.0);
    for (double& v : vals) v -= at0;
    return vals;
}

inline std::vector<double> compute_h(const std::vector<double>& f, double A) {
    return cumulative_trace(f, A);
}

// Z(n) = h+(n) |n|/sinh(|n|L) - h-(n) |n|/tanh(|n|L); both factors tend to 1/L.
inline SpectralCoeffs compute_Z_hat(const SpectralCoeffs& hp, const SpectralCoeffs& hm, double L) {
    SpectralCoeffs z(hp.nx);
    for (int s = 0; s < hp.nx; ++s) {
        const int n = z.mode_of_slot(s);
        z.c[s] = hp.c[s] * mult_over_sinh(n, L) - hm.c[s] * mult_over_tanh(n, L);
    }
    return z;
}

// G = multiplier R(n) = |n| sinh(|n|L)/(cosh(|n|L)-1) applied to g~, R(0) = 2/L.
inline SpectralCoeffs compute_G_hat(const SpectralCoeffs& g_tilde, double L) {
    SpectralCoeffs out(g_tilde.nx);
    for (int s = 0; s < g_tilde.nx; ++s)
        out.c[s] = g_tilde.c[s] * mult_R(out.mode_of_slot(s), L);
    return out;
}

// Forward counterpart of compute_G_hat (used by the inverse-identity checks).
inline SpectralCoeffs apply_T0_hat(const SpectralCoeffs& f, double L) {
    SpectralCoeffs out(f.nx);
    for (int s = 0; s < f.nx; ++s)
        out.c[s] = f.c[s] * mult_Q(out.mode_of_slot(s), L);
    return out;
}

inline DerivedBoundary derive_boundary(const PeriodicGrid& grid, const BoundaryData& data,
                                       double smallness_budget = 0.5) {
    const int nx = grid.nx();
    if (static_cast<int>(data.f_plus.size()) != nx || static_cast<int>(data.f_minus.size()) != nx ||
        static_cast<int>(data.g.size()) != nx)
        throw std::invalid_argument("derive_boundary: traces must be sampled on the x-grid");

    DerivedBoundary d;
    d.mean_plus = mean_of(data.f_plus);
    d.mean_minus = mean_of(data.f_minus);
    d.A = check_compatibility(data);
    d.h_plus = compute_h(data.f_plus, d.A);
    d.h_minus = compute_h(data.f_minus, d.A);
    d.h_plus_hat = dft_forward(d.h_plus);
    d.h_minus_hat = dft_forward(d.h_minus);

    const double L = grid.length();
    auto z_hat = compute_Z_hat(d.h_plus_hat, d.h_minus_hat, L);
    d.Z = dft_inverse(z_hat);

    d.g_tilde.resize(nx);
    for (int k = 0; k < nx; ++k) d.g_tilde[k] = -data.g[k] - d.Z[k];
    d.g_tilde_hat = dft_forward(d.g_tilde);
    d.G = dft_inverse(compute_G_hat(d.g_tilde_hat, L));

    d.amplitude = data.amplitude();
    d.within_budget = d.amplitude <= smallness_budget;
    return d;
}

// Render a trace from a sparse complex mode list: value = sum c(n) e^{inx} + c.c.
struct TraceMode {
    int n = 0;
    double re = 0.0;
    double im = 0.0;
};

inline std::vector<double> render_modes(const PeriodicGrid& grid, const std::vector<TraceMode>& modes) {
    std::vector<double> out(grid.nx(), 0.0);
    for (const auto& m : modes) {
        if (std::abs(m.n) > grid.max_mode())
            throw std::invalid_argument("render_modes: mode " + std::to_string(m.n) + " not resolvable");
        if (m.n == 0 && m.im != 0.0)
            throw std::invalid_argument("render_modes: mode 0 must be real");
        for (int k = 0; k < grid.nx(); ++k) {
            const double ph = m.n * grid.x(k);
            out[k] += (m.n == 0) ? m.re : 2.0 * (m.re * std::cos(ph) - m.im * std::sin(ph));
        }
    }
    return out;
}

} // namespace gradrubin
