#pragma once

#include <cmath>
#include <cstdlib>

namespace gradrubin {

// Hyperbolic-ratio multipliers in overflow-safe form. Every ratio is written
// with e^{-k(...)} scaling so that sinh/cosh of large arguments never appear;
// sinh(kL) overflows doubles already for kL around 710. All formulas take the
// k -> 0 limit built in, k = |n|.

// sinh(k a) / sinh(k b), 0 <= a <= b; k = 0 gives a/b.
inline double ratio_sinh_sinh(double k, double a, double b) {
    if (k == 0.0) return a / b;
    return std::exp(-k * (b - a)) * (1.0 - std::exp(-2.0 * k * a)) / (1.0 - std::exp(-2.0 * k * b));
}

// cosh(k a) / sinh(k b), 0 <= a <= b, k > 0 only.
inline double ratio_cosh_sinh(double k, double a, double b) {
    return std::exp(-k * (b - a)) * (1.0 + std::exp(-2.0 * k * a)) / (1.0 - std::exp(-2.0 * k * b));
}

// sinh(|n|(L-y)) / sinh(|n|L); n = 0 gives (L-y)/L.
inline double sinh_ratio_upper(int n, double y, double L) {
    return ratio_sinh_sinh(std::abs(n), L - y, L);
}

// M(n, y) = e^{-|n|y} - sinh(|n|(L-y))/sinh(|n|L)
//         = e^{-2|n|L}(e^{|n|y} - e^{-|n|y}) / (1 - e^{-2|n|L}).
// The n = 0 limit is y/L.
inline double kernel_M(int n, double y, double L) {
    const double k = std::abs(n);
    if (n == 0) return y / L;
    return std::exp(-k * (2.0 * L - y)) * (1.0 - std::exp(-2.0 * k * y)) / (1.0 - std::exp(-2.0 * k * L));
}

// Convolution symbol of the inflow-current kernel:
// Q(n) = (cosh(|n|L) - 1)/(|n| sinh(|n|L)) = tanh(|n|L/2)/|n|, Q(0) = L/2.
inline double mult_Q(int n, double L) {
    if (n == 0) return L / 2.0;
    const double k = std::abs(n);
    return std::tanh(k * L / 2.0) / k;
}

// Inverse symbol R(n) = 1/Q(n) = |n| coth(|n|L/2), R(0) = 2/L.
inline double mult_R(int n, double L) {
    if (n == 0) return 2.0 / L;
    const double k = std::abs(n);
    return k / std::tanh(k * L / 2.0);
}

// |n| / sinh(|n|L), limit 1/L at n = 0.
inline double mult_over_sinh(int n, double L) {
    if (n == 0) return 1.0 / L;
    const double k = std::abs(n);
    return 2.0 * k * std::exp(-k * L) / (1.0 - std::exp(-2.0 * k * L));
}

// |n| / tanh(|n|L), limit 1/L at n = 0.
inline double mult_over_tanh(int n, double L) {
    if (n == 0) return 1.0 / L;
    const double k = std::abs(n);
    return k * (1.0 + std::exp(-2.0 * k * L)) / (1.0 - std::exp(-2.0 * k * L));
}

// Per-mode vertical profiles of the homogeneous stream-function pieces and
// their y-derivatives: r1 multiplies the top Dirichlet datum, r2 the bottom
// one, r3 a y-independent right-hand side. The n = 0 columns are the analytic
// limits y/L, (L-y)/L and y(y-L)/2 of the hyperbolic ratios (re-derived from
// the n = 0 two-point problem; the naive limits printed elsewhere are not
// dimensionally consistent with it).
struct ModeProfile {
    double r1, r2, r3; // values
    double d1, d2, d3; // y-derivatives
};

inline ModeProfile mode_profile(int n, double y, double L) {
    ModeProfile p{};
    if (n == 0) {
        p.r1 = y / L;
        p.r2 = (L - y) / L;
        p.r3 = y * (y - L) / 2.0;
        p.d1 = 1.0 / L;
        p.d2 = -1.0 / L;
        p.d3 = (2.0 * y - L) / 2.0;
        return p;
    }
    const double k = std::abs(n);
    p.r1 = ratio_sinh_sinh(k, y, L);
    p.r2 = ratio_sinh_sinh(k, L - y, L);
    p.r3 = (p.r2 - 1.0 + p.r1) / (k * k);
    p.d1 = k * ratio_cosh_sinh(k, y, L);
    p.d2 = -k * ratio_cosh_sinh(k, L - y, L);
    p.d3 = (p.d2 + p.d1) / (k * k);
    return p;
}

// Dirichlet Green's function of d^2/dy^2 - n^2 on [0, L]:
//   G(n; y, y0) = -sinh(|n| y_<) sinh(|n|(L - y_>)) / (|n| sinh(|n| L)),
// n = 0 limit -y_< (L - y_>)/L. Unit jump of dG/dy across y = y0.
inline double greens_mode(int n, double y, double y0, double L) {
    const double lo = std::min(y, y0);
    const double hi = std::max(y, y0);
    if (n == 0) return -lo * (L - hi) / L;
    const double k = std::abs(n);
    return -std::exp(-k * (hi - lo)) * (1.0 - std::exp(-2.0 * k * lo)) *
           (1.0 - std::exp(-2.0 * k * (L - hi))) / (2.0 * k * (1.0 - std::exp(-2.0 * k * L)));
}

// d/dy of greens_mode at fixed y0 (two smooth branches away from y = y0).
inline double greens_mode_dy(int n, double y, double y0, double L) {
    if (n == 0) {
        return (y > y0) ? y0 / L : -(L - y0) / L;
    }
    const double k = std::abs(n);
    if (y > y0) {
        // +sinh(|n| y0) cosh(|n|(L-y)) / sinh(|n| L)
        return std::exp(-k * (y - y0)) * (1.0 - std::exp(-2.0 * k * y0)) *
               (1.0 + std::exp(-2.0 * k * (L - y))) / (2.0 * (1.0 - std::exp(-2.0 * k * L)));
    }
    // -cosh(|n| y) sinh(|n|(L-y0)) / sinh(|n| L)
    return -std::exp(-k * (y0 - y)) * (1.0 + std::exp(-2.0 * k * y)) *
           (1.0 - std::exp(-2.0 * k * (L - y0))) / (2.0 * (1.0 - std::exp(-2.0 * k * L)));
}

} // namespace gradrubin
