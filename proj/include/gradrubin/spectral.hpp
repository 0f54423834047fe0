#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "gradrubin/grid.hpp"

namespace gradrubin {

using cd = std::complex<double>;

// Fourier coefficients of a periodic nodal line, slot-ordered
// [0, 1, ..., Nx/2-1, -Nx/2, ..., -1]. Convention:
//   coeff(n) = (1/Nx) sum_k values_k e^{-i n x_k},   values_k = sum_n coeff(n) e^{i n x_k}.
struct SpectralCoeffs {
    SpectralCoeffs() = default;
    explicit SpectralCoeffs(int nx_) : nx(nx_), c(nx_, cd(0.0, 0.0)) {}

    cd& slot(int s) { return c[s]; }
    cd slot(int s) const { return c[s]; }
    cd& mode(int n) { return c[n >= 0 ? n : n + nx]; }
    cd mode(int n) const { return c[n >= 0 ? n : n + nx]; }
    int mode_of_slot(int s) const { return s < nx / 2 ? s : s - nx; }

    int nx = 0;
    std::vector<cd> c;
};

namespace detail {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 transform, in place; sign = -1 forward, +1 inverse (unscaled).
inline void fft_radix2(std::vector<cd>& a, int sign) {
    const int n = static_cast<int>(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * two_pi / len;
        const cd wlen(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            cd w(1.0, 0.0);
            for (int j = 0; j < len / 2; ++j) {
                cd u = a[i + j];
                cd v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

inline void dft_direct(const std::vector<cd>& in, std::vector<cd>& out, int sign) {
    const int n = static_cast<int>(in.size());
    out.assign(n, cd(0.0, 0.0));
    for (int s = 0; s < n; ++s) {
        cd acc(0.0, 0.0);
        const double ang0 = sign * two_pi * s / n;
        const cd w(std::cos(ang0), std::sin(ang0));
        cd ph(1.0, 0.0);
        for (int k = 0; k < n; ++k) {
            acc += in[k] * ph;
            ph *= w;
        }
        out[s] = acc;
    }
}

inline void transform(std::vector<cd>& a, int sign) {
    if (is_pow2(static_cast<int>(a.size()))) {
        fft_radix2(a, sign);
    } else {
        std::vector<cd> out;
        dft_direct(a, out, sign);
        a.swap(out);
    }
}

} // namespace detail

inline SpectralCoeffs dft_forward(std::span<const double> values) {
    const int n = static_cast<int>(values.size());
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("dft_forward: length must be even and >= 2");
    std::vector<cd> a(values.begin(), values.end());
    detail::transform(a, -1);
    SpectralCoeffs out(n);
    for (int s = 0; s < n; ++s) out.c[s] = a[s] / static_cast<double>(n);
    return out;
}

inline SpectralCoeffs dft_forward(const std::vector<double>& values) {
    return dft_forward(std::span<const double>(values));
}

inline std::vector<cd> dft_inverse_complex(const SpectralCoeffs& f) {
    std::vector<cd> a = f.c;
    detail::transform(a, +1);
    return a;
}

// Inverse transform of a conjugate-symmetric coefficient set; returns nodal reals.
inline std::vector<double> dft_inverse(const SpectralCoeffs& f) {
    std::vector<cd> a = dft_inverse_complex(f);
    std::vector<double> out(a.size());
    for (size_t k = 0; k < a.size(); ++k) out[k] = a[k].real();
    return out;
}

// Periodic Hilbert transform, multiplier -i sgn(n); the mean is annihilated.
inline SpectralCoeffs hilbert_transform(const SpectralCoeffs& f) {
    SpectralCoeffs out(f.nx);
    for (int s = 0; s < f.nx; ++s) {
        const int n = f.mode_of_slot(s);
        const double sg = (n > 0) - (n < 0);
        out.c[s] = cd(0.0, -sg) * f.c[s];
    }
    return out;
}

// Mean-zero antiderivative in x: multiplier 1/(i n) for n != 0, zero on the
// mean and on the unmatched -Nx/2 mode (odd multipliers zero the Nyquist slot
// so that real fields stay real).
inline SpectralCoeffs antiderivative_x(const SpectralCoeffs& f) {
    SpectralCoeffs out(f.nx);
    for (int s = 0; s < f.nx; ++s) {
        const int n = f.mode_of_slot(s);
        if (n == 0 || n == -f.nx / 2) continue;
        out.c[s] = f.c[s] / cd(0.0, static_cast<double>(n));
    }
    return out;
}

inline SpectralCoeffs derivative_x(const SpectralCoeffs& f) {
    SpectralCoeffs out(f.nx);
    for (int s = 0; s < f.nx; ++s) {
        const int n = f.mode_of_slot(s);
        if (n == -f.nx / 2) continue;
        out.c[s] = f.c[s] * cd(0.0, static_cast<double>(n));
    }
    return out;
}

// Evaluate a coefficient line at arbitrary x assuming conjugate symmetry.
// The Nyquist slot contributes coeff * cos(Nx/2 * x).
inline double eval_modes(const SpectralCoeffs& f, double x) {
    const int nh = f.nx / 2;
    const cd eix(std::cos(x), std::sin(x));
    cd ph = eix;
    double acc = f.c[0].real();
    for (int n = 1; n < nh; ++n) {
        const cd& cn = f.c[n];
        acc += 2.0 * (cn.real() * ph.real() - cn.imag() * ph.imag());
        ph *= eix;
    }
    acc += f.c[nh].real() * std::cos(nh * x);
    return acc;
}

namespace detail {

// Not-a-knot cubic spline on a uniform grid; stores second derivatives.
// Exact on cubic data, O(h^4) on smooth data.
template <typename T>
struct UniformSpline {
    UniformSpline() = default;
    UniformSpline(std::span<const T> f, double h_) : h(h_), vals(f.begin(), f.end()) {
        const int n = static_cast<int>(vals.size());
        if (n < 4) throw std::invalid_argument("UniformSpline: need at least 4 nodes");
        m2.assign(n, T{});
        const double ih2 = 1.0 / (h * h);
        auto d2 = [&](int i) { return (vals[i - 1] - 2.0 * vals[i] + vals[i + 1]) * ih2; };
        // Not-a-knot collapses the first and last interior rows.
        m2[1] = d2(1);
        m2[n - 2] = d2(n - 2);
        if (n > 5) {
            // Thomas sweep for rows 2 .. n-3 with known end values.
            const int m = n - 4; // unknowns m2[2..n-3]
            std::vector<double> diag(m, 4.0);
            std::vector<T> rhs(m);
            for (int i = 0; i < m; ++i) rhs[i] = d2(i + 2) * 6.0;
            rhs[0] -= m2[1];
            rhs[m - 1] -= m2[n - 2];
            for (int i = 1; i < m; ++i) {
                const double w = 1.0 / diag[i - 1];
                diag[i] -= w;
                rhs[i] -= rhs[i - 1] * w;
            }
            m2[2 + m - 1] = rhs[m - 1] * (1.0 / diag[m - 1]);
            for (int i = m - 2; i >= 0; --i)
                m2[2 + i] = (rhs[i] - m2[2 + i + 1]) * (1.0 / diag[i]);
        } else if (n == 5) {
            m2[2] = (d2(2) * 6.0 - m2[1] - m2[3]) / 4.0;
        }
        m2[0] = 2.0 * m2[1] - m2[2];
        m2[n - 1] = 2.0 * m2[n - 2] - m2[n - 3];
    }

    T eval(double t) const {
        const int n = static_cast<int>(vals.size());
        int i = static_cast<int>(std::floor(t / h));
        i = std::clamp(i, 0, n - 2);
        const double a = (h * (i + 1) - t) / h;
        const double b = 1.0 - a;
        return a * vals[i] + b * vals[i + 1] +
               ((a * a * a - a) * m2[i] + (b * b * b - b) * m2[i + 1]) * (h * h / 6.0);
    }

    double h = 0.0;
    std::vector<T> vals;
    std::vector<T> m2;
};

} // namespace detail

// Trigonometric interpolation in x composed with cubic-spline interpolation in y.
// Built once per field; evaluation is a spline combine per mode plus a mode sum.
class FieldInterpolant {
public:
    FieldInterpolant() = default;

    FieldInterpolant(const PeriodicGrid& g, const ScalarField& f) : grid_(g) {
        require_matching(g, f, "FieldInterpolant");
        const int nx = g.nx();
        const int ny = g.ny();
        std::vector<SpectralCoeffs> levels(ny);
        for (int m = 0; m < ny; ++m)
            levels[m] = dft_forward(std::span<const double>(f.values.data() + static_cast<size_t>(m) * nx, nx));
        splines_.reserve(nx);
        std::vector<cd> col(ny);
        for (int s = 0; s < nx; ++s) {
            for (int m = 0; m < ny; ++m) col[m] = levels[m].c[s];
            splines_.emplace_back(std::span<const cd>(col), g.dy());
        }
    }

    // Effective coefficient line at height y (spline in y applied to every mode).
    SpectralCoeffs coeff_line(double y) const {
        check_y(y);
        SpectralCoeffs out(grid_.nx());
        for (int s = 0; s < grid_.nx(); ++s) out.c[s] = splines_[s].eval(y);
        return out;
    }

    double eval(double x, double y) const {
        check_y(y);
        SpectralCoeffs line(grid_.nx());
        for (int s = 0; s < grid_.nx(); ++s) line.c[s] = splines_[s].eval(y);
        return eval_modes(line, x);
    }

    const PeriodicGrid& grid() const { return grid_; }

private:
    void check_y(double y) const {
        const double slack = 1e-12 * (1.0 + grid_.length());
        if (y < -slack || y > grid_.length() + slack)
            throw std::domain_error("interpolate: y outside [0, L]");
    }

    PeriodicGrid grid_{4, 8, 1.0};
    std::vector<detail::UniformSpline<cd>> splines_;
};

inline double interpolate(const PeriodicGrid& g, const ScalarField& f, double x, double y) {
    return FieldInterpolant(g, f).eval(x, y);
}

enum class Axis { X, Y };

namespace detail {

// Fornberg weights for the first derivative at x0 from the given nodes.
inline std::vector<double> fornberg_d1(std::span<const double> nodes, double x0) {
    const int n = static_cast<int>(nodes.size());
    std::vector<double> c1(n * 2, 0.0); // columns: derivative order 0 and 1
    auto C = [&](int i, int m) -> double& { return c1[i * 2 + m]; };
    double c_prev = 1.0;
    C(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        double c_cur = 1.0;
        for (int j = 0; j < i; ++j) c_cur *= (nodes[i] - nodes[j]);
        for (int j = i - 1; j >= 0; --j) {
            const double dx = nodes[i] - nodes[j];
            if (j == i - 1) {
                C(i, 1) = c_prev * (C(i - 1, 0) - (nodes[i - 1] - x0) * C(i - 1, 1)) / c_cur;
                C(i, 0) = -c_prev * (nodes[i - 1] - x0) * C(i - 1, 0) / c_cur;
            }
            C(j, 1) = ((nodes[i] - x0) * C(j, 1) - C(j, 0)) / dx;
            C(j, 0) = (nodes[i] - x0) * C(j, 0) / dx;
        }
        c_prev = c_cur;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = C(i, 1);
    return w;
}

} // namespace detail

// First-derivative operator in y on the uniform node set, 6th order
// (7-point stencils, one-sided at the walls). Rows are precomputed once.
class DerivativeY {
public:
    explicit DerivativeY(const PeriodicGrid& g) : ny_(g.ny()), h_(g.dy()) {
        const int w = 7;
        rows_.resize(ny_);
        starts_.resize(ny_);
        std::vector<double> nodes(w);
        for (int m = 0; m < ny_; ++m) {
            int s = std::clamp(m - w / 2, 0, ny_ - w);
            starts_[m] = s;
            for (int i = 0; i < w; ++i) nodes[i] = (s + i) * h_;
            rows_[m] = detail::fornberg_d1(nodes, m * h_);
        }
    }

    // Derivative of one y-column given a strided view of the field.
    template <typename Get>
    void apply_column(Get&& value_at, std::vector<double>& out) const {
        out.resize(ny_);
        for (int m = 0; m < ny_; ++m) {
            const auto& r = rows_[m];
            double acc = 0.0;
            for (size_t i = 0; i < r.size(); ++i) acc += r[i] * value_at(starts_[m] + static_cast<int>(i));
            out[m] = acc;
        }
    }

private:
    int ny_;
    double h_;
    std::vector<std::vector<double>> rows_;
    std::vector<int> starts_;
};

// Partial derivative of a grid field: spectral in x (Nyquist zeroed),
// 6th-order finite differences in y.
inline ScalarField differentiate(const PeriodicGrid& g, const ScalarField& f, Axis axis) {
    require_matching(g, f, "differentiate");
    ScalarField out(g);
    if (axis == Axis::X) {
        for (int m = 0; m < g.ny(); ++m) {
            auto line = dft_forward(std::span<const double>(f.values.data() + static_cast<size_t>(m) * g.nx(), g.nx()));
            auto vals = dft_inverse(derivative_x(line));
            std::copy(vals.begin(), vals.end(), out.values.begin() + static_cast<size_t>(m) * g.nx());
        }
    } else {
        DerivativeY dy(g);
        std::vector<double> col;
        for (int k = 0; k < g.nx(); ++k) {
            dy.apply_column([&](int m) { return f(k, m); }, col);
            for (int m = 0; m < g.ny(); ++m) out(k, m) = col[m];
        }
    }
    return out;
}

} // namespace gradrubin
