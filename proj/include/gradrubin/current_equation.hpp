#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "gradrubin/boundary.hpp"
#include "gradrubin/flow_map.hpp"
#include "gradrubin/grid.hpp"
#include "gradrubin/hyperbolic.hpp"
#include "gradrubin/linalg.hpp"
#include "gradrubin/quadrature.hpp"
#include "gradrubin/spectral.hpp"

namespace gradrubin {

// Fourier coefficients of the inflow-current kernel,
//   a(n, eta) = int_0^L sinh(n(L-y))/sinh(nL) e^{-in Lambda(eta,y)} DX(eta,y) dy,
// split into the convolution part a0(n) (integrated in closed form) and the
// perturbation a1(n, eta) = a(n, eta) - a0(n). a1 is quadratured from the
// difference integrand directly, so it vanishes identically at b = 0. The
// four pieces p1..p4 refine a1 by weight:
//   p1, p3: factor (e^{-in Lambda} - 1) DX against e^{-|n|y} resp. -M(n, y),
//   p2, p4: factor (1 - DX)            against -e^{-|n|y} resp. +M(n, y),
// and p1 + p2 + p3 + p4 = a1 holds exactly node by node.
struct KernelCoefficients {
    int nx = 0;
    int n_max = 0;
    double L = 0.0;
    std::vector<double> a0;          // size n_max+1, even in n
    std::vector<cd> a1;              // (n, eta): a1[n*nx + j], n = 0..n_max
    std::vector<cd> piece[4];
    double tail_magnitude = 0.0;     // max_eta |a1(n_max, eta)|, truncation report

    cd a1_at(int n, int j) const {
        const cd v = a1[static_cast<size_t>(std::abs(n)) * nx + j];
        return n >= 0 ? v : std::conj(v);
    }
    cd a_at(int n, int j) const { return a0[std::abs(n)] + a1_at(n, j); }
    cd piece_at(int i, int n, int j) const {
        const cd v = piece[i][static_cast<size_t>(std::abs(n)) * nx + j];
        return n >= 0 ? v : std::conj(v);
    }
};

// M(n, y) = e^{-|n|y} - sinh(|n|(L-y))/sinh(|n|L); see kernel_M for the
// closed form and the y/L limit at n = 0.
inline double compute_M(int n, double y, double L) { return kernel_M(n, y, L); }

inline KernelCoefficients assemble_kernel(const CharacteristicSolution& chars, int n_max) {
    const PeriodicGrid& grid = chars.grid;
    const int nx = grid.nx();
    if (n_max < 1 || n_max > nx / 2)
        throw std::invalid_argument("assemble_kernel: n_max out of range");

    KernelCoefficients ker;
    ker.nx = nx;
    ker.n_max = n_max;
    ker.L = grid.length();
    ker.a0.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) ker.a0[n] = mult_Q(n, ker.L);
    const size_t cnt = static_cast<size_t>(n_max + 1) * nx;
    ker.a1.assign(cnt, cd(0.0, 0.0));
    for (auto& p : ker.piece) p.assign(cnt, cd(0.0, 0.0));

    const int nf = chars.n_fine;
    const double h = chars.fine_dy();
    const auto w = composite_weights(nf, h);

    // Profiles over the refined levels: E = e^{-n y}, s = sinh ratio, M = E - s.
    std::vector<double> Ey(nf), sy(nf);
    for (int n = 0; n <= n_max; ++n) {
        for (int l = 0; l < nf; ++l) {
            const double y = l * h;
            Ey[l] = std::exp(-static_cast<double>(n) * y);
            sy[l] = sinh_ratio_upper(n, y, ker.L);
        }
        for (int j = 0; j < nx; ++j) {
            cd acc_a1(0.0, 0.0), acc_p1(0.0, 0.0), acc_p2(0.0, 0.0), acc_p3(0.0, 0.0), acc_p4(0.0, 0.0);
            for (int l = 0; l < nf; ++l) {
                const double lam = chars.X_fine[static_cast<size_t>(l) * nx + j] - grid.x(j);
                const double dxv = chars.DX_fine[static_cast<size_t>(l) * nx + j];
                const double ang = -static_cast<double>(n) * lam;
                const cd ph(std::cos(ang), std::sin(ang));
                const double Mv = Ey[l] - sy[l];
                const cd osc = (ph - 1.0) * dxv;
                const double jac = 1.0 - dxv;
                acc_a1 += w[l] * sy[l] * (ph * dxv - 1.0);
                acc_p1 += w[l] * Ey[l] * osc;
                acc_p2 -= w[l] * Ey[l] * jac;
                acc_p3 -= w[l] * Mv * osc;
                acc_p4 += w[l] * Mv * jac;
            }
            const size_t idx = static_cast<size_t>(n) * nx + j;
            ker.a1[idx] = acc_a1;
            ker.piece[0][idx] = acc_p1;
            ker.piece[1][idx] = acc_p2;
            ker.piece[2][idx] = acc_p3;
            ker.piece[3][idx] = acc_p4;
        }
    }
    for (const auto& v : ker.a1)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::runtime_error("kernel error: quadrature produced non-finite coefficients");
    for (int j = 0; j < nx; ++j)
        ker.tail_magnitude = std::max(ker.tail_magnitude, std::abs(ker.a1[static_cast<size_t>(n_max) * nx + j]));
    return ker;
}

// Collocated system for (j0, J): rows 0..Nx-1 discretize
//   (T j0)(x_k) - J/L = g~(x_k)
// with the convolution part acting as an exact multiplier (circulant of -Q)
// and the a1 part summed over modes |n| <= n_max; the last row is the
// uni-valued-pressure constraint mean(j0 (1 + f-)) = 0.
struct CurrentSystem {
    DenseMatrix matrix;
    std::vector<double> rhs;
    DenseMatrix a1_block;  // the collocated perturbation alone (diagnostics)
    double L = 0.0;
    int nx = 0;
};

namespace detail {

// Collocation of a mode table t(n, eta_j), n = 0..n_max with conjugate
// symmetry, against e^{in(x_k - eta_j)}, scaled by -1/Nx; optionally with an
// extra even multiplier mult(n).
template <typename Table, typename Mult>
DenseMatrix collocate_modes(const PeriodicGrid& grid, int n_max, Table&& t, Mult&& mult) {
    const int nx = grid.nx();
    DenseMatrix out(nx, nx);
    for (int k = 0; k < nx; ++k)
        for (int j = 0; j < nx; ++j) {
            const double dxe = grid.x(k) - grid.x(j);
            double acc = mult(0) * t(0, j).real();
            for (int n = 1; n <= n_max; ++n) {
                const cd ph(std::cos(n * dxe), std::sin(n * dxe));
                acc += 2.0 * mult(n) * (t(n, j) * ph).real();
            }
            out(k, j) = -acc / nx;
        }
    return out;
}

} // namespace detail

inline CurrentSystem assemble_system(const KernelCoefficients& ker, const PeriodicGrid& grid,
                                     const std::vector<double>& g_tilde,
                                     const std::vector<double>& f_minus) {
    const int nx = grid.nx();
    if (ker.nx != nx) throw std::invalid_argument("assemble_system: kernel/grid mismatch");
    if (static_cast<int>(g_tilde.size()) != nx || static_cast<int>(f_minus.size()) != nx)
        throw std::invalid_argument("assemble_system: trace length mismatch");
    for (const auto& v : ker.a1)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::runtime_error("assemble_system: kernel quadrature produced non-finite values");

    CurrentSystem sys;
    sys.L = ker.L;
    sys.nx = nx;
    sys.matrix = DenseMatrix(nx + 1, nx + 1);
    sys.rhs.assign(nx + 1, 0.0);

    // First row of the circulant of the multiplier -Q(n), full mode set.
    std::vector<double> c0(nx, 0.0);
    for (int r = 0; r < nx; ++r) {
        double acc = mult_Q(0, ker.L);
        for (int n = 1; n < nx / 2; ++n) acc += 2.0 * mult_Q(n, ker.L) * std::cos(n * r * grid.dx());
        acc += mult_Q(nx / 2, ker.L) * ((r % 2 == 0) ? 1.0 : -1.0);
        c0[r] = -acc / nx;
    }

    sys.a1_block = detail::collocate_modes(grid, ker.n_max,
                                           [&](int n, int j) { return ker.a1[static_cast<size_t>(n) * nx + j]; },
                                           [](int) { return 1.0; });

    for (int k = 0; k < nx; ++k) {
        for (int j = 0; j < nx; ++j)
            sys.matrix(k, j) = c0[(k - j + nx) % nx] + sys.a1_block(k, j);
        sys.matrix(k, nx) = -1.0 / ker.L;
        sys.rhs[k] = g_tilde[k];
    }
    for (int j = 0; j < nx; ++j) sys.matrix(nx, j) = (1.0 + f_minus[j]) / nx;
    sys.matrix(nx, nx) = 0.0;
    sys.rhs[nx] = 0.0;
    return sys;
}

struct CurrentSolution {
    std::vector<double> j0;
    double J = 0.0;
    struct Diagnostics {
        double residual_sup = 0.0;       // collocation rows
        double constraint_residual = 0.0;
        double condition_estimate = 0.0;
        bool ill_conditioned = false;
        double kernel_tail = 0.0;
        double upsilon_norm = -1.0;      // filled by the caller when assembled
    } diagnostics;
};

inline CurrentSolution solve_current(const CurrentSystem& sys) {
    const int nx = sys.nx;
    LuSolver lu(sys.matrix);
    auto u = lu.solve(sys.rhs);

    CurrentSolution sol;
    sol.j0.assign(u.begin(), u.begin() + nx);
    sol.J = u[nx];

    auto r = sys.matrix.apply(u);
    for (int k = 0; k < nx; ++k)
        sol.diagnostics.residual_sup = std::max(sol.diagnostics.residual_sup, std::abs(r[k] - sys.rhs[k]));
    sol.diagnostics.constraint_residual = std::abs(r[nx] - sys.rhs[nx]);
    sol.diagnostics.condition_estimate = condition_estimate_1(sys.matrix, lu);
    sol.diagnostics.ill_conditioned = sol.diagnostics.condition_estimate > 1e12;
    return sol;
}

// Action of the i-th mean-free perturbation operator (i in 0..3 for T1..T4):
// the piece kernel collocated and pushed through the inverse multiplier R(n).
inline std::vector<double> apply_T_i(const KernelCoefficients& ker, const PeriodicGrid& grid, int i,
                                     const std::vector<double>& j0) {
    if (i < 0 || i > 3) throw std::invalid_argument("apply_T_i: index must be 0..3");
    const int nx = grid.nx();
    auto mat = detail::collocate_modes(grid, ker.n_max,
                                       [&](int n, int j) { return ker.piece[i][static_cast<size_t>(n) * nx + j]; },
                                       [&](int n) { return mult_R(n, ker.L); });
    return mat.apply(j0);
}

// The contraction block of the Fredholm form: Upsilon = (P - <P .>) - <. f->
// with P the a1 collocation pushed through R(n).
inline DenseMatrix upsilon_matrix(const KernelCoefficients& ker, const PeriodicGrid& grid,
                                  const std::vector<double>& f_minus) {
    const int nx = grid.nx();
    auto P = detail::collocate_modes(grid, ker.n_max,
                                     [&](int n, int j) { return ker.a1[static_cast<size_t>(n) * nx + j]; },
                                     [&](int n) { return mult_R(n, ker.L); });
    DenseMatrix ups(nx, nx);
    for (int j = 0; j < nx; ++j) {
        double colmean = 0.0;
        for (int k = 0; k < nx; ++k) colmean += P(k, j);
        colmean /= nx;
        for (int k = 0; k < nx; ++k) ups(k, j) = P(k, j) - colmean - f_minus[j] / nx;
    }
    return ups;
}

struct NeumannReport {
    double norm = 0.0;            // sup-norm induced estimate of ||Upsilon||
    int sweeps = 0;
    double final_error = 0.0;     // sup distance of the iterates to j0_direct
    bool contractive = false;
    std::vector<double> errors;   // per-sweep history
};

// Neumann-series diagnostic for the fixed-point form
//   j0 = Upsilon j0 - (G - <G>);
// iterates are compared against the direct augmented solve.
inline NeumannReport neumann_diagnostic(const KernelCoefficients& ker, const PeriodicGrid& grid,
                                        const std::vector<double>& G, const std::vector<double>& f_minus,
                                        const std::vector<double>& j0_direct, int max_sweeps = 20) {
    const int nx = grid.nx();
    auto ups = upsilon_matrix(ker, grid, f_minus);

    NeumannReport rep;
    rep.norm = ups.norm_inf();
    rep.contractive = rep.norm < 1.0;

    const double gmean = mean_of(G);
    std::vector<double> rhs(nx);
    for (int k = 0; k < nx; ++k) rhs[k] = -(G[k] - gmean);

    std::vector<double> cur(nx, 0.0);
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        auto next = ups.apply(cur);
        for (int k = 0; k < nx; ++k) next[k] += rhs[k];
        cur.swap(next);
        double err = 0.0;
        for (int k = 0; k < nx; ++k) err = std::max(err, std::abs(cur[k] - j0_direct[k]));
        rep.errors.push_back(err);
        rep.sweeps = sweep;
        rep.final_error = err;
        if (err <= 1e-13) break;
        if (!rep.contractive && sweep >= 3) break;
    }
    return rep;
}

// Flux recovered from the mean of the Fredholm form,
//   2J/L^2 = -<G> + sum_i <T_i j0> + <j0 f->,
// an independent cross-check of the J column of the augmented solve.
inline double decomposed_flux(const KernelCoefficients& ker, const PeriodicGrid& grid,
                              const std::vector<double>& G, const std::vector<double>& f_minus,
                              const std::vector<double>& j0) {
    const int nx = grid.nx();
    double acc = -mean_of(G);
    for (int i = 0; i < 4; ++i) {
        auto t = apply_T_i(ker, grid, i, j0);
        acc += mean_of(t);
    }
    double jf = 0.0;
    for (int k = 0; k < nx; ++k) jf += j0[k] * f_minus[k];
    acc += jf / nx;
    return acc * ker.L * ker.L / 2.0;
}

} // namespace gradrubin
