#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace gradrubin {

// Small dense matrix, row-major.
struct DenseMatrix {
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : n_rows(rows), n_cols(cols), a(static_cast<size_t>(rows) * cols, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n_cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n_cols + j]; }

    double norm_1() const {
        double best = 0.0;
        for (int j = 0; j < n_cols; ++j) {
            double s = 0.0;
            for (int i = 0; i < n_rows; ++i) s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    double norm_inf() const {
        double best = 0.0;
        for (int i = 0; i < n_rows; ++i) {
            double s = 0.0;
            for (int j = 0; j < n_cols; ++j) s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        std::vector<double> y(n_rows, 0.0);
        for (int i = 0; i < n_rows; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n_cols; ++j) acc += (*this)(i, j) * x[j];
            y[i] = acc;
        }
        return y;
    }

    int n_rows = 0;
    int n_cols = 0;
    std::vector<double> a;
};

// LU factorization with partial pivoting.
class LuSolver {
public:
    explicit LuSolver(DenseMatrix m) : lu_(std::move(m)) {
        if (lu_.n_rows != lu_.n_cols) throw std::invalid_argument("LuSolver: matrix must be square");
        const int n = lu_.n_rows;
        piv_.resize(n);
        for (int i = 0; i < n; ++i) piv_[i] = i;
        for (int k = 0; k < n; ++k) {
            int p = k;
            double best = std::abs(lu_(k, k));
            for (int i = k + 1; i < n; ++i) {
                const double v = std::abs(lu_(i, k));
                if (v > best) { best = v; p = i; }
            }
            if (best == 0.0) throw std::runtime_error("LuSolver: singular matrix");
            if (p != k) {
                for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
                std::swap(piv_[k], piv_[p]);
            }
            const double inv = 1.0 / lu_(k, k);
            for (int i = k + 1; i < n; ++i) {
                lu_(i, k) *= inv;
                const double lik = lu_(i, k);
                if (lik == 0.0) continue;
                for (int j = k + 1; j < n; ++j) lu_(i, j) -= lik * lu_(k, j);
            }
        }
    }

    std::vector<double> solve(const std::vector<double>& b) const {
        const int n = lu_.n_rows;
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = b[piv_[i]];
        for (int i = 1; i < n; ++i) {
            double acc = x[i];
            for (int j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
            x[i] = acc;
        }
        for (int i = n - 1; i >= 0; --i) {
            double acc = x[i];
            for (int j = i + 1; j < n; ++j) acc -= lu_(i, j) * x[j];
            x[i] = acc / lu_(i, i);
        }
        return x;
    }

    // Solve A^T x = b (needed by the 1-norm condition estimator).
    std::vector<double> solve_transposed(const std::vector<double>& b) const {
        const int n = lu_.n_rows;
        std::vector<double> x = b;
        for (int i = 0; i < n; ++i) {
            double acc = x[i];
            for (int j = 0; j < i; ++j) acc -= lu_(j, i) * x[j];
            x[i] = acc / lu_(i, i);
        }
        for (int i = n - 1; i >= 0; --i) {
            double acc = x[i];
            for (int j = i + 1; j < n; ++j) acc -= lu_(j, i) * x[j];
            x[i] = acc;
        }
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i) out[piv_[i]] = x[i];
        return out;
    }

    int size() const { return lu_.n_rows; }

private:
    DenseMatrix lu_;
    std::vector<int> piv_;
};

// Hager-style 1-norm estimate of ||A^{-1}||_1 from an LU factorization.
inline double inverse_norm1_estimate(const LuSolver& lu) {
    const int n = lu.size();
    std::vector<double> x(n, 1.0 / n);
    double gamma = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        auto y = lu.solve(x);
        double g = 0.0;
        for (double v : y) g += std::abs(v);
        if (g <= gamma) break;
        gamma = g;
        std::vector<double> xi(n);
        for (int i = 0; i < n; ++i) xi[i] = (y[i] >= 0.0) ? 1.0 : -1.0;
        auto z = lu.solve_transposed(xi);
        int jbest = 0;
        double zbest = std::abs(z[0]);
        double zx = 0.0;
        for (int j = 0; j < n; ++j) {
            zx += z[j] * x[j];
            if (std::abs(z[j]) > zbest) { zbest = std::abs(z[j]); jbest = j; }
        }
        if (zbest <= std::abs(zx)) break;
        std::fill(x.begin(), x.end(), 0.0);
        x[jbest] = 1.0;
    }
    return gamma;
}

inline double condition_estimate_1(const DenseMatrix& a, const LuSolver& lu) {
    return a.norm_1() * inverse_norm1_estimate(lu);
}

} // namespace gradrubin
