#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradrubin {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Discretization of the periodic channel S^1 x [0, L].
// x is spectral: Nx equispaced nodes on [0, 2*pi), first node at 0.
// y is nodal: Ny equispaced nodes on [0, L] including both walls.
class PeriodicGrid {
public:
    PeriodicGrid(int nx, int ny, double length) : nx_(nx), ny_(ny), length_(length) {
        if (nx < 4 || nx % 2 != 0)
            throw std::invalid_argument("PeriodicGrid: Nx must be even and >= 4, got " + std::to_string(nx));
        if (ny < 8)
            throw std::invalid_argument("PeriodicGrid: Ny must be >= 8, got " + std::to_string(ny));
        if (!(length > 0.0))
            throw std::invalid_argument("PeriodicGrid: L must be positive");
        x_nodes_.resize(nx);
        for (int k = 0; k < nx; ++k) x_nodes_[k] = two_pi * k / nx;
        y_nodes_.resize(ny);
        for (int m = 0; m < ny; ++m) y_nodes_[m] = length * m / (ny - 1);
        y_nodes_.front() = 0.0;
        y_nodes_.back() = length;
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double length() const { return length_; }
    double dx() const { return two_pi / nx_; }
    double dy() const { return length_ / (ny_ - 1); }

    const std::vector<double>& x_nodes() const { return x_nodes_; }
    const std::vector<double>& y_nodes() const { return y_nodes_; }
    double x(int k) const { return x_nodes_[k]; }
    double y(int m) const { return y_nodes_[m]; }

    // Fourier mode set {-Nx/2, ..., Nx/2 - 1}. Slot s holds mode s for
    // s < Nx/2 and mode s - Nx otherwise (standard transform ordering).
    int mode_of_slot(int s) const { return s < nx_ / 2 ? s : s - nx_; }
    int slot_of_mode(int n) const { return n >= 0 ? n : n + nx_; }
    int max_mode() const { return nx_ / 2 - 1; }

    bool operator==(const PeriodicGrid& o) const {
        return nx_ == o.nx_ && ny_ == o.ny_ && length_ == o.length_;
    }

private:
    int nx_;
    int ny_;
    double length_;
    std::vector<double> x_nodes_;
    std::vector<double> y_nodes_;
};

// Nodal scalar field on the full grid, level-major: value(k, m) = values[m*Nx + k].
struct ScalarField {
    ScalarField() = default;
    explicit ScalarField(const PeriodicGrid& g, double fill = 0.0)
        : nx(g.nx()), ny(g.ny()), values(static_cast<size_t>(g.nx()) * g.ny(), fill) {}

    double& operator()(int k, int m) { return values[static_cast<size_t>(m) * nx + k]; }
    double operator()(int k, int m) const { return values[static_cast<size_t>(m) * nx + k]; }

    double sup_norm() const {
        double s = 0.0;
        for (double v : values) s = std::max(s, std::abs(v));
        return s;
    }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }

    int nx = 0;
    int ny = 0;
    std::vector<double> values;
};

// Two-component field; components named (b1, b2) for perturbations of (0,1).
struct VectorField {
    VectorField() = default;
    explicit VectorField(const PeriodicGrid& g) : c1(g), c2(g) {}

    double sup_norm() const { return std::max(c1.sup_norm(), c2.sup_norm()); }
    bool all_finite() const { return c1.all_finite() && c2.all_finite(); }

    ScalarField c1;
    ScalarField c2;
};

inline void require_matching(const PeriodicGrid& g, const ScalarField& f, const char* what) {
    if (f.nx != g.nx() || f.ny != g.ny())
        throw std::invalid_argument(std::string(what) + ": field does not match grid");
}

} // namespace gradrubin
