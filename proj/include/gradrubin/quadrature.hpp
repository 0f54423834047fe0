#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace gradrubin {

// Composite quadrature weights on a uniform grid with M = n-1 intervals:
// Simpson for even M, Simpson + 3/8 tail for odd M >= 3. 4th order.
inline std::vector<double> composite_weights(int n, double h) {
    if (n < 2) throw std::invalid_argument("composite_weights: need at least 2 nodes");
    std::vector<double> w(n, 0.0);
    const int intervals = n - 1;
    if (intervals == 1) {
        w[0] = w[1] = h / 2.0;
        return w;
    }
    if (intervals == 2) {
        w[0] = h / 3.0; w[1] = 4.0 * h / 3.0; w[2] = h / 3.0;
        return w;
    }
    int simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;
    for (int i = 0; i + 2 <= simpson_end; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if (intervals % 2 != 0) {
        const int s = simpson_end;
        w[s] += 3.0 * h / 8.0;
        w[s + 1] += 9.0 * h / 8.0;
        w[s + 2] += 9.0 * h / 8.0;
        w[s + 3] += 3.0 * h / 8.0;
    }
    return w;
}

template <typename T>
T integrate_uniform(std::span<const T> f, double h) {
    auto w = composite_weights(static_cast<int>(f.size()), h);
    T acc{};
    for (size_t i = 0; i < f.size(); ++i) acc += w[i] * f[i];
    return acc;
}

template <typename T>
T integrate_uniform(const std::vector<T>& f, double h) {
    return integrate_uniform(std::span<const T>(f), h);
}

// Cumulative integral I_m = int_0^{y_m} f, 4th order: each interval is
// integrated with the cubic through its 4-point neighborhood.
template <typename T>
std::vector<T> cumulative_integral(std::span<const T> f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 4) throw std::invalid_argument("cumulative_integral: need at least 4 nodes");
    std::vector<T> out(n, T{});
    for (int i = 0; i + 1 < n; ++i) {
        T inc;
        if (i == 0) {
            inc = (h / 24.0) * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
        } else if (i == n - 2) {
            inc = (h / 24.0) * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]);
        } else {
            inc = (h / 24.0) * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
        }
        out[i + 1] = out[i] + inc;
    }
    return out;
}

template <typename T>
std::vector<T> cumulative_integral(const std::vector<T>& f, double h) {
    return cumulative_integral(std::span<const T>(f), h);
}

} // namespace gradrubin
