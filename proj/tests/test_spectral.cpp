#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "gradrubin/grid.hpp"
#include "gradrubin/hyperbolic.hpp"
#include "gradrubin/quadrature.hpp"
#include "gradrubin/spectral.hpp"

using namespace gradrubin;

namespace {

// Independent oracle: plain O(N^2) summation with the same normalization.
SpectralCoeffs dft_by_summation(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    SpectralCoeffs out(n);
    for (int s = 0; s < n; ++s) {
        const int mode = out.mode_of_slot(s);
        cd acc(0.0, 0.0);
        for (int k = 0; k < n; ++k) {
            const double ang = -mode * two_pi * k / n;
            acc += v[k] * cd(std::cos(ang), std::sin(ang));
        }
        out.c[s] = acc / static_cast<double>(n);
    }
    return out;
}

std::vector<double> random_band_limited(const PeriodicGrid& g, unsigned seed, int max_mode = 0) {
    if (max_mode == 0) max_mode = g.max_mode();
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(g.nx(), 0.0);
    for (int n = 0; n <= max_mode; ++n) {
        const double a = u(rng), b = u(rng);
        for (int k = 0; k < g.nx(); ++k)
            v[k] += (n == 0) ? a : a * std::cos(n * g.x(k)) + b * std::sin(n * g.x(k));
    }
    return v;
}

} // namespace

TEST_CASE("dft: constant, single mode, round trip") {
    PeriodicGrid g(32, 9, 1.0);

    std::vector<double> ones(g.nx(), 1.0);
    auto c = dft_forward(ones);
    CHECK(std::abs(c.mode(0) - cd(1.0, 0.0)) < 1e-14);
    for (int n = -16; n < 16; ++n)
        if (n != 0) CHECK(std::abs(c.mode(n)) < 1e-14);

    std::vector<double> cosx(g.nx());
    for (int k = 0; k < g.nx(); ++k) cosx[k] = std::cos(g.x(k));
    auto cc = dft_forward(cosx);
    auto oracle = dft_by_summation(cosx);
    CHECK(std::abs(cc.mode(1) - cd(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(cc.mode(-1) - cd(0.5, 0.0)) < 1e-14);
    for (int s = 0; s < g.nx(); ++s) CHECK(std::abs(cc.c[s] - oracle.c[s]) < 1e-13);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(g.nx());
    for (auto& x : v) x = u(rng);
    auto back = dft_inverse(dft_forward(v));
    for (int k = 0; k < g.nx(); ++k) CHECK(std::abs(back[k] - v[k]) < 1e-13);
}

TEST_CASE("dft: conjugate symmetry and Parseval") {
    PeriodicGrid g(64, 9, 1.0);
    auto v = random_band_limited(g, 11);
    auto c = dft_forward(v);
    for (int n = 1; n < g.nx() / 2; ++n)
        CHECK(std::abs(c.mode(-n) - std::conj(c.mode(n))) < 1e-13);

    double sum_phys = 0.0, sum_spec = 0.0;
    for (double x : v) sum_phys += x * x;
    for (const auto& z : c.c) sum_spec += std::norm(z);
    CHECK(sum_phys / g.nx() == doctest::Approx(sum_spec).epsilon(1e-12));
}

TEST_CASE("hilbert transform: constant, cos -> sin, H o H = -(id - mean)") {
    PeriodicGrid g(32, 9, 1.0);

    auto c0 = dft_forward(std::vector<double>(g.nx(), 3.0));
    auto h0 = dft_inverse(hilbert_transform(c0));
    for (double v : h0) CHECK(std::abs(v) < 1e-14);

    std::vector<double> cosx(g.nx());
    for (int k = 0; k < g.nx(); ++k) cosx[k] = std::cos(g.x(k));
    auto h = dft_inverse(hilbert_transform(dft_forward(cosx)));
    for (int k = 0; k < g.nx(); ++k) CHECK(h[k] == doctest::Approx(std::sin(g.x(k))).epsilon(1e-12));

    // Multiplier composition on a random trig polynomial below the Nyquist mode.
    auto f = random_band_limited(g, 23);
    auto fhat = dft_forward(f);
    const double mean = fhat.mode(0).real();
    auto hh = dft_inverse(hilbert_transform(hilbert_transform(fhat)));
    for (int k = 0; k < g.nx(); ++k) CHECK(hh[k] == doctest::Approx(-(f[k] - mean)).epsilon(1e-12));
}

TEST_CASE("antiderivative in x") {
    PeriodicGrid g(32, 9, 1.0);

    auto a0 = dft_inverse(antiderivative_x(dft_forward(std::vector<double>(g.nx(), 1.0))));
    for (double v : a0) CHECK(std::abs(v) < 1e-14);

    std::vector<double> sinx(g.nx());
    for (int k = 0; k < g.nx(); ++k) sinx[k] = std::sin(g.x(k));
    auto prim = dft_inverse(antiderivative_x(dft_forward(sinx)));
    for (int k = 0; k < g.nx(); ++k)
        CHECK(prim[k] == doctest::Approx(-std::cos(g.x(k))).epsilon(1e-12));

    auto f = random_band_limited(g, 39);
    auto fhat = dft_forward(f);
    const double mean = fhat.mode(0).real();
    auto ddx = dft_inverse(derivative_x(antiderivative_x(fhat)));
    for (int k = 0; k < g.nx(); ++k) CHECK(ddx[k] == doctest::Approx(f[k] - mean).epsilon(1e-12));
}

TEST_CASE("multiplier operators commute") {
    PeriodicGrid g(32, 9, 1.0);
    auto f = random_band_limited(g, 5);
    auto fh = dft_forward(f);
    auto ab = dft_inverse(hilbert_transform(antiderivative_x(fh)));
    auto ba = dft_inverse(antiderivative_x(hilbert_transform(fh)));
    for (int k = 0; k < g.nx(); ++k) CHECK(std::abs(ab[k] - ba[k]) < 1e-12);
    auto cd1 = dft_inverse(derivative_x(hilbert_transform(fh)));
    auto dc = dft_inverse(hilbert_transform(derivative_x(fh)));
    for (int k = 0; k < g.nx(); ++k) CHECK(std::abs(cd1[k] - dc[k]) < 1e-12);
}

TEST_CASE("differentiate: spectral x, finite-difference y") {
    PeriodicGrid g(32, 17, 2.0);
    ScalarField f(g);
    for (int m = 0; m < g.ny(); ++m)
        for (int k = 0; k < g.nx(); ++k) f(k, m) = std::sin(g.x(k));
    auto fx = differentiate(g, f, Axis::X);
    for (int m = 0; m < g.ny(); ++m)
        for (int k = 0; k < g.nx(); ++k)
            CHECK(fx(k, m) == doctest::Approx(std::cos(g.x(k))).epsilon(1e-12));

    ScalarField q(g);
    for (int m = 0; m < g.ny(); ++m)
        for (int k = 0; k < g.nx(); ++k) q(k, m) = g.y(m) * g.y(m);
    auto qy = differentiate(g, q, Axis::Y);
    for (int m = 0; m < g.ny(); ++m)
        for (int k = 0; k < g.nx(); ++k)
            CHECK(qy(k, m) == doctest::Approx(2.0 * g.y(m)).epsilon(1e-10));

    ScalarField c(g, 4.2);
    auto cx = differentiate(g, c, Axis::X);
    CHECK(cx.sup_norm() < 1e-13);

    // Smooth non-polynomial profile: high-order convergence in y.
    auto dy_error = [](int ny) {
        PeriodicGrid gg(8, ny, 1.0);
        ScalarField s(gg);
        for (int m = 0; m < gg.ny(); ++m)
            for (int k = 0; k < gg.nx(); ++k) s(k, m) = std::sin(3.0 * gg.y(m));
        auto sy = differentiate(gg, s, Axis::Y);
        double err = 0.0;
        for (int m = 0; m < gg.ny(); ++m)
            err = std::max(err, std::abs(sy(0, m) - 3.0 * std::cos(3.0 * gg.y(m))));
        return err;
    };
    const double e65 = dy_error(65);
    CHECK(e65 < 1e-6);
    // Order >= 5 observed between Ny = 33 and Ny = 65.
    CHECK(dy_error(33) / e65 > 32.0);
}

TEST_CASE("interpolate: closed form, node reproduction, periodicity") {
    PeriodicGrid g(32, 17, 2.0);
    ScalarField f(g);
    for (int m = 0; m < g.ny(); ++m)
        for (int k = 0; k < g.nx(); ++k) f(k, m) = std::cos(g.x(k)) * g.y(m);
    FieldInterpolant interp(g, f);

    const double L = g.length();
    CHECK(interp.eval(std::numbers::pi / 3.0, L / 2.0) ==
          doctest::Approx(std::cos(std::numbers::pi / 3.0) * L / 2.0).epsilon(1e-10));

    for (int m : {0, 5, g.ny() - 1})
        for (int k : {0, 3, g.nx() - 1})
            CHECK(interp.eval(g.x(k), g.y(m)) == doctest::Approx(f(k, m)).epsilon(1e-12));

    CHECK(interp.eval(1.3, 0.7) == doctest::Approx(interp.eval(1.3 + two_pi, 0.7)).epsilon(1e-12));

    CHECK_THROWS_AS(interp.eval(0.0, -0.5), std::domain_error);
    CHECK_THROWS_AS(interp.eval(0.0, L + 0.5), std::domain_error);
}

TEST_CASE("quadrature weights and cumulative integral") {
    // Cubic integrated exactly by the Simpson/3-8 composites, both parities.
    for (int n : {9, 10}) {
        const double h = 1.0 / (n - 1);
        std::vector<double> f(n);
        for (int i = 0; i < n; ++i) {
            const double y = i * h;
            f[i] = 2.0 * y * y * y - y + 0.25;
        }
        CHECK(integrate_uniform(f, h) == doctest::Approx(0.5 - 0.5 + 0.25).epsilon(1e-13));
    }
    // Smooth profile, 4th-order cumulative rule.
    const int n = 129;
    const double h = 1.0 / (n - 1);
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = std::exp(std::sin(3.0 * i * h));
    auto cum = cumulative_integral(f, h);
    // Reference by fine Simpson.
    const int nf = 1 << 14;
    const double hf = 1.0 / nf;
    std::vector<double> ff(nf + 1);
    for (int i = 0; i <= nf; ++i) ff[i] = std::exp(std::sin(3.0 * i * hf));
    auto wf = composite_weights(nf + 1, hf);
    double ref = 0.0;
    for (int i = 0; i <= nf; ++i) ref += wf[i] * ff[i];
    CHECK(cum[n - 1] == doctest::Approx(ref).epsilon(1e-7));
    // Cubic prefix data integrated exactly at every node.
    std::vector<double> cubic(n);
    for (int i = 0; i < n; ++i) {
        const double y = i * h;
        cubic[i] = y * y * y - 2.0 * y;
    }
    auto cc = cumulative_integral(cubic, h);
    for (int i = 0; i < n; ++i) {
        const double y = i * h;
        CHECK(cc[i] == doctest::Approx(y * y * y * y / 4.0 - y * y).epsilon(1e-12));
    }
}

TEST_CASE("hyperbolic helpers: identities and limits") {
    const double L = 1.0;
    // sinh-ratio identity at (n, y, L) = (3, 0.4, 1).
    CHECK(std::abs(std::exp(-3.0 * 0.4) - kernel_M(3, 0.4, L) -
                   std::sinh(3.0 * 0.6) / std::sinh(3.0)) < 1e-14);
    // M vanishes on the inflow wall, and its n = 0 limit keeps the identity
    // e^{-|n| y} - M = sinh-ratio valid (the limit is y/L, not 0).
    CHECK(kernel_M(5, 0.0, L) == 0.0);
    CHECK(kernel_M(0, 0.3, L) == doctest::Approx(0.3 / L).epsilon(1e-14));
    CHECK(std::abs(1.0 - kernel_M(0, 0.3, L) - sinh_ratio_upper(0, 0.3, L)) < 1e-15);

    CHECK(mult_Q(0, L) == doctest::Approx(L / 2.0));
    CHECK(mult_Q(4, L) == doctest::Approx((std::cosh(4.0) - 1.0) / (4.0 * std::sinh(4.0))).epsilon(1e-14));
    CHECK(mult_R(0, L) == doctest::Approx(2.0 / L));
    CHECK(mult_R(4, L) * mult_Q(4, L) == doctest::Approx(1.0).epsilon(1e-14));
    // Large-mode safety: no overflow, correct asymptote n * Q -> 1.
    CHECK(mult_Q(100000, L) * 100000.0 == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(mult_over_sinh(0, L) == doctest::Approx(1.0 / L));
    CHECK(mult_over_tanh(0, L) == doctest::Approx(1.0 / L));
    CHECK(mult_over_sinh(2, L) == doctest::Approx(2.0 / std::sinh(2.0)).epsilon(1e-14));
    CHECK(mult_over_tanh(2, L) == doctest::Approx(2.0 / std::tanh(2.0)).epsilon(1e-14));

    // Green's function: symmetry and unit derivative jump.
    CHECK(greens_mode(3, 0.2, 0.7, L) == doctest::Approx(greens_mode(3, 0.7, 0.2, L)).epsilon(1e-14));
    const double below = greens_mode_dy(3, 0.5 + 1e-12, 0.5, L);
    const double above = greens_mode_dy(3, 0.5 - 1e-12, 0.5, L);
    CHECK(below - above == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(PeriodicGrid(15, 9, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PeriodicGrid(16, 3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PeriodicGrid(16, 9, -1.0), std::invalid_argument);
    PeriodicGrid g(16, 9, 2.5);
    CHECK(g.x(0) == 0.0);
    CHECK(g.y(0) == 0.0);
    CHECK(g.y(g.ny() - 1) == 2.5);
    CHECK(g.x(1) == doctest::Approx(two_pi / 16.0));
}
