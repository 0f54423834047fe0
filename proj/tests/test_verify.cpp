#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gradrubin/fixed_point.hpp"
#include "gradrubin/verify.hpp"

using namespace gradrubin;

namespace {

BoundaryData zero_data(const PeriodicGrid& g) {
    return {std::vector<double>(g.nx(), 0.0), std::vector<double>(g.nx(), 0.0),
            std::vector<double>(g.nx(), 0.0)};
}

} // namespace

TEST_CASE("verify stencils: exactness classes") {
    PeriodicGrid g(32, 33, 1.0);
    // x stencil (4th order centered) is exact on low trig modes to roundoff.
    ScalarField f(g);
    for (int m = 0; m < g.ny(); ++m)
        for (int k = 0; k < g.nx(); ++k) f(k, m) = g.y(m) * g.y(m) + g.y(m);
    auto fx = vfd::ddx(g, f);
    CHECK(fx.sup_norm() < 1e-13);
    // y stencil (2nd order, one-sided walls) is exact on quadratics.
    auto fy = vfd::ddy(g, f);
    for (int m = 0; m < g.ny(); ++m)
        for (int k = 0; k < g.nx(); ++k)
            CHECK(fy(k, m) == doctest::Approx(2.0 * g.y(m) + 1.0).epsilon(1e-11));
}

TEST_CASE("residual report schema is frozen") {
    SolverConfig c;
    c.nx = 16;
    c.ny = 17;
    c.ode_substeps = 1;
    auto eq = solve(zero_data(c.grid()), c);
    const std::vector<std::string> expected{
        "div_B",          "curl_minus_j",  "transport", "bc_normal_bottom", "bc_normal_top",
        "bc_tangential",  "flux_defect",   "momentum",  "pressure_loop"};
    REQUIRE(eq.report.residuals.entries.size() == expected.size());
    for (size_t i = 0; i < expected.size(); ++i)
        CHECK(eq.report.residuals.entries[i].name == expected[i]);
}

TEST_CASE("negative control: noise trips the transport and momentum residuals") {
    SolverConfig c;
    c.nx = 64; // the 4th-order x-stencil needs this resolution for 1e-6 gates
    c.ny = 65;
    c.ode_substeps = 2;
    PeriodicGrid g = c.grid();
    BoundaryData d = zero_data(g);
    for (int k = 0; k < g.nx(); ++k) {
        d.f_plus[k] = 0.05 * std::cos(g.x(k));
        d.f_minus[k] = d.f_plus[k];
    }
    auto eq = solve(d, c);
    REQUIRE(eq.report.residuals.all_pass());

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1e-3, 1e-3);
    VectorField noisy = eq.B;
    for (auto& v : noisy.c1.values) v += u(rng);
    for (auto& v : noisy.c2.values) v += u(rng);
    auto rep = residual_suite(g, noisy, eq.j, eq.p, eq.J, d, c.residual_tol);
    CHECK(!rep.at("transport").pass);
    CHECK(!rep.at("momentum").pass);
    CHECK(!rep.all_pass());
}

TEST_CASE("holder monitor: trivial and uniform-drift closed forms") {
    PeriodicGrid g(32, 33, 1.0);
    auto cs0 = integrate_characteristics(g, VectorField(g), 2);
    auto rep0 = holder_monitor(cs0, 0.5);
    CHECK(rep0.norm_lambda == 0.0);
    CHECK(rep0.norm_theta == 0.0);
    CHECK(rep0.within_budget);

    const double eps = 0.04, L = g.length(), alpha = 0.5;
    VectorField b(g);
    for (auto& v : b.c1.values) v = eps;
    auto cs = integrate_characteristics(g, b, 2);
    auto rep = holder_monitor(cs, alpha);
    // Lambda = eps*y: sup = eps*L; the quotient peaks on the full-height
    // column pairs at eps * L^(1-alpha).
    CHECK(rep.lambda_sup == doctest::Approx(eps * L).epsilon(1e-10));
    CHECK(rep.lambda_quotient == doctest::Approx(eps * std::pow(L, 1.0 - alpha)).epsilon(0.05));
    CHECK(rep.theta_sup < 1e-12);

    CHECK_THROWS_AS(holder_monitor(cs, 1.2), std::invalid_argument);
}

TEST_CASE("holder monitor: budget flag flips at the threshold") {
    PeriodicGrid g(16, 17, 1.0);
    auto norm_at = [&](double eps) {
        VectorField b(g);
        for (auto& v : b.c1.values) v = eps;
        auto cs = integrate_characteristics(g, b, 1);
        return holder_monitor(cs, 0.5);
    };
    // norm_lambda = eps (L + sqrt(L)) = 2 eps at L = 1; threshold 1/2.
    auto below = norm_at(0.24);
    CHECK(below.norm_lambda < 0.5);
    CHECK(below.within_budget);
    auto above = norm_at(0.26);
    CHECK(above.norm_lambda > 0.5);
    CHECK(!above.within_budget);
}

TEST_CASE("holder monitor: seeded far-pair sample is deterministic") {
    PeriodicGrid g(32, 33, 1.0);
    VectorField b(g);
    for (int m = 0; m < g.ny(); ++m)
        for (int k = 0; k < g.nx(); ++k) b.c1(k, m) = 0.05 * std::sin(g.x(k)) * (1.0 + g.y(m));
    auto cs = integrate_characteristics(g, b, 2);
    auto r1 = holder_monitor(cs, 0.5, 0.5, 0.5, 777);
    auto r2 = holder_monitor(cs, 0.5, 0.5, 0.5, 777);
    CHECK(r1.lambda_quotient == r2.lambda_quotient);
    CHECK(r1.theta_quotient == r2.theta_quotient);
}
