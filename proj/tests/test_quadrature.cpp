#include <doctest.h>

#include <cmath>
#include <vector>

#include "betalike/errors.hpp"
#include "betalike/grid.hpp"
#include "betalike/quadrature.hpp"
#include "oracles.hpp"

using namespace betalike;

TEST_CASE("polynomials integrate exactly") {
    CHECK(integrate_1d([](double x) { return x; }, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    // the embedded Gauss rule is exact through degree 13
    for (int d = 0; d <= 13; ++d) {
        const double got = integrate_1d([d](double x) { return std::pow(x, d); }, 0.0, 1.0);
        CHECK(std::fabs(got - 1.0 / (d + 1)) < 1e-14);
    }
}

TEST_CASE("analytic exponentials") {
    CHECK(std::fabs(integrate_1d([](double x) { return std::exp(-x); }, 0.0, 40.0, 1e-13) - 1.0) <
          1e-12);
}

TEST_CASE("endpoint-singular integrand: Gamma moment of -log theta") {
    // int_0^1 (-log th)^2 / th * th^7 dth = Gamma(3) / 7^3 = 2/343
    const double got = integrate_1d(
        [](double th) { return std::pow(-std::log(th), 2.0) * std::pow(th, 6.0); }, 0.0, 1.0,
        1e-12);
    CHECK(got == doctest::Approx(2.0 / 343.0).epsilon(1e-10));
}

TEST_CASE("non-convergence carries the best estimate") {
    QuadResult r = integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0, 0.0, 0.0, 1);
    CHECK_FALSE(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / 3.0));

    bool threw = false;
    try {
        integrate_1d([](double x) { return std::sqrt(std::fabs(std::sin(30.0 / (x + 1e-3)))); },
                     0.0, 1.0, 1e-15);
    } catch (const NumericalError& e) {
        threw = true;
        CHECK(std::isfinite(e.best_estimate()));
        CHECK(e.error_bound() > 0.0);
    }
    CHECK(threw);
}

TEST_CASE("semi-infinite map") {
    CHECK(integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0, 1e-12) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(integrate_semi_infinite([](double x) { return x * x * x * std::exp(-x); }, 0.0, 1e-12) ==
          doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("normalize_grid basics") {
    Grid1D g{{0.0, 0.5, 1.0}, {2.0, 2.0, 2.0}};
    auto n = normalize_grid(g);
    CHECK(n.constant == doctest::Approx(2.0).epsilon(1e-15));
    for (double v : n.grid.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

    Grid1D spike{{0.0, 0.4, 0.5, 0.6, 1.0}, {0.0, 0.0, 10.0, 0.0, 0.0}};
    auto ns = normalize_grid(spike);
    CHECK(ns.constant == doctest::Approx(trapezoid(spike)).epsilon(1e-15));
    CHECK(trapezoid(ns.grid) == doctest::Approx(1.0).epsilon(1e-12));

    Grid1D bad{{0.0, 1.0}, {1.0, std::nan("")}};
    CHECK_THROWS_AS(normalize_grid(bad), ValidationError);
    Grid1D zero{{0.0, 1.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(normalize_grid(zero), ValidationError);
}

TEST_CASE("normalize_grid is idempotent") {
    Grid1D g{{0.0, 0.3, 0.7, 1.0}, {0.5, 2.5, 1.5, 0.25}};
    auto once = normalize_grid(g);
    auto twice = normalize_grid(once.grid);
    CHECK(twice.constant == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < g.values.size(); ++i)
        CHECK(twice.grid.values[i] == doctest::Approx(once.grid.values[i]).epsilon(1e-14));
}

namespace {

Grid2D gaussian_grid(std::size_t n) {
    Grid2D g;
    g.axis1 = linspace(-6.0, 6.0, n);
    g.axis2 = linspace(-6.0, 6.0, n);
    g.values.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            g.at(i, j) = oracles::normal_pdf(g.axis1[i]) * oracles::normal_pdf(g.axis2[j]);
    return g;
}

}  // namespace

TEST_CASE("marginalize: separability, mass conservation, gaussian") {
    Grid2D g;
    g.axis1 = linspace(0.0, 1.0, 41);
    g.axis2 = linspace(0.0, 2.0, 31);
    g.values.resize(41 * 31);
    auto f = [](double a) { return 1.0 + a * a; };
    auto h = [](double b) { return std::exp(-b); };
    for (std::size_t i = 0; i < 41; ++i)
        for (std::size_t j = 0; j < 31; ++j) g.at(i, j) = f(g.axis1[i]) * h(g.axis2[j]);

    Grid1D m = marginalize(g, 2);
    const double ratio0 = m.values[0] / f(g.axis1[0]);
    for (std::size_t i = 0; i < m.values.size(); ++i)
        CHECK(m.values[i] / f(g.axis1[i]) == doctest::Approx(ratio0).epsilon(1e-12));
    CHECK(trapezoid(m) == doctest::Approx(trapezoid(g)).epsilon(1e-12));

    // constant grid on the unit square -> constant marginal, height 1 after normalize
    Grid2D c;
    c.axis1 = linspace(0.0, 1.0, 11);
    c.axis2 = linspace(0.0, 1.0, 11);
    c.values.assign(121, 3.7);
    auto cm = normalize_grid(marginalize(c, 1));
    for (double v : cm.grid.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    // 2-D gaussian: marginal matches the 1-D gaussian within 1e-4
    auto gg = normalize_grid(gaussian_grid(201)).grid;
    Grid1D gm = marginalize(gg, 1);
    for (std::size_t j = 0; j < gm.points.size(); ++j)
        CHECK(std::fabs(gm.values[j] - oracles::normal_pdf(gm.points[j])) < 1e-4);
}

TEST_CASE("marginalize commutes with scalar multiplication") {
    Grid2D g;
    g.axis1 = linspace(0.0, 1.0, 7);
    g.axis2 = linspace(0.0, 1.0, 9);
    g.values.resize(63);
    for (std::size_t i = 0; i < 63; ++i) g.values[i] = 0.1 * static_cast<double>(i % 11);
    Grid1D m1 = marginalize(g, 2);
    for (double& v : g.values) v *= 3.25;
    Grid1D m2 = marginalize(g, 2);
    for (std::size_t i = 0; i < m1.values.size(); ++i)
        CHECK(m2.values[i] == doctest::Approx(3.25 * m1.values[i]).epsilon(1e-14));
}
