#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "support/closed_forms.hpp"
#include "thinfilm/fd_weights.hpp"
#include "thinfilm/gap_profile.hpp"
#include "thinfilm/ode45.hpp"
#include "thinfilm/quadrature.hpp"

using namespace thinfilm;

TEST_CASE("16-point panels integrate polynomials up to degree 31 exactly") {
    const double a = 0.3, b = 2.7;
    for (int deg = 0; deg <= 31; ++deg) {
        const double got = gl16([&](double t) { return std::pow(t, deg); }, a, b);
        const double exact = (std::pow(b, deg + 1) - std::pow(a, deg + 1)) / (deg + 1);
        CHECK(std::abs(got - exact) <= 1e-13 * std::abs(exact));
    }
}

TEST_CASE("adaptive quadrature hits requested absolute tolerances") {
    const double e1 = integrate_adaptive_scalar([](double t) { return std::exp(t); }, 0.0, 1.0, 1e-12);
    CHECK(std::abs(e1 - (std::exp(1.0) - 1.0)) <= 1e-12);

    const double runge = integrate_adaptive_scalar([](double t) { return 1.0 / (1.0 + 25.0 * t * t); },
                                                   -1.0, 1.0, 1e-12);
    CHECK(std::abs(runge - 2.0 / 5.0 * std::atan(5.0)) <= 1e-11);

    // reversed limits carry the sign
    const double rev = integrate_adaptive_scalar([](double t) { return t * t; }, 1.0, 0.0, 1e-13);
    CHECK(std::abs(rev + 1.0 / 3.0) <= 1e-12);

    // vector integrand agrees with its scalar components
    const auto vec = integrate_adaptive<2>(
        [](double t) { return std::array<double, 2>{std::sin(t), std::cos(t)}; }, 0.0, 2.0, 1e-12);
    CHECK(std::abs(vec[0] - (1.0 - std::cos(2.0))) <= 1e-11);
    CHECK(std::abs(vec[1] - std::sin(2.0)) <= 1e-11);
}

TEST_CASE("cosine-grid quadrature weights are interpolatory") {
    // exact for polynomials of degree <= M
    const int m = 16;
    const double h = 1.7;
    const auto w = clenshaw_curtis_weights(m, h);
    REQUIRE(w.size() == static_cast<std::size_t>(m) + 1);
    for (int deg = 0; deg <= m; ++deg) {
        double acc = 0.0;
        for (int j = 0; j <= m; ++j) {
            const double z = h * (1.0 - std::cos(M_PI * j / m)) / 2.0;
            acc += w[static_cast<std::size_t>(j)] * std::pow(z, deg);
        }
        const double exact = std::pow(h, deg + 1) / (deg + 1);
        CHECK(std::abs(acc - exact) <= 1e-12 * std::abs(exact));
    }

    // spectral accuracy on a smooth integrand
    const int m2 = 64;
    const auto w2 = clenshaw_curtis_weights(m2, 2.0);
    double acc = 0.0;
    for (int j = 0; j <= m2; ++j) {
        const double z = 2.0 * (1.0 - std::cos(M_PI * j / m2)) / 2.0;
        acc += w2[static_cast<std::size_t>(j)] * std::exp(z);
    }
    CHECK(std::abs(acc - (std::exp(2.0) - 1.0)) <= 1e-12);
}

TEST_CASE("difference weights reproduce the classic uniform stencils") {
    const double dx = 0.25;
    std::vector<double> x{-2.0 * dx, -dx, 0.0, dx, 2.0 * dx};

    const auto w1 = fd_weights(0.0, x, 1);
    const std::vector<double> expect1{1.0, -8.0, 0.0, 8.0, -1.0};
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(w1[i] == Catch::Approx(expect1[i] / (12.0 * dx)).margin(1e-12));

    const auto w2 = fd_weights(0.0, x, 2);
    const std::vector<double> expect2{-1.0, 16.0, -30.0, 16.0, -1.0};
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(w2[i] == Catch::Approx(expect2[i] / (12.0 * dx * dx)).margin(1e-12));
}

TEST_CASE("difference weights differentiate smooth data on scattered nodes") {
    oracle::Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(7);
        x[0] = rng.uniform(-0.6, -0.5);
        for (int i = 1; i < 7; ++i) x[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i - 1)] + rng.uniform(0.05, 0.2);
        const double x0 = 0.5 * (x[2] + x[3]);
        const auto w1 = fd_weights(x0, x, 1);
        const auto w2 = fd_weights(x0, x, 2);
        double d1 = 0.0, d2 = 0.0;
        for (std::size_t i = 0; i < 7; ++i) {
            d1 += w1[i] * std::sin(x[i]);
            d2 += w2[i] * std::sin(x[i]);
        }
        CHECK(std::abs(d1 - std::cos(x0)) <= 1e-7);
        CHECK(std::abs(d2 + std::sin(x0)) <= 1e-5);
    }
}

TEST_CASE("embedded 5(4) integration and dense output") {
    // y' = cos x, y(0) = 0; dense output inherits a few steps' worth of the
    // local tolerance
    auto sol = integrate_dopri5([](double x, double) { return std::cos(x); }, 0.0, 6.0, 0.0, 1e-10, 1e-13);
    for (int i = 0; i <= 600; ++i) {
        const double x = 6.0 * i / 600.0;
        CHECK(std::abs(sol(x) - std::sin(x)) <= 3e-9);
    }

    // y' = -2 x y, y(0) = 1  =>  y = exp(-x^2)
    auto gauss = integrate_dopri5([](double x, double y) { return -2.0 * x * y; }, 0.0, 3.0, 1.0, 1e-11, 1e-14);
    for (int i = 0; i <= 300; ++i) {
        const double x = 3.0 * i / 300.0;
        CHECK(std::abs(gauss(x) - std::exp(-x * x)) <= 5e-10);
    }

    CHECK_THROWS_AS(integrate_dopri5([](double, double y) { return y; }, 1.0, 1.0, 1.0, 1e-9, 1e-12),
                    StepFailure);
}

TEST_CASE("gap profiles: presets evaluate h and h' consistently") {
    const auto flat = GapProfile::constant(0.8, 2.0);
    CHECK(flat.h(1.3) == 0.8);
    CHECK(flat.dh(0.2) == 0.0);
    CHECK(flat.min_gap() == 0.8);

    const auto slider = GapProfile::slider(1.0, 2.0, 4.0);
    CHECK(slider.h(0.0) == 1.0);
    CHECK(slider.h(4.0) == 2.0);
    CHECK(slider.dh(1.0) == Catch::Approx(0.25).margin(1e-15));

    const auto wave = GapProfile::cosine(1.0, 0.3, 1.0);
    CHECK(wave.h(0.0) == Catch::Approx(1.3).margin(1e-15));
    CHECK(wave.h(0.5) == Catch::Approx(0.7).margin(1e-15));
    CHECK(wave.min_gap() == Catch::Approx(0.7).margin(1e-15));
    for (double x : {0.1, 0.37, 0.62}) {
        const double delta = 1e-6;
        const double fd = (wave.h(x + delta) - wave.h(x - delta)) / (2.0 * delta);
        CHECK(std::abs(wave.dh(x) - fd) <= 1e-8);
    }

    CHECK_THROWS_AS(GapProfile::constant(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GapProfile::cosine(1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GapProfile::slider(1.0, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("gap profiles: monotone table interpolation") {
    std::vector<double> x{0.0, 0.5, 1.0, 1.5, 2.0};
    std::vector<double> h{1.0, 0.6, 0.5, 0.9, 1.4};
    const auto gp = GapProfile::table(x, h);
    CHECK(gp.length() == 2.0);
    CHECK(gp.min_gap() == 0.5);

    for (std::size_t i = 0; i < x.size(); ++i) CHECK(gp.h(x[i]) == Catch::Approx(h[i]).margin(1e-14));

    // shape preservation: between samples the interpolant stays inside the
    // data range of the interval
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double lo = std::min(h[i], h[i + 1]) - 1e-12;
        const double hi = std::max(h[i], h[i + 1]) + 1e-12;
        for (int k = 1; k < 40; ++k) {
            const double xx = x[i] + (x[i + 1] - x[i]) * k / 40.0;
            const double v = gp.h(xx);
            CHECK(v >= lo);
            CHECK(v <= hi);
        }
    }

    // C^1: one-sided difference quotients agree at interior knots
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double delta = 1e-7;
        const double left = (gp.h(x[i]) - gp.h(x[i] - delta)) / delta;
        const double right = (gp.h(x[i] + delta) - gp.h(x[i])) / delta;
        CHECK(std::abs(left - right) <= 1e-5);
        CHECK(std::abs(gp.dh(x[i]) - right) <= 1e-5);
    }

    // linear data reproduces exactly
    const auto lin = GapProfile::table({0.0, 1.0, 2.0, 3.0}, {1.0, 1.5, 2.0, 2.5});
    for (double xx : {0.25, 0.9, 1.7, 2.6})
        CHECK(lin.h(xx) == Catch::Approx(1.0 + 0.5 * xx).margin(1e-13));

    CHECK_THROWS_AS(GapProfile::table({0.0, 1.0}, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(GapProfile::table({0.5, 1.0}, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(GapProfile::table({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
}
