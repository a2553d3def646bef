#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support/closed_forms.hpp"
#include "thinfilm/fields.hpp"
#include "thinfilm/reynolds.hpp"

using namespace thinfilm;

namespace {

struct DragFlowSetup {
    FluidParams p{.nu = 1.0, .r = 0.2, .lambda_star = 0.1, .s = 1.0};
    GapProfile gp = GapProfile::constant(1.0, 1.0);
    PressureSolution sol;
    DragFlowSetup() { sol = solve_reynolds_pointwise(gp, p, default_flux(gp, p), 32); }
};

} // namespace

TEST_CASE("drag flow reconstructs the linear profile and constant stresses") {
    DragFlowSetup d;
    const auto f = assemble_fields(d.sol, d.gp, d.p, 64);
    const double h = 1.0;
    const double rate = -d.p.s / h;
    const double sig12 = elastic_shear_stress(rate, d.p);
    const auto [sig11, sig22] = elastic_normal_stresses(rate, d.p);

    for (std::size_t i = 0; i < f.stations(); i += 7) {
        for (std::size_t j = 0; j < f.rows(); ++j) {
            const double z = f.z[i][j];
            CHECK(std::abs(f.u1[i][j] - d.p.s * (1.0 - z / h)) <= 1e-12);
            CHECK(std::abs(f.u2[i][j]) <= 1e-12);
            CHECK(std::abs(f.s12[i][j] - sig12) <= 1e-12);
            CHECK(std::abs(f.s11[i][j] - sig11) <= 1e-12);
            CHECK(std::abs(f.s22[i][j] - sig22) <= 1e-12);
            CHECK(std::abs(f.dzu1[i][j] - rate) <= 1e-12);
        }
        CHECK(f.u1[i].front() == d.p.s);
        CHECK(std::abs(f.u1[i].back()) <= 1e-12);
    }

    // the per-point evaluator agrees
    const GapConditions gc{h, 0.0, d.p.s};
    CHECK(streamwise_velocity(0.5, gc, d.p) == Catch::Approx(0.5).margin(1e-12));
    CHECK(shear_profile(0.3, gc, d.p).first == Catch::Approx(rate).margin(1e-13));
    CHECK(shear_profile(0.3, gc, d.p).second == Catch::Approx(0.0).margin(1e-13));
    const auto sig = stress_at(0.77, gc, d.p);
    CHECK(sig[1] == Catch::Approx(sig12).margin(1e-13));
}

TEST_CASE("linear-law velocity profile in closed form") {
    FluidParams lin{.nu = 1.5, .r = 0.0, .lambda_star = 0.0, .s = 0.7};
    oracle::Rng rng(424242);
    for (int trial = 0; trial < 30; ++trial) {
        const double h = rng.uniform(0.4, 2.0);
        const double q = rng.uniform(-10.0, 10.0);
        const GapConditions gc{h, q, lin.s};
        const double kappa = -(q * h / 2.0 + lin.nu * lin.s / h);
        const double z = rng.uniform(0.0, h);
        const double expect = lin.s + (q * z * z / 2.0 + kappa * z) / lin.nu;
        CHECK(streamwise_velocity(z, gc, lin) == Catch::Approx(expect).margin(1e-10));
    }
}

TEST_CASE("shear profile agrees with differences of the velocity") {
    FluidParams p{.nu = 1.0, .r = 0.18, .lambda_star = 0.4, .s = 1.0};
    const GapConditions gc{1.3, -4.0, p.s};
    for (double z : {0.2, 0.65, 1.1}) {
        const double delta = 1e-5;
        const auto [dz1, dz2] = shear_profile(z, gc, p);
        const double fd1 = (streamwise_velocity(z + delta, gc, p) - streamwise_velocity(z - delta, gc, p)) / (2.0 * delta);
        CHECK(std::abs(dz1 - fd1) <= 1e-6 * std::max(1.0, std::abs(dz1)));
        const double fd2 = (shear_profile(z + delta, gc, p).first - shear_profile(z - delta, gc, p).first) / (2.0 * delta);
        CHECK(std::abs(dz2 - fd2) <= 1e-6 * std::max(1.0, std::abs(dz2)));
    }
    CHECK_THROWS_AS(streamwise_velocity(-0.1, gc, p), OutOfGap);
    CHECK_THROWS_AS(streamwise_velocity(1.5, gc, p), OutOfGap);
    CHECK_THROWS_AS(shear_profile(2.0, gc, p), OutOfGap);
    CHECK_THROWS_AS(stress_at(-1.0, gc, p), OutOfGap);
}

TEST_CASE("cross velocity vanishes at both walls and for flat gaps") {
    FluidParams p{.nu = 1.0, .r = 0.2, .lambda_star = 0.1, .s = 1.0};
    const auto slider = GapProfile::slider(1.0, 2.0, 1.0);
    const auto sol = solve_reynolds_pointwise(slider, p, default_flux(slider, p), 64);
    const auto f = assemble_fields(sol, slider, p, 64);
    for (std::size_t i = 0; i < f.stations(); i += 5) {
        CHECK(f.u2[i].front() == 0.0);
        CHECK(std::abs(f.u2[i].back()) <= 1e-6 * std::max(1.0, std::abs(p.s)));
    }

    // flat gap: u2 identically zero through the per-point evaluator as well
    const GapConditions flat{1.0, 0.0, p.s};
    CHECK(std::abs(cross_velocity(0.6, flat, 0.0, 0.0, p)) <= 1e-14);
}

TEST_CASE("streamwise x-derivative matches re-solved differences") {
    FluidParams p{.nu = 1.0, .r = 0.15, .lambda_star = 0.2, .s = 1.0};
    const auto slider = GapProfile::slider(1.0, 2.0, 1.0);
    const double Q = default_flux(slider, p);
    const auto sol = solve_reynolds_pointwise(slider, p, Q, 64);

    const std::size_t i = 30;
    const double x = sol.x[i];
    const GapConditions gc{slider.h(x), sol.q[i], p.s};
    for (double frac : {0.3, 0.7, 0.95}) {
        const double z = frac * gc.h;
        const double dx1 = streamwise_velocity_dx(z, gc, slider.dh(x), sol.dq[i], p);

        const double delta = 1e-3;
        auto u1_at = [&](double xx) {
            const double qq = solve_node_gradient(slider.h(xx), p, Q, sol.q[i]);
            return streamwise_velocity(z, {slider.h(xx), qq, p.s}, p);
        };
        const double fd = (u1_at(x + delta) - u1_at(x - delta)) / (2.0 * delta);
        CHECK(std::abs(dx1 - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("rest state carries exactly zero fields and residuals") {
    FluidParams rest{.nu = 1.0, .r = 0.1, .lambda_star = 0.5, .s = 0.0};
    const auto slider = GapProfile::slider(1.0, 2.0, 1.0);
    const auto sol = solve_reynolds_pointwise(slider, rest, 0.0, 32);
    const auto f = assemble_fields(sol, slider, rest, 32);
    for (std::size_t i = 0; i < f.stations(); ++i)
        for (std::size_t j = 0; j < f.rows(); ++j) {
            CHECK(f.u1[i][j] == 0.0);
            CHECK(f.u2[i][j] == 0.0);
            CHECK(f.s12[i][j] == 0.0);
        }
    const auto rep = system_residuals(f, slider, rest);
    CHECK(rep.momentum == 0.0);
    CHECK(rep.divergence == 0.0);
    CHECK(rep.closure11 == 0.0);
    CHECK(rep.closure12 == 0.0);
    CHECK(rep.closure22 == 0.0);
}

TEST_CASE("drag-flow residuals sit at round-off") {
    DragFlowSetup d;
    const auto f = assemble_fields(d.sol, d.gp, d.p, 128);
    const auto rep = system_residuals(f, d.gp, d.p);
    CHECK(rep.momentum <= 1e-10);
    CHECK(rep.divergence <= 1e-10);
    CHECK(rep.closure11 <= 1e-15);
    CHECK(rep.closure12 <= 1e-15);
    CHECK(rep.closure22 <= 1e-15);
    CHECK(rep.dzp == 0.0);
}

TEST_CASE("refinement in z changes the sampled fields at first order or better") {
    FluidParams p{.nu = 1.0, .r = 0.2, .lambda_star = 0.1, .s = 1.0};
    const auto slider = GapProfile::slider(1.0, 2.0, 1.0);
    const auto sol = solve_reynolds_pointwise(slider, p, default_flux(slider, p), 32);
    const auto coarse = assemble_fields(sol, slider, p, 64);
    const auto fine = assemble_fields(sol, slider, p, 128);
    // the cosine rows nest: row j at M matches row 2j at 2M
    double change = 0.0;
    for (std::size_t i = 0; i < coarse.stations(); ++i)
        for (std::size_t j = 0; j < coarse.rows(); ++j) {
            CHECK(std::isfinite(coarse.u1[i][j]));
            change = std::max(change, std::abs(coarse.u1[i][j] - fine.u1[i][2 * j]));
            change = std::max(change, std::abs(coarse.u2[i][j] - fine.u2[i][2 * j]));
        }
    CHECK(change <= 1.0 / 64.0);
}

TEST_CASE("rescaling: identity, exact halving, decimal factors, guards") {
    DragFlowSetup d;
    const auto f = assemble_fields(d.sol, d.gp, d.p, 32);

    const auto same = rescale_to_epsilon(f, 1.0);
    CHECK(same.epsilon == 1.0);
    CHECK(same.u1[3][5] == f.u1[3][5]);
    CHECK(same.s12[2][7] == f.s12[2][7]);
    CHECK(same.pressure.p[4] == f.pressure.p[4]);

    // eps = 1/2 scales by exact powers of two: bitwise comparisons hold
    const auto half = rescale_to_epsilon(f, 0.5);
    CHECK(half.epsilon == 0.5);
    for (std::size_t i = 0; i < f.stations(); i += 3)
        for (std::size_t j = 0; j < f.rows(); j += 3) {
            CHECK(half.z[i][j] == 0.5 * f.z[i][j]);
            CHECK(half.u2[i][j] == 0.5 * f.u2[i][j]);
            CHECK(half.s11[i][j] == 2.0 * f.s11[i][j]);
            CHECK(half.s12[i][j] == 2.0 * f.s12[i][j]);
            CHECK(half.s22[i][j] == 2.0 * f.s22[i][j]);
            CHECK(half.u1[i][j] == f.u1[i][j]);
        }
    for (std::size_t i = 0; i < f.pressure.p.size(); ++i)
        CHECK(half.pressure.p[i] == 4.0 * f.pressure.p[i]);

    // eps = 0.1: pressure x100, stress x10, cross velocity x0.1
    const auto tenth = rescale_to_epsilon(f, 0.1);
    for (std::size_t i = 0; i < f.stations(); i += 5)
        for (std::size_t j = 0; j < f.rows(); j += 5) {
            CHECK(std::abs(tenth.s12[i][j] - 10.0 * f.s12[i][j]) <= 1e-13 * std::abs(10.0 * f.s12[i][j]) + 1e-300);
            CHECK(std::abs(tenth.u2[i][j] - 0.1 * f.u2[i][j]) <= 1e-13 * std::abs(f.u2[i][j]) + 1e-300);
        }
    for (std::size_t i = 0; i < f.pressure.q.size(); i += 5)
        CHECK(std::abs(tenth.pressure.q[i] - 100.0 * f.pressure.q[i]) <=
              1e-13 * std::abs(100.0 * f.pressure.q[i]) + 1e-300);

    CHECK_THROWS_AS(rescale_to_epsilon(f, 0.0), InvalidEpsilon);
    CHECK_THROWS_AS(rescale_to_epsilon(f, -0.2), InvalidEpsilon);
    CHECK_THROWS_AS(rescale_to_epsilon(f, 1.5), InvalidEpsilon);
    CHECK_THROWS_AS(rescale_to_epsilon(half, 0.5), InvalidEpsilon); // single application only
}
