#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support/closed_forms.hpp"
#include "thinfilm/report_json.hpp"
#include "thinfilm/validate.hpp"

using namespace thinfilm;

namespace {

RunConfig drag_flow_config(double lambda_star, double s = 1.0, double h = 1.0) {
    RunConfig cfg;
    cfg.fluid = FluidParams{.nu = 1.0, .r = 0.2, .lambda_star = lambda_star, .s = s};
    cfg.gap = GapProfile::constant(h, 1.0);
    cfg.N = 32;
    cfg.M = 32;
    cfg.solver = SolverChoice::Pointwise;
    return cfg;
}

} // namespace

TEST_CASE("smallness: drag flow passes at s lambda* = h/12 and fails at s lambda* = h") {
    {
        const auto cfg = drag_flow_config(1.0 / 12.0);
        const auto out = run_validation(cfg);
        REQUIRE(out.fields.has_value());
        const auto rep = check_smallness(*out.fields, cfg.fluid);
        CHECK(rep.all_pass);
    }
    {
        const auto cfg = drag_flow_config(1.0);
        const auto out = run_validation(cfg);
        REQUIRE(out.fields.has_value());
        const auto rep = check_smallness(*out.fields, cfg.fluid);
        CHECK_FALSE(rep.all_pass);
        CHECK_FALSE(rep.conditions[0].pass); // lambda* |dz u1| = 1 > 1/12
        CHECK(rep.conditions[0].measured == Catch::Approx(1.0).margin(1e-12));
    }
    {
        const auto cfg = drag_flow_config(0.0);
        const auto out = run_validation(cfg);
        const auto rep = check_smallness(*out.fields, cfg.fluid);
        CHECK(rep.all_pass); // lambda* = 0 makes every left side zero
        for (const auto& c : rep.conditions) CHECK(c.measured == 0.0);
    }
}

TEST_CASE("smallness verdict flips within one part in a thousand of h/12") {
    const double at = 1.0 / 12.0;
    const auto below = drag_flow_config(at * (1.0 - 1e-3));
    const auto above = drag_flow_config(at * (1.0 + 1e-3));
    const auto rep_below = check_smallness(*run_validation(below).fields, below.fluid);
    const auto rep_above = check_smallness(*run_validation(above).fields, above.fluid);
    CHECK(rep_below.conditions[0].pass);
    CHECK_FALSE(rep_above.conditions[0].pass);
}

TEST_CASE("bracket report: collapse at r = 0, feasibility boundary at 2/9") {
    {
        RunConfig cfg = drag_flow_config(0.7);
        cfg.fluid.r = 0.0;
        const auto out = run_validation(cfg);
        const auto br = check_brackets(out.fields->pressure, cfg.gap, cfg.fluid);
        CHECK(br.feasible);
        CHECK(br.collapse_error <= 1e-10);
        CHECK(br.mobility_ok);
        CHECK(br.m == br.M);
    }
    {
        FluidParams p{.nu = 1.0, .r = 0.2};
        CHECK(p.psi_slope_min() / 3.0 - p.psi_slope_max() / 4.0 > 0.0);
    }
    {
        FluidParams p{.nu = 1.0, .r = 0.25};
        CHECK(p.psi_slope_min() / 3.0 - p.psi_slope_max() / 4.0 < 0.0);
        PressureSolution empty;
        const auto br = check_brackets(empty, GapProfile::constant(1.0, 1.0), p);
        CHECK_FALSE(br.feasible);
        CHECK_FALSE(br.mobility_ok);
    }
}

TEST_CASE("drag-flow reference fields: pinned values") {
    FluidParams p{.nu = 1.0, .r = 0.2, .lambda_star = 0.1, .s = 1.0};
    const auto ref = couette_reference(p, 1.0, 1.0, 16, 16);
    // mid-gap velocity is s/2
    bool found_mid = false;
    for (std::size_t j = 0; j < ref.rows(); ++j)
        if (std::abs(ref.z[0][j] - 0.5) < 1e-12) {
            CHECK(ref.u1[0][j] == Catch::Approx(0.5).margin(1e-14));
            found_mid = true;
        }
    CHECK(found_mid);
    const double sig12 = -p.r * p.nu * p.s / (1.0 + p.lambda_star * p.lambda_star * p.s * p.s);
    CHECK(ref.s12[3][5] == Catch::Approx(sig12).margin(1e-14));
    for (double q : ref.pressure.q) CHECK(q == 0.0);

    FluidParams still{.nu = 1.0, .r = 0.2, .lambda_star = 0.1, .s = 0.0};
    const auto zero = couette_reference(still, 1.0, 1.0, 8, 8);
    for (std::size_t j = 0; j < zero.rows(); ++j) {
        CHECK(zero.u1[0][j] == 0.0);
        CHECK(zero.s12[0][j] == 0.0);
    }
}

TEST_CASE("linear-law reference gradient: pinned values") {
    FluidParams p{.nu = 1.0, .r = 0.0, .lambda_star = 0.0, .s = 1.0};
    const auto flat = GapProfile::constant(1.0, 1.0);
    const auto ref0 = newtonian_reference(flat, p, 0.5, 16);
    for (double q : ref0.q) CHECK(q == Catch::Approx(0.0).margin(1e-15));
    const auto ref6 = newtonian_reference(flat, p, 0.0, 16);
    for (double q : ref6.q) CHECK(q == Catch::Approx(6.0).margin(1e-13));

    FluidParams visc{.nu = 1.0, .r = 0.1, .lambda_star = 0.5};
    CHECK_THROWS_AS(newtonian_reference(flat, visc, 0.0, 16), std::invalid_argument);
}

TEST_CASE("full validation: drag flow passes, rest state passes with zero residuals") {
    const auto out = run_validation(drag_flow_config(0.08));
    CHECK_FALSE(out.refused);
    CHECK(out.report.hard_pass);

    RunConfig rest = drag_flow_config(0.5, 0.0);
    rest.flux = 0.0;
    const auto quiet = run_validation(rest);
    CHECK(quiet.report.hard_pass);
    CHECK(quiet.report.residuals.momentum == 0.0);
    CHECK(quiet.report.residuals.divergence == 0.0);

    // every check carries a statement of what it certifies
    for (const auto& c : out.report.checks) CHECK_FALSE(c.basis.empty());
}

TEST_CASE("validation refuses r >= 2/9 and encodes the refusal") {
    RunConfig cfg = drag_flow_config(0.1);
    cfg.fluid.r = 0.25;
    const auto out = run_validation(cfg);
    CHECK(out.refused);
    CHECK_FALSE(out.report.hard_pass);
    CHECK(out.report.refusal.find("RheologyOutOfRange") != std::string::npos);
    CHECK_FALSE(out.primary.has_value());
    CHECK_FALSE(out.fields.has_value());
}

TEST_CASE("validation report is deterministic") {
    const auto cfg = drag_flow_config(0.08);
    const auto a = run_validation(cfg);
    const auto b = run_validation(cfg);
    CHECK(report_to_json(a.report).dump() == report_to_json(b.report).dump());
}

TEST_CASE("report renders and serializes") {
    const auto out = run_validation(drag_flow_config(0.08));
    const std::string text = format_report(out.report);
    CHECK(text.find("[PASS]") != std::string::npos);
    CHECK(text.find("hard checks: all pass") != std::string::npos);

    const auto j = report_to_json(out.report);
    CHECK(j.contains("verdict"));
    CHECK(j.contains("checks"));
    CHECK(j.contains("smallness"));
    CHECK(j.contains("brackets"));
    CHECK(j.contains("residuals"));
    CHECK(j["verdict"]["hard_pass"].get<bool>());
}

TEST_CASE("randomized configurations pass every hard check end to end") {
    oracle::Rng rng(20260809);
    for (int trial = 0; trial < 9; ++trial) {
        RunConfig cfg;
        cfg.fluid = FluidParams{.nu = rng.uniform(0.5, 2.0), .r = rng.uniform(0.0, 0.21),
                                .lambda_star = rng.uniform(0.0, 0.5), .s = rng.uniform(-1.5, 2.0)};
        const int kind = trial % 3;
        if (kind == 0) {
            cfg.gap = GapProfile::slider(rng.uniform(0.5, 1.5), rng.uniform(0.5, 2.5), rng.uniform(0.5, 2.0));
        } else if (kind == 1) {
            const double mean = rng.uniform(0.8, 1.5);
            cfg.gap = GapProfile::cosine(mean, rng.uniform(0.0, 0.4) * mean, rng.uniform(0.5, 2.0));
        } else {
            const double l = rng.uniform(0.8, 1.6);
            cfg.gap = GapProfile::table({0.0, 0.3 * l, 0.7 * l, l},
                                        {rng.uniform(0.7, 1.3), rng.uniform(0.7, 1.3),
                                         rng.uniform(0.7, 1.3), rng.uniform(0.7, 1.3)});
        }
        cfg.flux = default_flux(cfg.gap, cfg.fluid) + rng.uniform(-0.3, 0.3);
        cfg.N = 128;
        cfg.M = 128;
        cfg.solver = SolverChoice::Both;
        CAPTURE(trial, cfg.fluid.nu, cfg.fluid.r, cfg.fluid.lambda_star, cfg.fluid.s, *cfg.flux);
        const auto out = run_validation(cfg);
        CHECK(out.report.hard_pass);
        REQUIRE(out.report.ode_pointwise_deviation.has_value());
        CHECK(*out.report.ode_pointwise_deviation <= 1e-6);
    }
}

TEST_CASE("sampled gap tables validate end to end") {
    RunConfig cfg;
    cfg.fluid = FluidParams{.nu = 1.0, .r = 0.15, .lambda_star = 0.2, .s = 1.0};
    cfg.gap = GapProfile::table({0.0, 0.3, 0.6, 1.0}, {1.0, 0.85, 1.1, 1.4});
    cfg.N = 96;
    cfg.M = 64;
    cfg.solver = SolverChoice::Both;
    const auto out = run_validation(cfg);
    CHECK(out.report.hard_pass);
    CHECK(out.report.residuals.divergence <= 1e-6);
    REQUIRE(out.report.ode_pointwise_deviation.has_value());
    CHECK(*out.report.ode_pointwise_deviation <= 1e-6);
}

TEST_CASE("both-solver validation records the route agreement") {
    RunConfig cfg = drag_flow_config(0.1);
    cfg.gap = GapProfile::slider(1.0, 2.0, 1.0);
    cfg.solver = SolverChoice::Both;
    cfg.N = 48;
    cfg.M = 32;
    const auto out = run_validation(cfg);
    REQUIRE(out.secondary.has_value());
    REQUIRE(out.report.ode_pointwise_deviation.has_value());
    CHECK(*out.report.ode_pointwise_deviation <= 1e-6);
    CHECK(out.report.hard_pass);
}
