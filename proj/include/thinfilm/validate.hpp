#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "thinfilm/config.hpp"
#include "thinfilm/constitutive.hpp"
#include "thinfilm/errors.hpp"
#include "thinfilm/fields.hpp"
#include "thinfilm/fluid.hpp"
#include "thinfilm/gap_profile.hpp"
#include "thinfilm/quadrature.hpp"
#include "thinfilm/reynolds.hpp"
#include "thinfilm/wall_closure.hpp"

namespace thinfilm {

/// One verified property: measured value against its threshold, a hard/soft
/// tier, and the mathematical statement the check certifies.
struct CheckRecord {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
    bool hard = true;
    std::string basis;    ///< the property being certified, stated mathematically
    std::string location; ///< where the extreme value was attained, when tracked
};

/// The five convergence-regime conditions and their common threshold
/// chi = (nu/6) sqrt(r (1-r)). Failing them does not invalidate the limit
/// solution; it only voids the certified convergence regime, hence the
/// warning tier.
struct SmallnessReport {
    double chi = 0.0;
    std::vector<CheckRecord> conditions;
    bool all_pass = true;
};

/// Mobility and closure-derivative enclosures sampled along the solution,
/// with m = 1/nu and M = 1/(nu (1 - 9r/8)):
///   h^3 (m/3 - M/4) <= -U <= h^3 (M/3 - m/4)   (hard; meaningful iff r < 2/9)
///   -M h / (2 m)   <= dK/dq <= -m h / (2 M)    (warning tier)
struct BracketReport {
    double m = 0.0, M = 0.0;
    bool feasible = false;           ///< m/3 - M/4 > 0, i.e. r < 2/9
    double mobility_low_margin = 0.0;  ///< min over nodes of (-U - lower) / upper
    double mobility_high_margin = 0.0; ///< min over nodes of (upper - (-U)) / upper
    bool mobility_ok = false;
    double dkdq_low_margin = 0.0;  ///< min over nodes of (dKdq - lower) / h
    double dkdq_high_margin = 0.0; ///< min over nodes of (upper - dKdq) / h
    bool dkdq_ok = false;
    double collapse_error = 0.0; ///< r = 0 only: worst |-U - h^3/(12 nu)| / (h^3/(12 nu))
};

struct ValidationReport {
    std::vector<CheckRecord> checks;
    SmallnessReport smallness;
    BracketReport brackets;
    ResidualReport residuals;
    std::string method;
    std::optional<double> ode_pointwise_deviation;
    bool hard_pass = false;
    bool warnings_pass = false;
    std::string refusal; ///< nonempty when the solve was refused outright
};

/// Everything a solve produces: the primary pressure solution (pointwise
/// when both solvers run), the optional second solution, the reconstructed
/// fields and the validation verdict. On refusal only the report is filled.
struct SolveOutcome {
    std::optional<PressureSolution> primary;
    std::optional<PressureSolution> secondary;
    std::optional<LimitFields> fields;
    ValidationReport report;
    bool refused = false;
};

namespace detail {

inline std::string loc_string(double x, double z) {
    std::ostringstream os;
    os.precision(6);
    os << "x = " << x << ", z = " << z;
    return os.str();
}

} // namespace detail

/// Closed-form reference solution for a constant gap: u1 = s (1 - z/h),
/// constant stresses, q = 0, p = 0.
inline LimitFields couette_reference(const FluidParams& p, double h, double L, int N, int M) {
    if (!(h > 0.0)) throw InvalidGap("couette_reference: h must be > 0");
    if (!p.monotone_constitutive()) throw MonotonicityViolated("couette_reference: requires r < 8/9");

    const double rate = -p.s / h;
    const double sig12 = elastic_shear_stress(rate, p);
    const auto [sig11, sig22] = elastic_normal_stresses(rate, p);

    LimitFields f;
    f.x.resize(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) f.x[static_cast<std::size_t>(i)] = L * static_cast<double>(i) / N;
    const std::size_t cols = f.x.size();
    const std::size_t rows = static_cast<std::size_t>(M) + 1;

    f.pressure.x = f.x;
    f.pressure.q.assign(cols, 0.0);
    f.pressure.p.assign(cols, 0.0);
    f.pressure.dq.assign(cols, 0.0);
    f.pressure.flux = p.s * h / 2.0;
    f.pressure.L = L;
    f.pressure.method = SolveMethod::Pointwise;

    f.z.assign(cols, std::vector<double>(rows));
    f.u1.assign(cols, std::vector<double>(rows));
    f.u2.assign(cols, std::vector<double>(rows, 0.0));
    f.s11.assign(cols, std::vector<double>(rows, sig11));
    f.s12.assign(cols, std::vector<double>(rows, sig12));
    f.s22.assign(cols, std::vector<double>(rows, sig22));
    f.dzu1.assign(cols, std::vector<double>(rows, rate));
    f.dzzu1.assign(cols, std::vector<double>(rows, 0.0));
    f.dxu1.assign(cols, std::vector<double>(rows, 0.0));
    f.kappa.assign(cols, total_shear_stress(rate, p));
    f.kprime.assign(cols, 0.0);
    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = 0; j < rows; ++j) {
            const double z = h * (1.0 - std::cos(M_PI * static_cast<double>(j) / M)) / 2.0;
            f.z[i][j] = (j + 1 == rows) ? h : z;
            f.u1[i][j] = p.s * (1.0 - f.z[i][j] / h);
        }
    }
    return f;
}

/// Closed-form Newtonian (lambda* = 0) pressure gradient
/// q = 12 nu (s h / 2 - Q) / h^3; bypasses the closure machinery entirely.
inline PressureSolution newtonian_reference(const GapProfile& gp, const FluidParams& p, double Q, int N) {
    if (p.lambda_star != 0.0)
        throw std::invalid_argument("newtonian_reference: requires lambda_star = 0");
    PressureSolution sol;
    sol.L = gp.length();
    sol.flux = Q;
    sol.method = SolveMethod::Pointwise;
    sol.x.resize(static_cast<std::size_t>(N) + 1);
    sol.q.resize(sol.x.size());
    sol.dq.resize(sol.x.size());
    for (int i = 0; i <= N; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const double x = sol.L * static_cast<double>(i) / N;
        const double h = gp.h(x);
        sol.x[idx] = x;
        sol.q[idx] = 12.0 * p.nu * (p.s * h / 2.0 - Q) / (h * h * h);
        sol.dq[idx] = gp.dh(x) * (-12.0 * p.nu * p.s / (h * h * h) + 36.0 * p.nu * Q / (h * h * h * h));
    }
    sol.p = assemble_pressure(sol.q, gp);
    return sol;
}

/// Evaluate the five convergence-regime sup-norm conditions on the fields.
/// Sup-norms are grid maxima refined once: each column is re-evaluated at
/// the row midpoints through the stored closure (the quantities are
/// pointwise functions of q z + kappa) and the two maxima are Richardson
/// combined.
inline SmallnessReport check_smallness(const LimitFields& f, const FluidParams& p) {
    SmallnessReport rep;
    rep.chi = p.chi();
    const double lam = p.lambda_star;

    struct Tracker {
        double coarse = 0.0, fine = 0.0, loc_x = 0.0, loc_z = 0.0;
    };
    std::array<Tracker, 5> track;

    auto absorb = [&](int which, double value, double x, double z, bool midpoint) {
        Tracker& t = track[static_cast<std::size_t>(which)];
        const double v = std::abs(value);
        if (v > t.fine) {
            t.fine = v;
            t.loc_x = x;
            t.loc_z = z;
        }
        if (!midpoint) t.coarse = std::max(t.coarse, v);
    };

    for (std::size_t i = 0; i < f.stations(); ++i) {
        const double q = f.pressure.q[i];
        const double kappa = f.kappa[i];
        const auto& z = f.z[i];
        auto eval_at = [&](double zz, bool midpoint) {
            const double t = shear_rate_of_stress(q * zz + kappa, p);
            const double s12 = elastic_shear_stress(t, p);
            const auto [s11, s22] = elastic_normal_stresses(t, p);
            const double dzt = q * inverse_slope_at_rate(t, p);
            const double dzs12 = elastic_shear_stress_slope(t, p) * dzt;
            const double dzs11 = -lam * dzt * (s12 + t * elastic_shear_stress_slope(t, p));
            absorb(0, lam * t, f.x[i], zz, midpoint);
            absorb(1, lam * s12, f.x[i], zz, midpoint);
            absorb(2, lam * (std::abs(s11) + std::abs(s22)), f.x[i], zz, midpoint);
            absorb(3, 2.0 * lam * dzs12, f.x[i], zz, midpoint);
            absorb(4, lam * dzs11, f.x[i], zz, midpoint);
        };
        for (std::size_t j = 0; j < z.size(); ++j) {
            eval_at(z[j], false);
            if (j + 1 < z.size()) eval_at(0.5 * (z[j] + z[j + 1]), true);
        }
    }

    const char* names[5] = {"smallness_shear", "smallness_sigma12", "smallness_sigma_diag",
                            "smallness_dz_sigma12", "smallness_dz_sigma11"};
    const char* bases[5] = {
        "lambda* sup|dz u1| <= 1/12",
        "lambda* sup|sigma12| <= chi",
        "lambda* (sup|sigma11| + sup|sigma22|) <= chi",
        "2 lambda* sup|dz sigma12| <= chi",
        "lambda* sup|dz sigma11| <= chi"};
    for (int c = 0; c < 5; ++c) {
        const Tracker& t = track[static_cast<std::size_t>(c)];
        // one Richardson refinement of the grid maximum, kept conservative
        const double extrap = t.fine + (t.fine - t.coarse) / 3.0;
        const double measured = std::max(t.fine, extrap);
        CheckRecord rec;
        rec.name = names[c];
        rec.basis = bases[c];
        rec.measured = measured;
        rec.threshold = (c == 0) ? 1.0 / 12.0 : rep.chi;
        rec.pass = measured <= rec.threshold;
        rec.hard = false;
        rec.location = detail::loc_string(t.loc_x, t.loc_z);
        rep.all_pass = rep.all_pass && rec.pass;
        rep.conditions.push_back(std::move(rec));
    }
    return rep;
}

/// Sample -U and dK/dq along the solution and compare against their
/// enclosures. rel_slack absorbs quadrature round-off in the comparisons.
inline BracketReport check_brackets(const PressureSolution& ps, const GapProfile& gp,
                                    const FluidParams& p, double rel_slack = 1e-8) {
    BracketReport rep;
    rep.m = p.psi_slope_min();
    rep.M = p.psi_slope_max();
    rep.feasible = (rep.m / 3.0 - rep.M / 4.0) > 0.0;

    double lo_margin = std::numeric_limits<double>::infinity();
    double hi_margin = std::numeric_limits<double>::infinity();
    double kp_lo = std::numeric_limits<double>::infinity();
    double kp_hi = std::numeric_limits<double>::infinity();
    double collapse = 0.0;

    for (std::size_t i = 0; i < ps.x.size(); ++i) {
        const double h = gp.h(ps.x[i]);
        const GapConditions gc{h, ps.q[i], p.s};
        const WallClosure wc = resolve_wall_closure(gc, p);
        const double minus_u = -wc.flux_dq();
        const double h3 = h * h * h;
        const double lower = h3 * (rep.m / 3.0 - rep.M / 4.0);
        const double upper = h3 * (rep.M / 3.0 - rep.m / 4.0);
        lo_margin = std::min(lo_margin, (minus_u - lower) / upper);
        hi_margin = std::min(hi_margin, (upper - minus_u) / upper);
        if (p.r == 0.0) {
            const double exact = h3 / (12.0 * p.nu);
            collapse = std::max(collapse, std::abs(minus_u - exact) / exact);
        }
        const double kp = wc.dq();
        const double kp_lower = -rep.M * h / (2.0 * rep.m);
        const double kp_upper = -rep.m * h / (2.0 * rep.M);
        kp_lo = std::min(kp_lo, (kp - kp_lower) / h);
        kp_hi = std::min(kp_hi, (kp_upper - kp) / h);
    }

    rep.mobility_low_margin = lo_margin;
    rep.mobility_high_margin = hi_margin;
    rep.mobility_ok = rep.feasible && lo_margin >= -rel_slack && hi_margin >= -rel_slack;
    rep.dkdq_low_margin = kp_lo;
    rep.dkdq_high_margin = kp_hi;
    rep.dkdq_ok = kp_lo >= -rel_slack && kp_hi >= -rel_slack;
    rep.collapse_error = collapse;
    return rep;
}

namespace detail {

/// Flux of each stored column through the cosine-grid quadrature weights
/// (interpolatory on the clustered rows, so spectrally accurate), an
/// independent route from the adaptive panels the solver used.
inline std::vector<double> column_fluxes(const LimitFields& f) {
    std::vector<double> flux(f.stations());
    const int m = static_cast<int>(f.rows()) - 1;
    for (std::size_t i = 0; i < f.stations(); ++i) {
        const auto w = clenshaw_curtis_weights(m, f.z[i].back());
        double acc = 0.0;
        for (std::size_t j = 0; j < f.rows(); ++j) acc += w[j] * f.u1[i][j];
        flux[i] = acc;
    }
    return flux;
}

inline void add_check(ValidationReport& rep, std::string name, double measured, double threshold,
                      bool hard, std::string basis, std::string location = {}) {
    CheckRecord rec;
    rec.name = std::move(name);
    rec.measured = measured;
    rec.threshold = threshold;
    rec.pass = measured <= threshold;
    rec.hard = hard;
    rec.basis = std::move(basis);
    rec.location = std::move(location);
    rep.checks.push_back(std::move(rec));
}

} // namespace detail

/// Run every property check on a completed solve and aggregate the verdict.
inline ValidationReport run_checks(const LimitFields& f, const GapProfile& gp, const FluidParams& p,
                                   const std::optional<PressureSolution>& secondary = std::nullopt) {
    ValidationReport rep;
    const PressureSolution& ps = f.pressure;
    const double s_scale = std::max(1.0, std::abs(p.s));
    const double q_scale = std::max(1.0, std::abs(ps.flux));

    // boundary values of the reconstructed fields
    double u1_bottom = 0.0, u1_top = 0.0, u2_bottom = 0.0, u2_top = 0.0;
    for (std::size_t i = 0; i < f.stations(); ++i) {
        u1_bottom = std::max(u1_bottom, std::abs(f.u1[i].front() - p.s));
        u1_top = std::max(u1_top, std::abs(f.u1[i].back()));
        u2_bottom = std::max(u2_bottom, std::abs(f.u2[i].front()));
        u2_top = std::max(u2_top, std::abs(f.u2[i].back()));
    }
    detail::add_check(rep, "wall_u1_bottom", u1_bottom, 1e-8 * s_scale, true,
                      "u1(x, 0) = s (driven wall no-slip)");
    detail::add_check(rep, "wall_u1_top", u1_top, 1e-8 * s_scale, true,
                      "u1(x, h) = 0 (fixed wall no-slip; certifies the wall-stress closure)");
    detail::add_check(rep, "wall_u2_bottom", u2_bottom, 1e-8 * s_scale, true,
                      "u2(x, 0) = 0 (walls are impermeable)");
    detail::add_check(rep, "wall_u2_top", u2_top, 1e-6 * s_scale, true,
                      "u2(x, h) = 0 (the gap flux does not vary with x)");

    // algebraic structure
    double trace = 0.0, stress_scale = 1.0;
    for (std::size_t i = 0; i < f.stations(); ++i)
        for (std::size_t j = 0; j < f.rows(); ++j) {
            trace = std::max(trace, std::abs(f.s11[i][j] + f.s22[i][j]));
            stress_scale = std::max(stress_scale, std::abs(f.s12[i][j]));
        }
    detail::add_check(rep, "stress_trace", trace, 0.0, true,
                      "sigma11 + sigma22 = 0 exactly as computed");

    // constitutive layer, re-verified for this parameter set
    {
        double round_trip = 0.0, slope_low = 0.0, slope_high = 0.0;
        for (int k = 0; k <= 200; ++k) {
            const double mag = 1e-6 * std::pow(1e12, k / 200.0);
            for (double t : {mag, -mag}) {
                const double back = shear_rate_of_stress(total_shear_stress(t, p), p);
                round_trip = std::max(round_trip, std::abs(back - t) / std::max(1.0, std::abs(t)));
                const double slope = total_shear_stress_slope(t, p);
                slope_low = std::max(slope_low, p.slope_min() - slope);
                slope_high = std::max(slope_high, slope - p.nu);
            }
        }
        detail::add_check(rep, "constitutive_round_trip", round_trip, 1e-10, true,
                          "psi(phi(t)) = t across twelve decades of shear rate");
        detail::add_check(rep, "constitutive_slope_bounds", std::max({slope_low, slope_high, 0.0}), 1e-12, true,
                          "nu (1 - 9r/8) <= phi' <= nu everywhere");
    }

    // wall-stress root certificate at every station
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < f.stations(); ++i) {
            const GapConditions gc{gp.h(f.x[i]), ps.q[i], p.s};
            worst = std::max(worst, std::abs(wall_velocity_residual(gc, f.kappa[i], p)));
        }
        detail::add_check(rep, "wall_stress_certificate", worst, 1e-10 * s_scale, true,
                          "the solved wall stress zeroes the top-wall velocity residual");
    }

    // flux constancy, solver nodes and reconstructed columns
    detail::add_check(rep, "flux_constancy_nodes", flux_residual_max(ps, gp, p), 1e-8 * q_scale, true,
                      "gap flux equals the prescribed Q at every station");
    const auto fluxes = detail::column_fluxes(f);
    const auto [fmin, fmax] = std::minmax_element(fluxes.begin(), fluxes.end());
    detail::add_check(rep, "flux_spread_fields", (*fmax - *fmin) / q_scale, 1e-6, true,
                      "int_0^h u1 dz re-integrated from the field samples is x-independent");

    // residuals of the limit system
    rep.residuals = system_residuals(f, gp, p);
    detail::add_check(rep, "residual_momentum", rep.residuals.momentum, 1e-6, true,
                      "(1-r) nu d2z u1 - dx p + dz sigma12 = 0");
    detail::add_check(rep, "residual_dzp", rep.residuals.dzp, 1e-15, true,
                      "dz p = 0 (pressure is constant across the gap)");
    detail::add_check(rep, "residual_divergence", rep.residuals.divergence, 1e-6, true,
                      "dx u1 + dz u2 = 0");
    const double closure_tol = 1e-12 * stress_scale;
    detail::add_check(rep, "residual_closure11", rep.residuals.closure11, closure_tol, true,
                      "lambda* dzu1 sigma12 + sigma11 = 0");
    detail::add_check(rep, "residual_closure12", rep.residuals.closure12, closure_tol, true,
                      "sigma12 (1 + lambda*^2 dzu1^2) = r nu dzu1");
    detail::add_check(rep, "residual_closure22", rep.residuals.closure22, closure_tol, true,
                      "sigma22 - lambda* dzu1 sigma12 = 0");

    // zero-mean pressure (h-weighted, matching the normalization quadrature)
    {
        const std::size_t n = ps.x.size();
        std::vector<double> ph(n), hh(n);
        const double dx = ps.L / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            hh[i] = gp.h(ps.x[i]);
            ph[i] = ps.p[i] * hh[i];
        }
        const double zero_mean = std::abs(simpson_integral(ph, dx));
        detail::add_check(rep, "pressure_zero_mean", zero_mean, 1e-8 * simpson_integral(hh, dx), true,
                          "the h-weighted mean of p over the film vanishes");
    }

    // mobility sign and enclosures
    rep.brackets = check_brackets(ps, gp, p);
    detail::add_check(rep, "mobility_bracket",
                      std::max(-std::min(rep.brackets.mobility_low_margin, rep.brackets.mobility_high_margin), 0.0),
                      1e-8, true,
                      "h^3 (m/3 - M/4) <= -U <= h^3 (M/3 - m/4) along the solution, m = 1/nu, M = 1/(nu(1-9r/8))");
    if (p.r == 0.0)
        detail::add_check(rep, "mobility_collapse_r0", rep.brackets.collapse_error, 1e-10, true,
                          "at r = 0 the enclosure collapses: -U = h^3 / (12 nu)");
    detail::add_check(rep, "dkdq_bracket",
                      std::max(-std::min(rep.brackets.dkdq_low_margin, rep.brackets.dkdq_high_margin), 0.0),
                      1e-8, false,
                      "-M h / (2m) <= dK/dq <= -m h / (2M) (reading the enclosure constants as m and M)");

    // closed-form oracles where one exists
    if (gp.kind() == GapProfile::Kind::Constant) {
        const double h = gp.h(0.0);
        const double rate = -p.s / h;
        const double sig12 = elastic_shear_stress(rate, p);
        const auto [sig11, sig22] = elastic_normal_stresses(rate, p);
        double dev = 0.0;
        for (std::size_t i = 0; i < f.stations(); ++i) {
            dev = std::max(dev, std::abs(ps.q[i]));
            for (std::size_t j = 0; j < f.rows(); ++j) {
                dev = std::max(dev, std::abs(f.u1[i][j] - p.s * (1.0 - f.z[i][j] / h)));
                dev = std::max(dev, std::abs(f.s12[i][j] - sig12));
                dev = std::max(dev, std::abs(f.s11[i][j] - sig11));
                dev = std::max(dev, std::abs(f.s22[i][j] - sig22));
                dev = std::max(dev, std::abs(f.u2[i][j]));
            }
        }
        detail::add_check(rep, "oracle_constant_gap", dev, 1e-8 * s_scale, true,
                          "constant gap: u1 = s (1 - z/h), constant stresses, q = 0");
    }
    if (p.lambda_star == 0.0) {
        const PressureSolution ref = newtonian_reference(gp, p, ps.flux, static_cast<int>(ps.x.size()) - 1);
        double dev = 0.0, qmax = 1.0;
        for (std::size_t i = 0; i < ps.x.size(); ++i) {
            dev = std::max(dev, std::abs(ps.q[i] - ref.q[i]));
            qmax = std::max(qmax, std::abs(ref.q[i]));
        }
        detail::add_check(rep, "oracle_newtonian", dev / qmax, 1e-9, true,
                          "lambda* = 0: q = 12 nu (s h/2 - Q) / h^3 in closed form");
    }

    if (secondary) {
        double dev = 0.0, qmax = 1.0;
        for (std::size_t i = 0; i < ps.x.size(); ++i) {
            dev = std::max(dev, std::abs(ps.q[i] - secondary->q[i]));
            qmax = std::max(qmax, std::abs(ps.q[i]));
        }
        rep.ode_pointwise_deviation = dev / qmax;
        detail::add_check(rep, "ode_vs_pointwise", *rep.ode_pointwise_deviation, 1e-6, true,
                          "the gradient equation and the pointwise flux constraint define the same q");
    }

    rep.smallness = check_smallness(f, p);
    for (const auto& c : rep.smallness.conditions) rep.checks.push_back(c);

    rep.hard_pass = true;
    rep.warnings_pass = true;
    for (const auto& c : rep.checks) {
        if (c.hard)
            rep.hard_pass = rep.hard_pass && c.pass;
        else
            rep.warnings_pass = rep.warnings_pass && c.pass;
    }
    return rep;
}

/// Solve per the configuration, reconstruct the fields, run every check.
/// A rheology outside the solvable regime is encoded into the report
/// rather than thrown.
inline SolveOutcome run_validation(const RunConfig& cfg) {
    SolveOutcome out;
    if (!cfg.fluid.reynolds_admissible()) {
        out.refused = true;
        out.report.refusal = "RheologyOutOfRange: solving requires r < 2/9, got r = " +
                             std::to_string(cfg.fluid.r);
        CheckRecord rec;
        rec.name = "rheology_admissible";
        rec.measured = cfg.fluid.r;
        rec.threshold = 2.0 / 9.0;
        rec.pass = false;
        rec.hard = true;
        rec.basis = "the mobility keeps one sign only for r < 2/9; the solve is refused beyond it";
        out.report.checks.push_back(std::move(rec));
        out.report.hard_pass = false;
        out.report.warnings_pass = true;
        out.report.method = to_string(cfg.solver);
        return out;
    }

    const double Q = cfg.resolved_flux();
    switch (cfg.solver) {
        case SolverChoice::Pointwise:
            out.primary = solve_reynolds_pointwise(cfg.gap, cfg.fluid, Q, cfg.N);
            break;
        case SolverChoice::Ode:
            out.primary = solve_reynolds_ode(cfg.gap, cfg.fluid, Q, cfg.N);
            break;
        case SolverChoice::Both:
            out.primary = solve_reynolds_pointwise(cfg.gap, cfg.fluid, Q, cfg.N);
            out.secondary = solve_reynolds_ode(cfg.gap, cfg.fluid, Q, cfg.N);
            break;
    }
    out.fields = assemble_fields(*out.primary, cfg.gap, cfg.fluid, cfg.M);
    out.report = run_checks(*out.fields, cfg.gap, cfg.fluid, out.secondary);
    out.report.method = to_string(cfg.solver);
    return out;
}

/// Human-readable rendering of the verdict, one line per check.
inline std::string format_report(const ValidationReport& rep) {
    std::ostringstream os;
    if (!rep.refusal.empty()) os << "refused: " << rep.refusal << "\n";
    for (const auto& c : rep.checks) {
        os << (c.pass ? "[PASS]" : (c.hard ? "[FAIL]" : "[WARN]")) << " " << c.name
           << ": measured " << c.measured << " vs limit " << c.threshold;
        if (!c.location.empty()) os << " (at " << c.location << ")";
        os << "\n";
    }
    if (rep.ode_pointwise_deviation)
        os << "ode/pointwise max relative deviation: " << *rep.ode_pointwise_deviation << "\n";
    os << "hard checks: " << (rep.hard_pass ? "all pass" : "FAILURES PRESENT") << "\n";
    os << "regime warnings: " << (rep.warnings_pass ? "none" : "present (convergence regime not certified)")
       << "\n";
    return os.str();
}

} // namespace thinfilm
