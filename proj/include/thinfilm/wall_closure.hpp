#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "thinfilm/constitutive.hpp"
#include "thinfilm/errors.hpp"
#include "thinfilm/fluid.hpp"
#include "thinfilm/quadrature.hpp"

namespace thinfilm {

/// One cross-section of the film: gap height, pressure gradient, wall speed.
/// The total shear stress varies linearly across the gap,
/// tau(z) = q z + kappa, and kappa (the bottom-wall total shear stress) is
/// the integration constant fixed by the no-slip condition at the top wall.
struct GapConditions {
    double h = 1.0; ///< gap height, > 0 for the solve/derivative operations
    double q = 0.0; ///< pressure gradient p'(x) (signed)
    double s = 0.0; ///< bottom-wall sliding speed (signed)
};

/// Integrals across the gap that every closure quantity is assembled from:
///   psi0   = int_0^h psi(q t + kappa) dt
///   psi1   = int_0^h t psi(q t + kappa) dt
///   slope0 = int_0^h psi'(q t + kappa) dt
///   slope1 = int_0^h t psi'(q t + kappa) dt
///   slope2 = int_0^h t^2 psi'(q t + kappa) dt
struct GapMoments {
    double psi0 = 0.0;
    double psi1 = 0.0;
    double slope0 = 0.0;
    double slope1 = 0.0;
    double slope2 = 0.0;
};

namespace detail {

/// Magnitude scale of the cross-gap problem, used to set absolute
/// quadrature and root tolerances.
inline double closure_scale(const GapConditions& gc, double kappa, const FluidParams& p) {
    const double stress_span = std::abs(gc.q) * std::abs(gc.h) + std::abs(kappa);
    const double rate_bound = stress_span * p.psi_slope_max();
    return std::max({1.0, std::abs(gc.s), std::abs(gc.h) * rate_bound});
}

} // namespace detail

/// Adaptive composite Gauss-Legendre evaluation of the five gap moments for
/// a trial wall stress kappa. abs_tol is an absolute tolerance on each
/// component (16-point panels, bisected until stable).
inline GapMoments gap_moments(const GapConditions& gc, double kappa, const FluidParams& p, double abs_tol) {
    auto integrand = [&](double t) {
        const double rate = shear_rate_of_stress(gc.q * t + kappa, p);
        const double slope = inverse_slope_at_rate(rate, p);
        return std::array<double, 5>{rate, t * rate, slope, t * slope, t * t * slope};
    };
    const auto m = integrate_adaptive<5>(integrand, 0.0, gc.h, abs_tol);
    return {m[0], m[1], m[2], m[3], m[4]};
}

/// Velocity the reconstructed profile would have at the top wall for a trial
/// wall stress:  F(h, q, s, kappa) = int_0^h psi(q t + kappa) dt + s.
/// Vanishes exactly at the correct kappa. Defined for any finite h (the
/// integral is signed); propagates constitutive errors.
inline double wall_velocity_residual(const GapConditions& gc, double kappa, const FluidParams& p) {
    const double tol = 1e-14 * detail::closure_scale(gc, kappa, p);
    auto integrand = [&](double t) { return shear_rate_of_stress(gc.q * t + kappa, p); };
    return integrate_adaptive_scalar(integrand, 0.0, gc.h, tol) + gc.s;
}

/// Solved closure at one cross-section: the wall stress, the moments at
/// that wall stress, and the shear rate at the top wall.
struct WallClosure {
    double kappa = 0.0;
    GapMoments moments;
    double rate_top = 0.0; ///< psi(q h + kappa)

    /// d kappa / dq = -slope1 / slope0; lies in (-h, 0) for h > 0.
    double dq() const noexcept { return -moments.slope1 / moments.slope0; }

    /// d kappa / dh = -psi(q h + kappa) / slope0.
    double dh() const noexcept { return -rate_top / moments.slope0; }

    /// Volume flux across the gap: h s + int_0^h (h - t) psi(q t + kappa) dt.
    double flux(const GapConditions& gc) const noexcept {
        return gc.h * gc.s + gc.h * moments.psi0 - moments.psi1;
    }

    /// d flux / dq = -(slope2 - slope1^2 / slope0); strictly negative by
    /// Cauchy-Schwarz, which is what makes the pointwise flux solve safe.
    double flux_dq() const noexcept {
        return -(moments.slope2 - moments.slope1 * moments.slope1 / moments.slope0);
    }
};

/// Solve F(h, q, s, kappa) = 0 for the wall stress.
///
/// dF/dkappa = slope0 lies in [h/nu, h/(nu(1-9r/8))], so F is strictly
/// increasing in kappa and the current residual immediately brackets the
/// root: from F(k) > 0 the root lies in [k - F nu / h, k]. Newton steps are
/// clamped into that shrinking bracket. The initial guess
/// kappa0 = phi(-s/h) - q h / 2 is exact in both the q = 0 and s = 0 limits.
inline WallClosure resolve_wall_closure(const GapConditions& gc, const FluidParams& p) {
    if (!(gc.h > 0.0))
        throw InvalidGap("resolve_wall_closure: gap height must be > 0, got " + std::to_string(gc.h));
    if (!p.monotone_constitutive())
        throw MonotonicityViolated("resolve_wall_closure: requires r < 8/9");

    double kappa = total_shear_stress(-gc.s / gc.h, p) - gc.q * gc.h / 2.0;

    double scale = detail::closure_scale(gc, kappa, p);
    double quad_tol = 1e-14 * scale;
    GapMoments m = gap_moments(gc, kappa, p, quad_tol);
    double f = m.psi0 + gc.s;
    bool converged = std::abs(f) <= 5e-14 * scale;

    // Bracket from the slope bound, with a safety pad; only the reached-for
    // side needs verification (the current kappa pins the other), and
    // geometric expansion covers the case where round-off defeats the
    // analytic enclosure.
    const double slope_floor = gc.h * p.psi_slope_min();
    double lo = kappa, hi = kappa;
    if (!converged) {
        const double reach = std::abs(f) / slope_floor * (1.0 + 1e-9) + 1e-300;
        auto residual_at = [&](double k) {
            return gap_moments(gc, k, p, 1e-14 * detail::closure_scale(gc, k, p)).psi0 + gc.s;
        };
        int guard = 0;
        double step = reach;
        if (f > 0.0) {
            lo = kappa - reach;
            while (residual_at(lo) > 0.0) {
                lo -= step;
                step *= 2.0;
                if (++guard > 64) throw NoConvergence("resolve_wall_closure: bracket expansion failed");
            }
        } else {
            hi = kappa + reach;
            while (residual_at(hi) < 0.0) {
                hi += step;
                step *= 2.0;
                if (++guard > 64) throw NoConvergence("resolve_wall_closure: bracket expansion failed");
            }
        }
    }

    for (int it = 0; it < 100 && !converged; ++it) {
        if (f > 0.0) hi = kappa; else lo = kappa;

        double next = kappa - f / m.slope0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == kappa) break; // bracket exhausted at round-off
        kappa = next;
        quad_tol = 1e-14 * detail::closure_scale(gc, kappa, p);
        m = gap_moments(gc, kappa, p, quad_tol);
        f = m.psi0 + gc.s;
        scale = detail::closure_scale(gc, kappa, p);
        converged = std::abs(f) <= 5e-14 * scale;
    }
    if (!converged && std::abs(f) > 1e-10 * std::max(1.0, std::abs(gc.s)))
        throw NoConvergence("resolve_wall_closure: wall-stress iteration did not converge");

    WallClosure out;
    out.kappa = kappa;
    out.moments = m;
    out.rate_top = shear_rate_of_stress(gc.q * gc.h + kappa, p);
    return out;
}

/// Wall stress kappa = K(h, q, s).
inline double solve_wall_stress(const GapConditions& gc, const FluidParams& p) {
    return resolve_wall_closure(gc, p).kappa;
}

/// dK/dq, the quotient -int t psi' / int psi'; strictly negative and larger
/// than -h for h > 0. Throws InvariantViolation if numerics ever disagree.
inline double wall_stress_dq(const GapConditions& gc, const FluidParams& p) {
    const double v = resolve_wall_closure(gc, p).dq();
    if (!(v < 0.0) || !(v > -gc.h))
        throw InvariantViolation("wall_stress_dq: value escaped (-h, 0): " + std::to_string(v));
    return v;
}

/// dK/dh = -psi(q h + K) / int_0^h psi'.
inline double wall_stress_dh(const GapConditions& gc, const FluidParams& p) {
    return resolve_wall_closure(gc, p).dh();
}

/// Volume flux int_0^h u1 dz carried by the cross-section.
inline double gap_flux(const GapConditions& gc, const FluidParams& p) {
    return resolve_wall_closure(gc, p).flux(gc);
}

} // namespace thinfilm
